#include "ordwalk/walkmodel.hpp"

#include <algorithm>
#include <cmath>

#include "ordwalk/errors.hpp"

namespace ordwalk {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Equal: return "equal";
        case Regime::StrictlyDecreasing: return "strictly_decreasing";
        case Regime::StrictlyIncreasing: return "strictly_increasing";
        case Regime::General: return "general";
    }
    return "general";
}

Regime regime_from_string(const std::string& s) {
    if (s == "equal") return Regime::Equal;
    if (s == "strictly_decreasing") return Regime::StrictlyDecreasing;
    if (s == "strictly_increasing") return Regime::StrictlyIncreasing;
    if (s == "general") return Regime::General;
    throw InvalidInputError("unknown regime: " + s);
}

std::string to_string(Kill k) { return k == Kill::Tau ? "tau" : "rho"; }

Kill kill_from_string(const std::string& s) {
    if (s == "tau") return Kill::Tau;
    if (s == "rho") return Kill::Rho;
    throw InvalidInputError("unknown stopping time: " + s);
}

double Rates::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double Rates::geometric_mean() const {
    double s = 0.0;
    for (double v : values) s += std::log(v);
    return std::exp(s / static_cast<double>(values.size()));
}

bool Rates::all_distinct() const {
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = i + 1; j < values.size(); ++j)
            if (values[i] == values[j]) return false;
    return true;
}

Rates classify_rates(const std::vector<double>& values) {
    if (values.empty()) throw InvalidInputError("classify_rates: need at least one rate");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidInputError("classify_rates: rates must be positive and finite");

    bool equal = true, dec = true, inc = true;
    for (size_t i = 1; i < values.size(); ++i) {
        if (values[i] != values[0]) equal = false;
        if (!(values[i - 1] > values[i])) dec = false;
        if (!(values[i - 1] < values[i])) inc = false;
    }
    Rates r;
    r.values = values;
    if (equal) r.regime = Regime::Equal;
    else if (dec && values.size() > 1) r.regime = Regime::StrictlyDecreasing;
    else if (inc && values.size() > 1) r.regime = Regime::StrictlyIncreasing;
    else r.regime = Regime::General;
    return r;
}

ChamberPoint::ChamberPoint(std::vector<double> c, bool strict_ordering)
    : coords(std::move(c)), strict(strict_ordering) {
    if (coords.empty()) throw InvalidInputError("ChamberPoint: need d >= 1");
    for (double v : coords)
        if (!std::isfinite(v)) throw InvalidInputError("ChamberPoint: non-finite coordinate");
    for (size_t i = 1; i < coords.size(); ++i) {
        if (strict && !(coords[i - 1] < coords[i]))
            throw InvalidInputError("ChamberPoint: coordinates must be strictly increasing");
        if (!strict && !(coords[i - 1] <= coords[i]))
            throw InvalidInputError("ChamberPoint: coordinates must be nondecreasing");
    }
}

GTPattern::GTPattern(std::vector<std::vector<double>> l) : layers(std::move(l)) {
    if (layers.empty()) throw InvalidInputError("GTPattern: need at least one layer");
    for (size_t k = 0; k < layers.size(); ++k) {
        if (layers[k].size() != k + 1)
            throw InvalidInputError("GTPattern: layer k must have k entries");
        if (k == 0) continue;
        for (size_t j = 0; j < layers[k].size(); ++j) {
            // x^{k-1}_{j-1} <= x^k_j <= x^{k-1}_j with boundary conventions.
            if (j >= 1 && !(layers[k - 1][j - 1] <= layers[k][j]))
                throw InvalidInputError("GTPattern: interlacing violated (lower)");
            if (j < layers[k - 1].size() && !(layers[k][j] <= layers[k - 1][j]))
                throw InvalidInputError("GTPattern: interlacing violated (upper)");
        }
    }
}

LogSigned vandermonde_log(const std::vector<double>& coords) {
    LogSigned acc = LogSigned::one();
    for (size_t i = 0; i < coords.size(); ++i)
        for (size_t j = i + 1; j < coords.size(); ++j)
            acc *= LogSigned::from_value(coords[j] - coords[i]);
    return acc;
}

double vandermonde(const ChamberPoint& x) { return vandermonde_log(x.coords).value(); }

bool interlaces(const ChamberPoint& a, const ChamberPoint& b) {
    if (a.dim() != b.dim()) throw DimensionError("interlaces: dimension mismatch");
    for (int j = 0; j < a.dim(); ++j) {
        if (!(a[j] <= b[j])) return false;
        if (j + 1 < a.dim() && !(b[j] <= a[j + 1])) return false;
    }
    return true;
}

void to_json(nlohmann::json& j, const Rates& r) {
    j = nlohmann::json{{"rates", r.values}, {"regime", to_string(r.regime)}};
}

void from_json(const nlohmann::json& j, Rates& r) {
    std::vector<double> vals = j.at("rates").get<std::vector<double>>();
    r = classify_rates(vals);
    if (j.contains("regime")) {
        Regime stated = regime_from_string(j.at("regime").get<std::string>());
        if (stated != r.regime)
            throw InvalidInputError("rates JSON: regime tag inconsistent with values");
    }
}

void to_json(nlohmann::json& j, const ChamberPoint& x) {
    j = nlohmann::json{{"coords", x.coords}, {"strict", x.strict}};
}

void from_json(const nlohmann::json& j, ChamberPoint& x) {
    bool strict = j.value("strict", true);
    x = ChamberPoint(j.at("coords").get<std::vector<double>>(), strict);
}

void to_json(nlohmann::json& j, const GTPattern& p) { j = nlohmann::json{{"layers", p.layers}}; }

void from_json(const nlohmann::json& j, GTPattern& p) {
    p = GTPattern(j.at("layers").get<std::vector<std::vector<double>>>());
}

}  // namespace ordwalk
