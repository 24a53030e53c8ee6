#pragma once

#include <string>
#include <vector>

#include "ordwalk/logsigned.hpp"

#include <json.hpp>

namespace ordwalk {

enum class Regime { Equal, StrictlyDecreasing, StrictlyIncreasing, General };
enum class Kill { Tau, Rho };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);
std::string to_string(Kill k);
Kill kill_from_string(const std::string& s);

// Exponential rates (lambda_1, ..., lambda_d) with an explicit regime tag.
// The tag is assigned by exact comparisons, never with tolerances: nearly
// equal rates are General and are refused by operations whose formulas are
// only valid for a specific regime.
struct Rates {
    std::vector<double> values;
    Regime regime = Regime::General;

    int dim() const { return static_cast<int>(values.size()); }
    double mean() const;
    double geometric_mean() const;
    bool all_distinct() const;
};

Rates classify_rates(const std::vector<double>& values);

// A point of the Weyl chamber x_1 < ... < x_d; the weak variant admits ties
// for boundary starts (e.g. the all-zero start).
struct ChamberPoint {
    std::vector<double> coords;
    bool strict = true;

    ChamberPoint() = default;
    explicit ChamberPoint(std::vector<double> c, bool strict_ordering = true);

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int j) const { return coords[static_cast<size_t>(j)]; }
};

// Gelfand-Tsetlin pattern: layers x^k_j, 1 <= j <= k <= d, with interlacing
// x^{k-1}_{j-1} <= x^k_j <= x^{k-1}_j.
struct GTPattern {
    std::vector<std::vector<double>> layers;

    GTPattern() = default;
    explicit GTPattern(std::vector<std::vector<double>> l);

    int dim() const { return static_cast<int>(layers.size()); }
    const std::vector<double>& bottom() const { return layers.back(); }
};

// Vandermonde product, evaluated in log-signed space.
LogSigned vandermonde_log(const std::vector<double>& coords);
double vandermonde(const ChamberPoint& x);

// Weak interlacing a_1 <= b_1 <= a_2 <= ... <= a_d <= b_d.
bool interlaces(const ChamberPoint& a, const ChamberPoint& b);

void to_json(nlohmann::json& j, const Rates& r);
void from_json(const nlohmann::json& j, Rates& r);
void to_json(nlohmann::json& j, const ChamberPoint& x);
void from_json(const nlohmann::json& j, ChamberPoint& x);
void to_json(nlohmann::json& j, const GTPattern& p);
void from_json(const nlohmann::json& j, GTPattern& p);

}  // namespace ordwalk
