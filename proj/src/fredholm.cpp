#include "ordwalk/fredholm.hpp"

#include <algorithm>
#include <cmath>

#include "ordwalk/errors.hpp"
#include "ordwalk/harmonic.hpp"
#include "ordwalk/quadrature.hpp"
#include "ordwalk/specfun.hpp"

namespace ordwalk {

std::string to_string(Extreme e) { return e == Extreme::Largest ? "largest" : "smallest"; }

Extreme extreme_from_string(const std::string& s) {
    if (s == "largest") return Extreme::Largest;
    if (s == "smallest") return Extreme::Smallest;
    throw InvalidInputError("unknown extreme: " + s);
}

void KernelSpec::validate() const {
    const int dd = d();
    if (times.empty()) throw InvalidInputError("KernelSpec: need at least one time");
    if (times.size() != thresholds.size())
        throw InvalidInputError("KernelSpec: times and thresholds must have equal length");
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 1) throw InvalidInputError("KernelSpec: times must be >= 1");
        if (i > 0 && !(times[i - 1] < times[i]))
            throw InvalidInputError("KernelSpec: times must be strictly increasing");
    }
    if (extreme == Extreme::Largest && times.front() < dd)
        throw DomainError("KernelSpec: Largest requires n_1 >= d");
    if (extreme == Extreme::Smallest && times.size() >= 2 &&
        times.back() - times[times.size() - 2] < dd - 1)
        throw DomainError("KernelSpec: Smallest requires n_m - n_{m-1} >= d-1");
    if (quad.nodes < 4) throw InvalidInputError("KernelSpec: need at least 4 nodes per time");
}

void to_json(nlohmann::json& j, const KernelSpec& s) {
    j = nlohmann::json{{"start", s.x},
                       {"times", s.times},
                       {"thresholds", s.thresholds},
                       {"extreme", to_string(s.extreme)},
                       {"quad", {{"nodes", s.quad.nodes}, {"refine", s.quad.refine}}}};
}

void from_json(const nlohmann::json& j, KernelSpec& s) {
    const auto& start = j.at("start");
    if (start.is_array())
        s.x = ChamberPoint(start.get<std::vector<double>>(), false);
    else
        from_json(start, s.x);
    s.times = j.at("times").get<std::vector<long long>>();
    s.thresholds = j.at("thresholds").get<std::vector<double>>();
    s.extreme = extreme_from_string(j.at("extreme").get<std::string>());
    if (j.contains("quad")) {
        s.quad.nodes = j["quad"].value("nodes", 64);
        s.quad.refine = j["quad"].value("refine", true);
    }
    s.validate();
}

namespace {

SquareMatrix moment_matrix(const ChamberPoint& x, long long base_shape_of_first_row, int d) {
    // Row k: shapes base + k (1-based); entry (k,l) = E[(x_k + G_k)^{l-1}].
    SquareMatrix a(d);
    for (int k = 1; k <= d; ++k) {
        long long shape = base_shape_of_first_row + k;
        for (int l = 1; l <= d; ++l) {
            double s = 0.0;
            double c = 1.0;
            for (int r = 0; r <= l - 1; ++r) {
                if (r > 0) c = c * static_cast<double>(l - r) / static_cast<double>(r);
                s += c * std::pow(x[k - 1], l - 1 - r) * gamma_moment(shape, r);
            }
            a(k - 1, l - 1) = s;
        }
    }
    return a;
}

}  // namespace

SquareMatrix matrix_A(const ChamberPoint& x, long long n_m, int d) {
    if (x.dim() != d) throw DimensionError("matrix_A: dimension mismatch");
    if (n_m < d) throw DomainError("matrix_A: requires n_m >= d so all shapes are >= 1");
    return moment_matrix(x, n_m - d, d);
}

SquareMatrix matrix_B(const ChamberPoint& x, long long n_m, int d) {
    if (x.dim() != d) throw DimensionError("matrix_B: dimension mismatch");
    if (n_m < 1) throw InvalidInputError("matrix_B: requires n_m >= 1");
    SquareMatrix b = moment_matrix(x, n_m - 1, d);
    if (log_det(b).is_zero())
        throw SingularityError("matrix_B: singular", std::numeric_limits<double>::infinity());
    return b;
}

namespace {

// Fully assembled spec with the corrector inverse cached.
struct KernelEngine {
    const KernelSpec& spec;
    int d;
    int m;
    SquareMatrix inv;  // A^{-1} or B^{-1}

    explicit KernelEngine(const KernelSpec& s)
        : spec(s), d(s.d()), m(s.m()),
          inv(mat_inverse(s.extreme == Extreme::Largest ? matrix_A(s.x, s.times.back(), d)
                                                        : matrix_B(s.x, s.times.back(), d))) {}

    long long density_shape(int j, int l) const {  // l is 1-based
        return spec.extreme == Extreme::Largest ? spec.times[j] - d + l : spec.times[j] - 1 + l;
    }

    // int_y^inf f_s(u-y) u^{k-1} du = E[(y + G_s)^{k-1}], the full Gamma
    // moment (the integral covers the whole support).
    double tail_moment(int i, int k, double y) const {  // k is 1-based
        long long s = spec.times.back() - spec.times[i];
        double acc = 0.0;
        double c = 1.0;
        for (int r = 0; r <= k - 1; ++r) {
            if (r > 0) c = c * static_cast<double>(k - r) / static_cast<double>(r);
            acc += c * std::pow(y, k - 1 - r) * gamma_moment(s, r);
        }
        return acc;
    }

    double propagator(int i, double y, int j, double z) const {
        if (i >= j) return 0.0;
        return -gamma_density(spec.times[j] - spec.times[i], z - y);
    }

    double operator()(int i, double y, int j, double z) const {
        double val = propagator(i, y, j, z);
        for (int l = 1; l <= d; ++l) {
            double f = gamma_density(density_shape(j, l), z - spec.x[l - 1]);
            if (f == 0.0) continue;
            double corr = 0.0;
            for (int k = 1; k <= d; ++k) corr += tail_moment(i, k, y) * inv(l - 1, k - 1);
            val += corr * f;
        }
        return val;
    }
};

}  // namespace

double kernel_eval(const KernelSpec& spec, int i, double y, int j, double z) {
    spec.validate();
    if (i < 0 || i >= spec.m() || j < 0 || j >= spec.m())
        throw InvalidInputError("kernel_eval: time index out of range");
    return KernelEngine(spec)(i, y, j, z);
}

double kernel_propagator(const KernelSpec& spec, int i, double y, int j, double z) {
    spec.validate();
    if (i >= j) return 0.0;
    return -gamma_density(spec.times[j] - spec.times[i], z - y);
}

DiscretizedOperator build_discretized_operator(const KernelSpec& spec, int nodes_per_time) {
    spec.validate();
    KernelEngine kernel(spec);
    const int m = spec.m();

    // Everything the kernel can reach lies below x_d + Gamma(n_m + d) tail.
    double upper = spec.x[spec.d() - 1] +
                   gamma_upper_quantile(static_cast<double>(spec.times.back() + spec.d()), 1e-12);
    double lower = spec.x[0];

    DiscretizedOperator out;
    out.m = m;
    out.nodes_per_time = nodes_per_time;
    for (int j = 0; j < m; ++j) {
        double lo, hi;
        if (spec.extreme == Extreme::Largest) {
            lo = spec.thresholds[j];
            hi = upper;
        } else {
            lo = lower;
            hi = spec.thresholds[j];
        }
        if (!(lo < hi)) continue;  // empty restriction at this time
        QuadratureRule rule = gauss_legendre(nodes_per_time, lo, hi);
        out.active.push_back(j);
        out.nodes.push_back(std::move(rule.nodes));
        out.weights.push_back(std::move(rule.weights));
    }

    const int blocks = static_cast<int>(out.active.size());
    const int total = blocks * nodes_per_time;
    if (total == 0) {
        out.op = SquareMatrix(0);
        return out;
    }
    out.op = SquareMatrix(total);
    for (int bi = 0; bi < blocks; ++bi) {
        for (int bj = 0; bj < blocks; ++bj) {
            int ti = out.active[bi], tj = out.active[bj];
            for (int a = 0; a < nodes_per_time; ++a) {
                double y = out.nodes[bi][a];
                double wa = out.weights[bi][a];
                for (int b = 0; b < nodes_per_time; ++b) {
                    double z = out.nodes[bj][b];
                    double wb = out.weights[bj][b];
                    out.op(bi * nodes_per_time + a, bj * nodes_per_time + b) =
                        std::sqrt(wa * wb) * kernel(ti, y, tj, z);
                }
            }
        }
    }
    return out;
}

namespace {

double fredholm_det(const KernelSpec& spec, int nodes) {
    DiscretizedOperator disc = build_discretized_operator(spec, nodes);
    const int total = disc.op.dim;
    if (total == 0) return 1.0;
    SquareMatrix id_minus(total);
    for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j)
            id_minus(i, j) = (i == j ? 1.0 : 0.0) - disc.op(i, j);
    return log_det(id_minus).value();
}

double extreme_cdf_strict(const KernelSpec& spec) {
    double prev = fredholm_det(spec, spec.quad.nodes);
    if (!spec.quad.refine) return std::clamp(prev, 0.0, 1.0);
    for (int nodes = 2 * spec.quad.nodes; nodes <= 16 * spec.quad.nodes; nodes *= 2) {
        double cur = fredholm_det(spec, nodes);
        if (std::abs(cur - prev) <= 1e-6) return std::clamp(cur, 0.0, 1.0);
        prev = cur;
    }
    throw AccuracyError("extreme_cdf: node refinement did not converge to 1e-6", prev,
                        fredholm_det(spec, 16 * spec.quad.nodes));
}

}  // namespace

double extreme_cdf(const KernelSpec& spec) {
    spec.validate();
    bool has_tie = false;
    for (int j = 1; j < spec.d(); ++j)
        if (spec.x[j] == spec.x[j - 1]) has_tie = true;
    if (!has_tie) return extreme_cdf_strict(spec);

    // Weak start: spread ties by (k-1) eps and verify the epsilon sensitivity.
    auto spread = [&](double eps) {
        KernelSpec s = spec;
        std::vector<double> c(spec.x.coords);
        for (int k = 0; k < spec.d(); ++k) c[k] += k * eps;
        s.x = ChamberPoint(c, true);
        return extreme_cdf_strict(s);
    };
    double v1 = spread(1e-6);
    double v2 = spread(0.5e-6);
    if (std::abs(v1 - v2) >= 1e-6)
        throw AccuracyError("extreme_cdf: epsilon-spread of the weak start is not stable", v1, v2);
    return v2;
}

double direct_cdf_single(const ChamberPoint& x, long long n, double xi, Extreme extreme,
                         int nodes) {
    const int d = x.dim();
    if (d > 3) throw CapabilityError("direct_cdf_single: capped at d <= 3");
    if (n < 1) throw InvalidInputError("direct_cdf_single: need n >= 1");
    if (extreme == Extreme::Largest && n < d)
        throw DomainError("direct_cdf_single: Largest requires n >= d");

    double h = h_equal(x).value();
    std::vector<LogSigned> entries(static_cast<size_t>(d) * d);
    auto integrand = [&](std::span<const double> z) {
        for (int i = 0; i < d; ++i) {
            long long shape = (extreme == Extreme::Largest) ? n - d + (i + 1) : n - 1 + (i + 1);
            for (int j = 0; j < d; ++j)
                entries[static_cast<size_t>(i) * d + j] = gamma_density_log(shape, z[j] - x[i]);
        }
        double det = log_det_logmatrix(entries, d).value();
        if (det == 0.0) return 0.0;
        return det * vandermonde_log(std::vector<double>(z.begin(), z.end())).value();
    };

    std::vector<std::pair<double, double>> box(d);
    if (extreme == Extreme::Largest) {
        if (xi <= x[d - 1]) return 0.0;
        for (int j = 0; j < d; ++j) box[j] = {x[j], xi};
    } else {
        double up = gamma_upper_quantile(static_cast<double>(n - 1 + d), 1e-13);
        for (int j = 0; j < d; ++j) box[j] = {std::max(xi, x[j]), x[j] + up};
    }
    double integral = chamber_integrate(integrand, d, box, nodes);
    return std::clamp(integral / h, 0.0, 1.0);
}

}  // namespace ordwalk
