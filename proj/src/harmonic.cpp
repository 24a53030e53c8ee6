#include "ordwalk/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "ordwalk/errors.hpp"
#include "ordwalk/quadrature.hpp"
#include "ordwalk/rng.hpp"
#include "ordwalk/specfun.hpp"
#include "ordwalk/linalg.hpp"

namespace ordwalk {

namespace {

double binom(long long n, long long k) {
    double acc = 1.0;
    for (long long r = 0; r < k; ++r) acc = acc * static_cast<double>(n - r) / static_cast<double>(r + 1);
    return acc;
}

double falling(long long n, long long k) {
    double acc = 1.0;
    for (long long r = 0; r < k; ++r) acc *= static_cast<double>(n - r);
    return acc;
}

int h2_sign(int d) { return (d * (d - 1) / 2) % 2 == 0 ? 1 : -1; }

void require_all_distinct(const std::vector<double>& rates, const char* who) {
    for (size_t i = 0; i < rates.size(); ++i)
        for (size_t j = i + 1; j < rates.size(); ++j)
            if (rates[i] == rates[j]) throw RegimeError(std::string(who) + ": rates must be pairwise distinct");
}

}  // namespace

namespace detail {

LogSigned h_equal_raw(const std::vector<double>& coords) {
    const int d = static_cast<int>(coords.size());
    if (d == 1) return LogSigned::one();
    // h is exactly translation invariant; centering keeps the moment matrix
    // well conditioned far from the origin.
    double mean = 0.0;
    for (double c : coords) mean += c;
    mean /= d;
    SquareMatrix m(d);
    for (int i = 0; i < d; ++i) {        // row: power i
        for (int j = 0; j < d; ++j) {    // column: coordinate j, eta_j ~ Gamma(j,1) (0-based)
            double s = 0.0;
            double xc = coords[j] - mean;
            for (int r = 0; r <= i; ++r)
                s += binom(i, r) * gamma_moment(j, r) * std::pow(xc, i - r);
            m(i, j) = s;
        }
    }
    return log_det(m);
}

LogSigned h_phi_raw(const std::vector<double>& coords) {
    const int d = static_cast<int>(coords.size());
    // The column factor e^{-x_j} cancels exactly against the e^{sum x_j}
    // prefactor, leaving the determinant of the polynomial parts
    // P_{ik}(x) = sum_r C(k,r) (i-1)_(r) x^{i-1-r} (-1)^{k-r}, k = d-j.
    SquareMatrix m(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            int k = d - 1 - j;  // derivative order for column j (0-based)
            double s = 0.0;
            for (int r = 0; r <= std::min(k, i); ++r) {
                double sign = ((k - r) % 2 == 0) ? 1.0 : -1.0;
                s += sign * binom(k, r) * falling(i, r) * std::pow(coords[j], i - r);
            }
            m(i, j) = s;
        }
    }
    LogSigned det = log_det(m);
    return LogSigned(det.sign * h2_sign(d), det.logmag);
}

LogSigned h_laguerre_raw(const std::vector<double>& coords) {
    const int d = static_cast<int>(coords.size());
    for (double c : coords)
        if (c == 0.0) throw DomainError("h_equal_laguerre: zero coordinate (negative powers appear)");
    auto laguerre = [](int n, int alpha, double x) {
        // L_n^{(alpha)}(x) = sum_k (-1)^k C(n+alpha, n-k) x^k / k!, with the
        // generalized binomial as a falling-factorial product (alpha may be
        // a negative integer here).
        double s = 0.0;
        double xk = 1.0, kfact = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) { xk *= x; kfact *= k; }
            double c = 1.0;
            for (int r = 0; r < n - k; ++r) c = c * static_cast<double>(n + alpha - r) / static_cast<double>(r + 1);
            s += ((k % 2 == 0) ? 1.0 : -1.0) * c * xk / kfact;
        }
        return s;
    };
    SquareMatrix m(d);
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j)
            m(i - 1, j - 1) = std::pow(coords[j - 1], i + j - 1 - d) * laguerre(d - j, j + i - 1 - d, coords[j - 1]);
    LogSigned det = log_det(m);
    double logpref = 0.0;
    for (int j = 1; j < d; ++j) logpref += log_factorial(j);
    return LogSigned(det.sign * h2_sign(d), det.logmag + logpref);
}

LogSigned h_distinct_raw(const std::vector<double>& coords, const std::vector<double>& rates) {
    const int d = static_cast<int>(coords.size());
    std::vector<LogSigned> entries(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            entries[static_cast<size_t>(i) * d + j] =
                LogSigned::from_log((i - j) * std::log(rates[i]) - rates[i] * coords[j]);
    LogSigned det = log_det_logmatrix(entries, d);
    double pref = 0.0;
    for (int i = 0; i < d; ++i) pref += rates[i] * coords[i];
    return LogSigned(det.sign, det.logmag + pref);
}

LogSigned frak_distinct_raw(const std::vector<double>& coords, const std::vector<double>& rates) {
    const int d = static_cast<int>(coords.size());
    std::vector<LogSigned> entries(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            entries[static_cast<size_t>(i) * d + j] = LogSigned::from_log(-rates[i] * coords[j]);
    LogSigned det = log_det_logmatrix(entries, d);
    double pref = 0.0;
    for (int i = 0; i < d; ++i) pref += rates[i] * coords[i];
    return LogSigned(det.sign, det.logmag + pref);
}

}  // namespace detail

LogSigned h_equal(const ChamberPoint& x) { return detail::h_equal_raw(x.coords); }

LogSigned h_equal_scaled(const ChamberPoint& x, double lambda) {
    if (!(lambda > 0.0)) throw InvalidInputError("h_equal_scaled: lambda must be positive");
    std::vector<double> scaled(x.coords);
    for (double& v : scaled) v *= lambda;
    return detail::h_equal_raw(scaled);
}

LogSigned h_equal_phi(const ChamberPoint& x) { return detail::h_phi_raw(x.coords); }

LogSigned h_equal_laguerre(const ChamberPoint& x) { return detail::h_laguerre_raw(x.coords); }

LogSigned h_distinct(const ChamberPoint& x, const Rates& rates) {
    if (rates.dim() != x.dim()) throw DimensionError("h_distinct: dimension mismatch");
    require_all_distinct(rates.values, "h_distinct");
    return detail::h_distinct_raw(x.coords, rates.values);
}

LogSigned h_hat(const ChamberPoint& z) { return h_hat_scaled(z, 1.0); }

LogSigned h_hat_scaled(const ChamberPoint& z, double lambda) {
    std::vector<double> rev(z.coords.rbegin(), z.coords.rend());
    for (double& v : rev) v = -lambda * v;
    return detail::h_equal_raw(rev);
}

LogSigned frak_h(const ChamberPoint& x, const Rates& rates) {
    if (rates.dim() != x.dim()) throw DimensionError("frak_h: dimension mismatch");
    if (rates.regime == Regime::Equal) return vandermonde_log(x.coords);
    if (!rates.all_distinct())
        throw RegimeError("frak_h: rates must be all-equal or pairwise distinct");
    return detail::frak_distinct_raw(x.coords, rates.values);
}

double harmonicity_residual(const ChamberPoint& x, const Rates& rates, Kill which,
                            const ResidualOptions& opt) {
    const int d = x.dim();
    if (rates.dim() != d) throw DimensionError("harmonicity_residual: dimension mismatch");
    if (d > 3) throw CapabilityError("harmonicity_residual: quadrature oracle capped at d <= 3");
    const bool equal = rates.regime == Regime::Equal;
    if (!equal) require_all_distinct(rates.values, "harmonicity_residual");
    const double lambda0 = rates.values[0];

    auto hval = [&](std::span<const double> z) {
        std::vector<double> zz(z.begin(), z.end());
        if (which == Kill::Tau) {
            if (equal) {
                for (double& v : zz) v *= lambda0;
                return detail::h_equal_raw(zz).value();
            }
            return detail::h_distinct_raw(zz, rates.values).value();
        }
        if (equal) return vandermonde_log(zz).value();
        return detail::frak_distinct_raw(zz, rates.values).value();
    };

    double href = hval(std::span<const double>(x.coords.data(), d));
    auto density = [&](std::span<const double> z) {
        double logp = 0.0;
        for (int j = 0; j < d; ++j) {
            double lam = rates.values[j];
            logp += std::log(lam) - lam * (z[j] - x[j]);
        }
        return std::exp(logp);
    };

    double expectation = 0.0;
    if (which == Kill::Tau) {
        // One step stays in the chamber: z in W^d with z_j > x_j.
        std::vector<std::pair<double, double>> box(d);
        for (int j = 0; j < d; ++j) {
            double len = -std::log(opt.tail) / rates.values[j] + 30.0 / rates.values[j];
            box[j] = {x[j], x[j] + len};
        }
        expectation = chamber_integrate(
            [&](std::span<const double> z) { return density(z) * hval(z); }, d, box, opt.nodes);
    } else {
        // Interlacing x < z is the box z_j in [x_j, x_{j+1}], z_d unbounded above.
        std::vector<std::pair<double, double>> box(d);
        for (int j = 0; j + 1 < d; ++j) box[j] = {x[j], x[j + 1]};
        double len = -std::log(opt.tail) / rates.values[d - 1] + 30.0 / rates.values[d - 1];
        box[d - 1] = {x[d - 1], x[d - 1] + len};
        expectation = box_integrate(
            [&](std::span<const double> z) { return density(z) * hval(z); }, d, box, opt.nodes);
    }
    return std::abs(expectation - href) / std::abs(href);
}

double boundary_residual(const ChamberPoint& x_on_face, int j, const Rates& rates) {
    const int d = x_on_face.dim();
    if (j < 2 || j > d) throw InvalidInputError("boundary_residual: need 2 <= j <= d");
    const auto& c = x_on_face.coords;
    if (c[j - 1] != c[j - 2])
        throw InvalidInputError("boundary_residual: x_j must equal x_{j-1}");
    for (int k = 1; k < d; ++k)
        if (k != j - 1 && c[k] == c[k - 1])
            throw InvalidInputError("boundary_residual: exactly one adjacent tie expected");

    const bool equal = rates.regime == Regime::Equal;
    if (!equal) require_all_distinct(rates.values, "boundary_residual");
    auto eval = [&](const std::vector<double>& z) {
        if (equal) {
            std::vector<double> zz(z);
            for (double& v : zz) v *= rates.values[0];
            return detail::h_equal_raw(zz).value();
        }
        return detail::h_distinct_raw(z, rates.values).value();
    };

    double h0 = eval(c);
    double step = 1e-5 * (1.0 + std::abs(c[j - 1]));
    std::vector<double> up(c), down(c);
    up[j - 1] += step;
    down[j - 1] -= step;
    double deriv = (eval(up) - eval(down)) / (2.0 * step);
    double lam = rates.values[j - 1];
    return std::abs(lam * h0 - deriv) / std::abs(h0);
}

double distinct_to_equal_limit(const ChamberPoint& x, double eps) {
    const int d = x.dim();
    if (d == 1) return 0.0;
    if (!(eps > 0.0)) throw InvalidInputError("distinct_to_equal_limit: eps must be positive");
    std::vector<double> lam(d);
    for (int i = 0; i < d; ++i) lam[i] = 1.0 + (d - 1 - i) * eps;
    LogSigned hl = detail::h_distinct_raw(x.coords, lam);
    LogSigned dl = vandermonde_log(lam);
    LogSigned ratio = hl / dl;
    double corrected = h2_sign(d) * ratio.value();
    double logpref = 0.0;
    for (int j = 1; j < d; ++j) logpref += log_factorial(j);
    double target = detail::h_equal_raw(x.coords).value() / std::exp(logpref);
    return std::abs(corrected - target) / std::abs(target);
}

double psi_identity_check(const ChamberPoint& x, const Rates& rates, long long samples,
                          std::uint64_t seed, int part) {
    const int d = x.dim();
    if (rates.dim() != d) throw DimensionError("psi_identity_check: dimension mismatch");
    if (part < 1 || part > 3) throw InvalidInputError("psi_identity_check: part must be 1, 2 or 3");
    if (part == 1 && rates.regime != Regime::Equal)
        throw RegimeError("psi_identity_check part 1: equal rates required");
    if (part == 2 && !rates.all_distinct())
        throw RegimeError("psi_identity_check part 2: distinct rates required");
    if (part == 3) {
        if (rates.regime != Regime::StrictlyIncreasing)
            throw RegimeError("psi_identity_check part 3: strictly increasing rates required");
        if (std::abs(rates.mean() - 1.0) > 1e-12)
            throw InvalidInputError("psi_identity_check part 3: rates must have mean 1");
    }

    double target;
    if (part == 1) {
        // E[Delta(x + Psi)] at rate lambda is lambda^{-d(d-1)/2} h_1(lambda x).
        double lam = rates.values[0];
        LogSigned h = h_equal_scaled(x, lam);
        target = LogSigned(h.sign, h.logmag - (d * (d - 1) / 2) * std::log(lam)).value();
    } else if (part == 2) {
        target = h_distinct(x, rates).value();
    } else {
        double pref = 0.0;
        for (int i = 0; i < d; ++i) pref += (rates.values[i] - 1.0) * x[i];
        target = std::exp(pref) * h_equal(x).value();
    }

    StreamRng rng(seed, /*stream=*/0);
    double mean = 0.0, m2 = 0.0;
    std::vector<std::vector<double>> v(d + 1);            // v[j][i] = V_j^i, 1-based j
    for (int j = 1; j <= d; ++j) v[j].assign(static_cast<size_t>(j), 0.0);
    std::vector<double> shifted(d);
    for (long long s = 0; s < samples; ++s) {
        for (int j = 2; j <= d; ++j) {
            double acc = 0.0;
            v[j][0] = 0.0;
            for (int i = 1; i < j; ++i) {
                acc += rng.exponential(rates.values[j - 1]);
                v[j][i] = acc;
            }
        }
        bool a_event = true;
        for (int j = 2; j < d && a_event; ++j)
            for (int i = 1; i < j && a_event; ++i)
                if (!(x[j - 1] + v[j][i] <= x[j] + v[j + 1][i])) a_event = false;

        double val = 0.0;
        if (a_event) {
            for (int j = 0; j < d; ++j) shifted[j] = x[j] + (j == 0 ? 0.0 : v[j + 1][j]);
            if (part == 1) {
                val = vandermonde_log(shifted).value();
            } else if (part == 2) {
                val = detail::frak_distinct_raw(shifted, rates.values).value();
            } else {
                double tilt = 0.0, pref = 0.0;
                for (int j = 0; j < d; ++j) tilt += (rates.values[j] - 1.0) * shifted[j];
                for (int j = 0; j < d; ++j) pref += (1.0 - (j + 1)) * std::log(rates.values[j]);
                val = std::exp(tilt + pref) * vandermonde_log(shifted).value();
            }
        }
        double delta = val - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (val - mean);
    }
    double variance = m2 / static_cast<double>(samples - 1);
    double se = std::sqrt(variance / static_cast<double>(samples));
    if (se == 0.0) return mean == target ? 0.0 : std::numeric_limits<double>::infinity();
    return (mean - target) / se;
}

}  // namespace ordwalk
