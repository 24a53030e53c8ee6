#include "ordwalk/density.hpp"

#include <algorithm>
#include <cmath>

#include "ordwalk/errors.hpp"
#include "ordwalk/exittime.hpp"
#include "ordwalk/harmonic.hpp"
#include "ordwalk/linalg.hpp"
#include "ordwalk/mcsim.hpp"
#include "ordwalk/quadrature.hpp"
#include "ordwalk/rng.hpp"
#include "ordwalk/specfun.hpp"

namespace ordwalk {

namespace detail {

LogSigned g_raw(std::span<const double> x, std::span<const double> z, long long n,
                std::span<const double> rates, Kill kill) {
    const int d = static_cast<int>(x.size());
    std::vector<LogSigned> entries(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            long long shape = (kill == Kill::Tau) ? n + i - j : n;
            entries[static_cast<size_t>(i) * d + j] = q_poly_log(shape, z[j] - x[i]);
        }
    }
    ScaledDet sd = log_det_logmatrix_scaled(entries, d);
    if (sd.det.is_zero()) return LogSigned::zero();
    if (sd.det.sign < 0) {
        double rel = std::exp(sd.det.logmag - sd.log_scale);
        if (rel > 1e-12)
            throw NumericalConsistencyError(
                "killed density: determinant negative beyond roundoff tolerance");
        return LogSigned::zero();
    }
    double logpref = 0.0;
    for (int j = 0; j < d; ++j)
        logpref += n * std::log(rates[j]) - rates[j] * (z[j] - x[j]);
    return LogSigned(1, sd.det.logmag + logpref);
}

}  // namespace detail

namespace {

void check_query(const KilledDensityQuery& q, Kill expected, const char* who) {
    if (q.kill != expected) throw InvalidInputError(std::string(who) + ": wrong kill tag");
    if (q.x.dim() != q.z.dim() || q.rates.dim() != q.x.dim())
        throw DimensionError(std::string(who) + ": dimension mismatch");
    if (q.n < 1) throw InvalidInputError(std::string(who) + ": need n >= 1");
}

LogSigned h_for_regime(const ChamberPoint& p, const Rates& rates) {
    if (rates.regime == Regime::Equal) return h_equal_scaled(p, rates.values[0]);
    return h_distinct(p, rates);
}

}  // namespace

LogSigned g_tilde(const KilledDensityQuery& q) {
    check_query(q, Kill::Rho, "g_tilde");
    return detail::g_raw(q.x.coords, q.z.coords, q.n, q.rates.values, Kill::Rho);
}

LogSigned g_killed(const KilledDensityQuery& q) {
    check_query(q, Kill::Tau, "g_killed");
    return detail::g_raw(q.x.coords, q.z.coords, q.n, q.rates.values, Kill::Tau);
}

McEstimate g_killed_mixture(const KilledDensityQuery& q, long long samples, std::uint64_t seed) {
    check_query(q, Kill::Tau, "g_killed_mixture");
    if (q.rates.regime != Regime::Equal)
        throw RegimeError("g_killed_mixture: equal rates required");
    const int d = q.x.dim();
    if (q.n < d) throw DomainError("g_killed_mixture: needs n >= d");
    const double lam = q.rates.values[0];
    // Scale to unit rates: G^{(lam)}_n(x,z) = lam^d G^{(1)}_n(lam x, lam z).
    std::vector<double> xs(d), zs(d);
    for (int i = 0; i < d; ++i) {
        xs[i] = lam * q.x[i];
        zs[i] = lam * q.z[i];
    }
    // Base shape n-d+1 so that row/column Gamma shifts rebuild
    // det(f_{n+i-j}); chi_j ~ Gamma(d-j), eta_i ~ Gamma(i-1).
    const long long base = q.n - d + 1;
    StreamRng rng(seed, 0);
    std::vector<LogSigned> entries(static_cast<size_t>(d) * d);
    std::vector<double> chi(d), eta(d);
    double mean = 0.0, m2 = 0.0;
    for (long long s = 0; s < samples; ++s) {
        for (int j = 0; j < d; ++j) {
            chi[j] = 0.0;
            for (int r = 0; r < d - 1 - j; ++r) chi[j] += rng.exponential(1.0);
            eta[j] = 0.0;
            for (int r = 0; r < j; ++r) eta[j] += rng.exponential(1.0);
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                entries[static_cast<size_t>(i) * d + j] =
                    gamma_density_log(base, zs[j] - chi[j] - xs[i] - eta[i]);
        double val = log_det_logmatrix(entries, d).value() * std::pow(lam, d);
        double delta = val - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (val - mean);
    }
    double se = (samples > 1) ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                                          static_cast<double>(samples))
                              : 0.0;
    return {mean, se, samples};
}

LogSigned conditioned_density(const ChamberPoint& x, const ChamberPoint& z, long long n,
                              const Rates& rates) {
    if (rates.regime != Regime::Equal && rates.regime != Regime::StrictlyDecreasing)
        throw RegimeError(
            "conditioned_density: h-transform and conditional limit only coincide for equal or "
            "strictly decreasing rates");
    KilledDensityQuery q{x, z, n, rates, Kill::Tau};
    LogSigned g = g_killed(q);
    if (g.is_zero()) return g;
    return g * h_for_regime(z, rates) / h_for_regime(x, rates);
}

double semigroup_residual(const ChamberPoint& x, const ChamberPoint& z, long long n, long long m,
                          const Rates& rates, Kill kill, const SemigroupOptions& opt) {
    const int d = x.dim();
    if (d > 3) throw CapabilityError("semigroup_residual: quadrature oracle capped at d <= 3");
    if (z.dim() != d || rates.dim() != d) throw DimensionError("semigroup_residual: dimension mismatch");
    if (n < 1 || m < 1) throw InvalidInputError("semigroup_residual: need n, m >= 1");
    int nodes = opt.nodes > 0 ? opt.nodes : (d <= 2 ? 96 : 48);

    double target = detail::g_raw(x.coords, z.coords, n + m, rates.values, kill).value();
    if (target == 0.0) throw InvalidInputError("semigroup_residual: endpoint not reachable");

    std::vector<std::pair<double, double>> box(d);
    for (int j = 0; j < d; ++j) box[j] = {x[j], z[j]};
    double integral = chamber_integrate(
        [&](std::span<const double> y) {
            double a = detail::g_raw(x.coords, y, n, rates.values, kill).value();
            if (a == 0.0) return 0.0;
            double b = detail::g_raw(y, z.coords, m, rates.values, kill).value();
            return a * b;
        },
        d, box, nodes);
    return std::abs(integral - target) / target;
}

McEstimate survival(const ChamberPoint& x, long long n, const Rates& rates, Kill kill,
                    const SurvivalOptions& opt) {
    const int d = x.dim();
    if (rates.dim() != d) throw DimensionError("survival: dimension mismatch");
    if (n < 1) throw InvalidInputError("survival: need n >= 1");
    if (d == 1) return {1.0, 0.0, 0};

    if (opt.method == SurvivalMethod::MonteCarlo) {
        SimConfig cfg;
        cfg.seed = opt.seed;
        cfg.samples = opt.samples;
        cfg.streams = opt.streams;
        cfg.rates = rates;
        cfg.horizon = n;
        return survival_estimate(x, n, rates, kill, cfg);
    }

    if (opt.method == SurvivalMethod::ExactD2) {
        if (d != 2 || kill != Kill::Rho || rates.regime != Regime::Equal)
            throw CapabilityError("survival: ExactD2 requires d = 2, Rho kill, equal rates");
        double lam = rates.values[0];
        return {p2_series(lam * x[0], lam * x[1], n - 1), 0.0, 0};
    }

    if (d > 3) throw CapabilityError("survival: quadrature capped at d <= 3");

    // Certified per-coordinate truncation from the free Gamma(n, lambda_j)
    // marginals; the killed density is dominated by the free one.
    std::vector<std::pair<double, double>> box(d);
    for (int j = 0; j < d; ++j) {
        double lam = rates.values[j];
        double lo = gamma_lower_quantile(static_cast<double>(n), opt.tail) / lam;
        double hi = gamma_upper_quantile(static_cast<double>(n), opt.tail) / lam;
        box[j] = {x[j] + lo, x[j] + hi};
    }

    auto log_g = [&](std::span<const double> z) {
        LogSigned v = detail::g_raw(x.coords, z, n, rates.values, kill);
        return v.is_zero() ? -std::numeric_limits<double>::infinity() : v.logmag;
    };

    // Probe a coarse ordered lattice for the integrand's log scale.
    double scale = -std::numeric_limits<double>::infinity();
    const int probes = 7;
    std::vector<double> zp(d);
    std::vector<int> idx(d, 0);
    for (;;) {
        bool ordered = true;
        for (int j = 0; j < d; ++j) {
            double t = (idx[j] + 1.0) / (probes + 1.0);
            zp[j] = box[j].first + t * (box[j].second - box[j].first);
            if (j > 0 && zp[j] <= zp[j - 1]) ordered = false;
        }
        if (ordered) scale = std::max(scale, log_g(zp));
        int a = 0;
        while (a < d && ++idx[a] == probes) idx[a++] = 0;
        if (a == d) break;
    }
    if (scale == -std::numeric_limits<double>::infinity()) scale = 0.0;

    auto f = [&](std::span<const double> z) {
        double lg = log_g(z);
        return std::isfinite(lg) ? std::exp(lg - scale) : 0.0;
    };

    double prev = 0.0;
    bool have_prev = false;
    double result = 0.0;
    for (int nodes = opt.nodes; nodes <= opt.max_nodes; nodes *= 2) {
        result = chamber_integrate(f, d, box, nodes);
        if (have_prev && std::abs(result - prev) <=
                             opt.refine_tol * std::max(std::abs(result), 1e-300))
            break;
        prev = result;
        have_prev = true;
    }
    double p = result * std::exp(scale);
    return {std::clamp(p, 0.0, 1.0), 0.0, 0};
}

double llt_ratio(const ChamberPoint& x, const ChamberPoint& z, long long n, Kill kill) {
    const int d = x.dim();
    if (z.dim() != d) throw DimensionError("llt_ratio: dimension mismatch");
    std::vector<double> rates(d, 1.0);
    std::vector<double> endpoint(z.coords);
    for (double& v : endpoint) v += static_cast<double>(n);

    LogSigned g = detail::g_raw(x.coords, endpoint, n, rates, kill);
    if (g.is_zero()) return 0.0;

    double log_chi = -0.5 * d * std::log(2.0 * M_PI);
    for (int j = 1; j < d; ++j) log_chi -= log_factorial(j);

    LogSigned harm = (kill == Kill::Tau)
                         ? detail::h_equal_raw(x.coords) * h_hat(z)
                         : vandermonde_log(x.coords) * vandermonde_log(z.coords);
    double power = 0.5 * d * (d - 1) + 0.5 * d;
    return g.sign * harm.sign *
           std::exp(g.logmag + power * std::log(static_cast<double>(n)) - log_chi - harm.logmag);
}

}  // namespace ordwalk
