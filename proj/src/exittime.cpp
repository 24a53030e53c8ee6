#include "ordwalk/exittime.hpp"

#include <algorithm>
#include <cmath>

#include "ordwalk/density.hpp"
#include "ordwalk/errors.hpp"
#include "ordwalk/harmonic.hpp"
#include "ordwalk/linalg.hpp"
#include "ordwalk/quadrature.hpp"
#include "ordwalk/specfun.hpp"

namespace ordwalk {

namespace {

// Stable large-gap form: expanding the elementary finite sum of K_{n-1/2}
// turns the Bessel integral into positive incomplete-gamma terms.
double p2_gamma_form(double y, long long n) {
    double total = 0.0;
    double logn1 = log_factorial(n - 1);
    for (long long k = 0; k <= n - 1; ++k) {
        double logc = std::lgamma(static_cast<double>(n + k)) - log_factorial(k) -
                      (n - 1 + k) * std::log(2.0) - logn1;
        total += std::exp(logc) * reg_lower_gamma(static_cast<double>(n - k), y);
    }
    return total;
}

double p2_series_core(double y, long long n) {
    // The alternating series loses roughly e^y of precision to cancellation;
    // beyond y = 25 evaluate through the incomplete-gamma form instead.
    if (y > 25.0 && n >= 0) return p2_gamma_form(y, n + 1);

    const double logy = std::log(y);
    long double sum = 0.0L;
    int sign_n = (n % 2 == 0) ? 1 : -1;
    long long k = 1;
    for (;; ++k) {
        if (k > 2 * n + 200000)
            throw NumericalConsistencyError("p2_series: truncation bound never reached");
        LogSigned c = log_binomial_signed(0.5 * k - 1.0, n);
        if (!c.is_zero()) {
            double logterm = c.logmag + k * logy - log_factorial(k);
            int s = sign_n * c.sign * ((k % 2 == 1) ? 1 : -1);
            sum += s * std::exp(static_cast<long double>(logterm));
        }
        if (k >= 2 * n + 2) {
            // Majorant of the generalized binomial growth: (k/2)^n y^k /(n! k!).
            double bound = n * std::log(0.5 * (k + 1)) + (k + 1) * logy -
                           log_factorial(n) - log_factorial(k + 1);
            double floor_log = std::log(1e-14) + std::log(std::max(std::abs(static_cast<double>(sum)), 1e-30));
            if (bound < floor_log) break;
        }
    }
    return static_cast<double>(sum);
}

}  // namespace

double p2_series(double x1, double x2, long long n) {
    if (n < 0) throw InvalidInputError("p2_series: need n >= 0");
    if (x1 == x2) return 0.0;
    if (x1 > x2) return -p2_series(x2, x1, n);
    return p2_series_core(x2 - x1, n);
}

double p2_bessel(double x1, double x2, long long n) {
    if (n < 1) throw InvalidInputError("p2_bessel: need n >= 1");
    if (!(x1 < x2)) throw DomainError("p2_bessel: requires x1 < x2");
    return p2_gamma_form(x2 - x1, n);
}

double rho_survival_pf(const ChamberPoint& x, long long n) {
    const int d = x.dim();
    if (n < 1) throw InvalidInputError("rho_survival_pf: need n >= 1");
    if (d == 1) return 1.0;

    SquareMatrix p(d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double v = p2_series(x[i], x[j], n - 1);
            p(i, j) = v;
            p(j, i) = -v;
        }

    double value = 0.0;
    if (d % 2 == 0) {
        value = pfaffian(p).value();
    } else {
        for (int l = 0; l < d; ++l) {
            if (d == 1) { value += 1.0; continue; }
            SquareMatrix sub(d - 1);
            int ri = 0;
            for (int i = 0; i < d; ++i) {
                if (i == l) continue;
                int rj = 0;
                for (int j = 0; j < d; ++j) {
                    if (j == l) continue;
                    sub(ri, rj) = p(i, j);
                    ++rj;
                }
                ++ri;
            }
            double pf = pfaffian(sub).value();
            value += (l % 2 == 0 ? 1.0 : -1.0) * pf;
        }
    }
    if (value < -1e-10)
        throw NumericalConsistencyError("rho_survival_pf: negative probability beyond tolerance");
    return std::clamp(value, 0.0, 1.0);
}

double x_const(int d) {
    if (d < 1) throw InvalidInputError("x_const: need d >= 1");
    double lg = 0.0;
    for (int j = 1; j <= d; ++j) lg += std::lgamma(0.5 * j);
    lg -= 0.5 * d * std::log(M_PI);
    for (int j = 1; j < d; ++j) lg -= log_factorial(j);
    return std::exp(lg);
}

double gamma_rate(const Rates& rates) {
    if (rates.regime == Regime::Equal) return 0.0;
    return rates.dim() * std::log(rates.mean() / rates.geometric_mean());
}

namespace {

// h for an equal-rate-lambda walk in the paper's normalization
// E[Delta(x + eta^{(lambda)})] = lambda^{-d(d-1)/2} h_1(lambda x).
double h_equal_rate(const ChamberPoint& x, double lambda) {
    LogSigned h = h_equal_scaled(x, lambda);
    int d = x.dim();
    return LogSigned(h.sign, h.logmag - 0.5 * d * (d - 1) * std::log(lambda)).value();
}

double chi_const(int d) {
    double lg = -0.5 * d * std::log(2.0 * M_PI);
    for (int j = 1; j < d; ++j) lg -= log_factorial(j);
    return std::exp(lg);
}

double gap_integral(const Rates& rates, Kill kill, int quad_nodes) {
    const int d = rates.dim();
    if (d > 3) throw CapabilityError("constant_K: GapIntegral capped at d <= 3");
    const double mean = rates.mean();
    if (d == 1) return 1.0;

    // Integrate over W^d with z_1 pinned at 0 (the integrand is invariant
    // along the diagonal, so this is the per-unit-diagonal-length value).
    double decay = 0.0;
    for (int j = 1; j < d; ++j) decay += rates.values[j] - mean;
    decay /= (d - 1);
    double trunc = 120.0 / decay;

    auto integrand = [&](std::span<const double> g) {
        std::vector<double> z(d);
        z[0] = 0.0;
        for (int j = 1; j < d; ++j) z[j] = g[j - 1];
        double tilt = 0.0;
        for (int j = 0; j < d; ++j) tilt -= (rates.values[j] - mean) * z[j];
        double harm;
        if (kill == Kill::Tau) {
            ChamberPoint zp(z, false);
            LogSigned hh = h_hat_scaled(zp, mean);
            harm = LogSigned(hh.sign, hh.logmag - 0.5 * d * (d - 1) * std::log(mean)).value();
        } else {
            harm = vandermonde_log(z).value();
        }
        return std::exp(tilt) * harm;
    };
    std::vector<std::pair<double, double>> box(d - 1, {0.0, trunc});
    double integral = chamber_integrate(integrand, d - 1, box, quad_nodes);
    return chi_const(d) * integral;
}

double empirical_fit(const Rates& rates, const KOptions& opt) {
    const int d = rates.dim();
    if (d == 1) return 1.0;
    ChamberPoint x = opt.x;
    if (x.dim() != d) {
        std::vector<double> c(d);
        for (int j = 0; j < d; ++j) c[j] = j;
        x = ChamberPoint(c);
    }
    const double mean = rates.mean();
    const double gam = gamma_rate(rates);
    const double power = 0.5 * d * (d - 1) + 0.5 * d;
    double tilt = 0.0;
    for (int j = 0; j < d; ++j) tilt += (rates.values[j] - mean) * x[j];
    double harm = (opt.kill == Kill::Tau) ? h_equal_rate(x, mean)
                                          : vandermonde_log(x.coords).value();
    double denom = std::log(harm) + tilt;

    double acc = 0.0;
    long long points = std::max<long long>(opt.n_points, 2);
    for (long long i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(points - 1);
        long long n = static_cast<long long>(std::lround(
            std::exp(std::log(static_cast<double>(opt.n_lo)) +
                     t * (std::log(static_cast<double>(opt.n_hi)) -
                          std::log(static_cast<double>(opt.n_lo))))));
        SurvivalOptions sopt;
        sopt.nodes = opt.quad_nodes;
        McEstimate p = survival(x, n, rates, opt.kill, sopt);
        acc += std::log(p.estimate) + gam * n + power * std::log(static_cast<double>(n)) - denom;
    }
    return std::exp(acc / static_cast<double>(points));
}

}  // namespace

double constant_K(const Rates& rates, const KOptions& opt) {
    if (rates.dim() > 1 && rates.regime != Regime::StrictlyIncreasing)
        throw RegimeError("constant_K: strictly increasing rates required");
    if (opt.mode == KMode::GapIntegral) return gap_integral(rates, opt.kill, opt.quad_nodes);
    return empirical_fit(rates, opt);
}

TailPrediction tail_predict(const ChamberPoint& x, long long n, const Rates& rates, Kill kill,
                            std::optional<double> k_const) {
    const int d = x.dim();
    if (rates.dim() != d) throw DimensionError("tail_predict: dimension mismatch");
    if (n < 1) throw InvalidInputError("tail_predict: need n >= 1");
    TailPrediction out;
    out.regime = rates.regime;

    if (d == 1) {
        out.value = 1.0;
        return out;
    }

    switch (rates.regime) {
        case Regime::Equal: {
            double lam = rates.values[0];
            std::vector<double> scaled(x.coords);
            for (double& v : scaled) v *= lam;
            out.decomposition.constant = x_const(d);
            out.decomposition.power = 0.25 * d * (d - 1);
            out.decomposition.harmonic = (kill == Kill::Tau)
                                             ? detail::h_equal_raw(scaled).value()
                                             : vandermonde_log(scaled).value();
            break;
        }
        case Regime::StrictlyDecreasing: {
            out.decomposition.harmonic = (kill == Kill::Tau) ? h_distinct(x, rates).value()
                                                             : frak_h(x, rates).value();
            break;
        }
        case Regime::StrictlyIncreasing: {
            const double mean = rates.mean();
            out.decomposition.gamma = gamma_rate(rates);
            out.decomposition.power = 0.5 * d * (d - 1) + 0.5 * d;
            double tilt = 0.0;
            for (int j = 0; j < d; ++j) tilt += (rates.values[j] - mean) * x[j];
            double harm = (kill == Kill::Tau) ? h_equal_rate(x, mean)
                                              : vandermonde_log(x.coords).value();
            out.decomposition.harmonic = std::exp(tilt) * harm;
            KOptions kopt;
            kopt.kill = kill;
            out.decomposition.constant = k_const ? *k_const : constant_K(rates, kopt);
            break;
        }
        case Regime::General:
            throw RegimeError("tail_predict: no asymptotics for general mixed rates");
    }
    const auto& dec = out.decomposition;
    out.value = dec.constant * std::pow(static_cast<double>(n), -dec.power) *
                std::exp(-dec.gamma * n) * dec.harmonic;
    return out;
}

}  // namespace ordwalk
