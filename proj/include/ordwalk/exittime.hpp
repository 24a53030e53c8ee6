#pragma once

#include <optional>

#include "ordwalk/walkmodel.hpp"

namespace ordwalk {

// The convergent series p_{x1,x2}(n) = (-1)^n sum_k (-1)^{k+1} C(k/2-1, n)
// (x2-x1)^k / k!, extended antisymmetrically; equals P_{(x1,x2)}(rho > n+1)
// on x1 < x2 at unit equal rates.
double p2_series(double x1, double x2, long long n);

// Bessel form of the same probability, P(rho > n) for n >= 1: the
// half-integer K_{n-1/2} has an elementary finite sum, which turns the
// integral into a combination of lower incomplete gammas.
double p2_bessel(double x1, double x2, long long n);

// P_x(rho > n) at equal unit rates: Pfaffian of (p_{x_i,x_j}(n-1)) for even
// d; for odd d the alternating sum of principal Pfaffians over [d] \ {l}.
double rho_survival_pf(const ChamberPoint& x, long long n);

// The tail constant prod_j Gamma(j/2) / (pi^{d/2} prod_{j<d} j!).
double x_const(int d);

// gamma = d log(mean / geometric mean) >= 0, zero iff all rates equal.
double gamma_rate(const Rates& rates);

struct TailDecomposition {
    double constant = 1.0;   // X, K_lambda or the limiting constant
    double power = 0.0;      // polynomial exponent p in n^{-p}
    double gamma = 0.0;      // exponential rate
    double harmonic = 1.0;   // h(x), Delta(x) or tilted h factor
};

struct TailPrediction {
    Regime regime = Regime::General;
    double value = 0.0;
    TailDecomposition decomposition;
};

// Leading-order predictor for P_x(kill > n) per regime. For strictly
// increasing rates the constant K can be supplied (e.g. from an Empirical
// fit); otherwise the per-unit-diagonal GapIntegral value is used for d <= 3.
TailPrediction tail_predict(const ChamberPoint& x, long long n, const Rates& rates, Kill kill,
                            std::optional<double> k_const = std::nullopt);

enum class KMode { GapIntegral, Empirical };

struct KOptions {
    KMode mode = KMode::GapIntegral;
    Kill kill = Kill::Tau;          // Tau: K_lambda with hhat; Rho: C_lambda with Delta
    long long n_lo = 50, n_hi = 200;  // Empirical fit range
    long long n_points = 6;
    ChamberPoint x{{0.0}, false};     // Empirical start, resized if needed
    int quad_nodes = 64;
};

// K_lambda (or C_lambda). The integrand over W^d is invariant under diagonal
// shifts, so the printed integral diverges; GapIntegral reports the integral
// over W^d intersect {z_1 = 0} per unit diagonal length, and Empirical fits
// the actual prefactor from quadrature survivals.
double constant_K(const Rates& rates, const KOptions& opt = {});

}  // namespace ordwalk
