#pragma once

#include <cstdint>
#include <span>

#include "ordwalk/logsigned.hpp"
#include "ordwalk/walkmodel.hpp"

namespace ordwalk {

struct KilledDensityQuery {
    ChamberPoint x;
    ChamberPoint z;
    long long n = 1;
    Rates rates;
    Kill kill = Kill::Tau;
};

struct McEstimate {
    double estimate = 0.0;
    double stderr_est = 0.0;
    long long samples = 0;
};

// P_x(S(n) in dz, rho > n): prod lambda_j^n e^{-sum lambda_j (z_j - x_j)}
// det(q_n(z_j - x_i)). Assembled in log space; a determinant that comes out
// negative beyond 1e-12 of its row scale is a bug signal and throws.
LogSigned g_tilde(const KilledDensityQuery& q);

// P_x(S(n) in dz, tau > n): same prefactor with det(q_{n+i-j}(z_j - x_i)).
LogSigned g_killed(const KilledDensityQuery& q);

// Monte Carlo evaluation of the Gamma-mixture form
// E[det(f_{n-d}(z_j - chi_j - x_i - eta_i))]; equal rates, n > d.
McEstimate g_killed_mixture(const KilledDensityQuery& q, long long samples, std::uint64_t seed);

// Transition density of the conditioned walk Z: g_killed * h(z)/h(x).
// Only Equal and StrictlyDecreasing regimes, where the h-transform and the
// conditional limit agree.
LogSigned conditioned_density(const ChamberPoint& x, const ChamberPoint& z, long long n,
                              const Rates& rates);

struct SemigroupOptions {
    int nodes = 0;  // 0: pick 96 (d<=2) / 48 (d=3)
};

// Chapman-Kolmogorov defect |int G_n(x,y) G_m(y,z) dy - G_{n+m}(x,z)| /
// G_{n+m}(x,z) over the ordered region, d <= 3.
double semigroup_residual(const ChamberPoint& x, const ChamberPoint& z, long long n, long long m,
                          const Rates& rates, Kill kill, const SemigroupOptions& opt = {});

enum class SurvivalMethod { Quadrature, ExactD2, MonteCarlo };

struct SurvivalOptions {
    SurvivalMethod method = SurvivalMethod::Quadrature;
    int nodes = 64;
    int max_nodes = 512;
    double refine_tol = 1e-8;
    double tail = 1e-13;
    long long samples = 1000000;
    std::uint64_t seed = 1;
    int streams = 0;  // 0: hardware concurrency
};

// P_x(kill > n) by iterated quadrature (d <= 3), the exact d = 2 series
// (Rho, equal rates), or Monte Carlo.
McEstimate survival(const ChamberPoint& x, long long n, const Rates& rates, Kill kill,
                    const SurvivalOptions& opt = {});

// G_n(x, n + z) n^{d(d-1)/2 + d/2} / (chi h(x) hhat(z)) for Tau, and the
// Delta(x) Delta(z) analogue for Rho; tends to 1 as n grows. Equal unit rates.
double llt_ratio(const ChamberPoint& x, const ChamberPoint& z, long long n, Kill kill);

namespace detail {
LogSigned g_raw(std::span<const double> x, std::span<const double> z, long long n,
                std::span<const double> rates, Kill kill);
}

}  // namespace ordwalk
