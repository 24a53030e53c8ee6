#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ordwalk/walkmodel.hpp"

namespace ordwalk {

struct McEstimate;  // defined in density.hpp

// Results are a pure function of (SimConfig, operation): paths are keyed by
// their index into counter-based RNG streams and partial sums are merged in
// fixed block order, so thread count never changes the output.
struct SimConfig {
    std::uint64_t seed = 1;
    int streams = 0;  // worker lanes; 0 picks hardware concurrency
    long long samples = 100000;
    Rates rates;
    long long horizon = 1;
};

struct PathEnsemble {
    long long samples = 0;
    int d = 0;
    long long horizon = 0;
    std::vector<double> traj;       // samples x (horizon+1) x d
    std::vector<long long> tau;     // first exit step, -1 if none by horizon
    std::vector<long long> rho;     // first interlacing failure, -1 if none
    std::vector<double> weight;

    double pos(long long path, long long step, int j) const {
        return traj[(static_cast<size_t>(path) * (horizon + 1) + step) * d + j];
    }
};

// View of one trajectory used by path statistics.
struct PathView {
    const double* data;  // (horizon+1) x d
    int d;
    long long horizon;
    double pos(long long step, int j) const { return data[static_cast<size_t>(step) * d + j]; }
};

PathEnsemble sample_paths(const ChamberPoint& x, const SimConfig& cfg);

McEstimate survival_estimate(const ChamberPoint& x, long long n, const Rates& rates, Kill kill,
                             const SimConfig& cfg);

// Importance sampling under the h-transform: estimates E_x[statistic(Z)] as
// E_x[h(S(n))/h(x) statistic(S) 1_{tau > n}]. Equal or strictly decreasing
// rates (the regimes where this is the conditioned process).
McEstimate htransform_estimate(const ChamberPoint& x, long long n, const Rates& rates,
                               const std::function<double(const PathView&)>& statistic,
                               const SimConfig& cfg);

struct LppTable {
    int k = 0;
    long long n = 0;
    std::vector<double> values;  // k x n, component-major
    double at(int i, long long j) const { return values[static_cast<size_t>(i - 1) * n + (j - 1)]; }
};

// L(i,j) = max(L(i-1,j), L(i,j-1)) + e_{ij} with out-of-range terms 0.
LppTable lpp_dp(const std::vector<double>& field, int k, long long n);

// Tandem-queue departure recursion; same table transposed in its indexing,
// pathwise equal to lpp_dp on the same field.
LppTable queue_departures(const std::vector<double>& field, int k, long long n);

// Exact samples of Z(n) started from zero at equal unit rates, via the
// coupling with the interlaced walk and Greene's theorem on the shared
// exponential field: Z_j(n) = G_{d-j+1} - G_{d-j} at time n+d-j, where G_k
// is the maximal weight of k disjoint up-right paths. Z_d(n) = L(d,n).
std::vector<std::vector<double>> sample_z_from_zero(int d, long long n, const SimConfig& cfg);

// One push-block trajectory on Gelfand-Tsetlin patterns (levels use rates
// lambda_k, weakly decreasing). Interlacing is asserted after every update.
std::vector<GTPattern> pushblock_evolve(int d, long long n, const Rates& rates,
                                        std::uint64_t seed, std::uint64_t stream);

// Batch of top-particle samples Z^d_d(n) from push-block dynamics.
std::vector<double> pushblock_top_samples(int d, long long n, const Rates& rates,
                                          const SimConfig& cfg);

struct CouplingResult {
    long long trials = 0;
    long long identity_failures = 0;   // S_j(m) != T_j(m+d-j) bitwise
    long long event_mismatches = 0;    // ordering vs interlacing scans disagree
};

// Builds S and T from the same field and checks the time-shift identity and
// the event equivalence on matched indices.
CouplingResult coupling_check(int d, long long n, const SimConfig& cfg);

}  // namespace ordwalk
