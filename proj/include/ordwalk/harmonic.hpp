#pragma once

#include <cstdint>
#include <vector>

#include "ordwalk/logsigned.hpp"
#include "ordwalk/walkmodel.hpp"

namespace ordwalk {

enum class HarmonicRepresentation { MomentDet, PhiDet, Laguerre, DistinctDet, FrakH, HatH };

struct HarmonicEval {
    LogSigned value;
    HarmonicRepresentation representation;
};

// Equal-rates harmonic function at unit rate, h(x) = E[Delta(x_1+eta_1, ...,
// x_d+eta_d)] with eta_j ~ Gamma(j-1,1), evaluated exactly as the moment
// determinant det(E[(x_j+eta_j)^{i-1}]).
LogSigned h_equal(const ChamberPoint& x);

// h for an equal-rate-lambda walk, in the lambda = 1 normalization after the
// coordinate rescaling x -> lambda x. Constants cancel in every ratio use.
LogSigned h_equal_scaled(const ChamberPoint& x, double lambda);

// e^{sum x_j} det(phi_i^{(d-j)}(x_j)) with phi_i(x) = x^{i-1} e^{-x}, with a
// (-1)^{d(d-1)/2} normalization making it agree with h_equal (the determinant
// as printed comes out negative for d = 2, 3 mod 4).
LogSigned h_equal_phi(const ChamberPoint& x);

// Generalized-Laguerre form of the same function (Rodrigues'); requires all
// coordinates nonzero since negative powers appear.
LogSigned h_equal_laguerre(const ChamberPoint& x);

// Distinct-rates harmonic function e^{sum lambda_i x_i} det(lambda_i^{i-j}
// e^{-lambda_i x_j}); strictly positive on the chamber only for strictly
// decreasing rates. Accepts weak points (the formula is entire).
LogSigned h_distinct(const ChamberPoint& x, const Rates& rates);

// hhat(z) = h(-z_d, ..., -z_1).
LogSigned h_hat(const ChamberPoint& z);
LogSigned h_hat_scaled(const ChamberPoint& z, double lambda);

// Harmonic function for the interlacing kill: Delta(x) at equal rates,
// e^{sum lambda_i x_i} det(e^{-lambda_i x_j}) for all-distinct rates.
LogSigned frak_h(const ChamberPoint& x, const Rates& rates);

struct ResidualOptions {
    int nodes = 96;
    double tail = 1e-16;
};

// |E_x[h(S_1); kill > 1] - h(x)| / h(x) by chamber quadrature, d <= 3.
double harmonicity_residual(const ChamberPoint& x, const Rates& rates, Kill which,
                            const ResidualOptions& opt = {});

// |lambda_j h(x) - dh/dx_j(x)| / h(x) at a point with x_j = x_{j-1}
// (j is 1-based), central finite difference with step 1e-5 (1 + |x_j|).
double boundary_residual(const ChamberPoint& x_on_face, int j, const Rates& rates);

// Confluent-limit check h^{(lambda)}(x)/Delta(lambda) -> h(x)/prod j! with
// lambda = (1+(d-1)eps, ..., 1+eps, 1); returns the relative gap.
double distinct_to_equal_limit(const ChamberPoint& x, double eps);

// Monte Carlo z-score for E[D(Psi); A] = h identities (parts 1, 2, 3).
// Part 3 requires mean(rates) == 1.
double psi_identity_check(const ChamberPoint& x, const Rates& rates, long long samples,
                          std::uint64_t seed, int part);

namespace detail {
// Raw-coordinate evaluations without chamber validation; used by finite
// differences at and across the boundary.
LogSigned h_equal_raw(const std::vector<double>& coords);
LogSigned h_phi_raw(const std::vector<double>& coords);
LogSigned h_laguerre_raw(const std::vector<double>& coords);
LogSigned h_distinct_raw(const std::vector<double>& coords, const std::vector<double>& rates);
LogSigned frak_distinct_raw(const std::vector<double>& coords, const std::vector<double>& rates);
}  // namespace detail

}  // namespace ordwalk
