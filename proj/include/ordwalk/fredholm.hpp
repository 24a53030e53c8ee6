#pragma once

#include <vector>

#include "ordwalk/linalg.hpp"
#include "ordwalk/walkmodel.hpp"

namespace ordwalk {

enum class Extreme { Largest, Smallest };

std::string to_string(Extreme e);
Extreme extreme_from_string(const std::string& s);

struct QuadSpec {
    int nodes = 64;
    bool refine = true;
};

// A multi-time extreme-particle law query at equal unit rates: thresholds
// xi_j at strictly increasing times n_1 < ... < n_m. Largest needs n_1 >= d
// (an n_1 = d-1 kernel would carry a unit atom f_0, which the Nystrom
// discretization cannot represent); Smallest needs n_m - n_{m-1} >= d-1.
// Weak starts are admitted through an epsilon-spread of the tied coordinates.
struct KernelSpec {
    ChamberPoint x;
    std::vector<long long> times;
    std::vector<double> thresholds;
    Extreme extreme = Extreme::Largest;
    QuadSpec quad;

    int d() const { return x.dim(); }
    int m() const { return static_cast<int>(times.size()); }
    void validate() const;
};

void to_json(nlohmann::json& j, const KernelSpec& s);
void from_json(const nlohmann::json& j, KernelSpec& s);

// A_{kl} = int_{x_k}^inf f_{n-d+k}(z - x_k) z^{l-1} dz = E[(x_k + G_k)^{l-1}],
// G_k ~ Gamma(n-d+k,1), in closed form; det(A) = h(x).
SquareMatrix matrix_A(const ChamberPoint& x, long long n_m, int d);

// Same with shapes n-1+k.
SquareMatrix matrix_B(const ChamberPoint& x, long long n_m, int d);

// Pointwise extended-kernel value K(n_i, y; n_j, z); i, j are 0-based time
// indices. The inner tail integral int_y^inf f_{n_m-n_i}(u-y) u^{k-1} du is
// expanded in closed form through Gamma moments, no numeric integration.
double kernel_eval(const KernelSpec& spec, int i, double y, int j, double z);

// The propagator part -f_{n_j-n_i}(z-y) 1_{i<j} alone.
double kernel_propagator(const KernelSpec& spec, int i, double y, int j, double z);

// Nystrom discretization of chi K chi with sqrt(w_a w_b) symmetrization.
struct DiscretizedOperator {
    int m = 0;
    int nodes_per_time = 0;
    std::vector<int> active;                       // time indices with nonempty domain
    std::vector<std::vector<double>> nodes;        // per active time
    std::vector<std::vector<double>> weights;
    SquareMatrix op;                               // (m_active * N) square
};

DiscretizedOperator build_discretized_operator(const KernelSpec& spec, int nodes_per_time);

// det(I - chibar K chibar) (Largest: P(Z_d(n_1) <= xi_1, ...)) or
// det(I - chi K chi) (Smallest: P(Z_1(n_1) >= xi_1, ...)); refined until two
// successive node doublings agree to 1e-6.
double extreme_cdf(const KernelSpec& spec);

// Single-time oracle by direct chamber integration of
// det(f_{n-d+i}(z_j - x_i)) Delta(z) / h(x) (Largest; shapes n-1+i over
// [xi, inf) for Smallest). d <= 3.
double direct_cdf_single(const ChamberPoint& x, long long n, double xi, Extreme extreme,
                         int nodes = 96);

}  // namespace ordwalk
