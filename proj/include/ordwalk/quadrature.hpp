#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "ordwalk/errors.hpp"

namespace ordwalk {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lo = 0.0, hi = 0.0;
};

// Gauss-Legendre rule on [lo, hi]; reference nodes are cached per order.
QuadratureRule gauss_legendre(int n, double lo, double hi);

// Reference nodes/weights on [-1, 1].
const std::vector<std::array<double, 2>>& gauss_legendre_reference(int n);

namespace detail {

// Iterated quadrature over {z in box : z_1 < z_2 < ... < z_d}. Each axis is
// split at the lower endpoints of the later axes so every piece maps to the
// integrand smoothly (the moving inner limit max(lo_k, z) kinks exactly
// there). Upper limits are clamped to the suffix minimum, which keeps every
// inner range nonempty.
template <class F>
double chamber_recurse(F& f, int d, const double* lo, const double* up, int axis,
                       double dynamic_lower, std::vector<double>& z, int nodes_per_axis) {
    double l = std::max(lo[axis], dynamic_lower);
    double u = up[axis];
    if (!(l < u)) return 0.0;

    std::vector<double> cuts;
    cuts.push_back(l);
    for (int k = axis + 1; k < d; ++k)
        if (lo[k] > l && lo[k] < u) cuts.push_back(lo[k]);
    cuts.push_back(u);
    std::sort(cuts.begin(), cuts.end());

    const auto& ref = gauss_legendre_reference(nodes_per_axis);
    double total = 0.0;
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        double a = cuts[c], b = cuts[c + 1];
        if (!(a < b)) continue;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (const auto& nw : ref) {
            double t = mid + half * nw[0];
            double w = half * nw[1];
            z[axis] = t;
            double inner = (axis + 1 == d)
                               ? f(std::span<const double>(z.data(), d))
                               : chamber_recurse(f, d, lo, up, axis + 1, t, z, nodes_per_axis);
            total += w * inner;
        }
    }
    return total;
}

}  // namespace detail

// Plain tensor-product Gauss-Legendre over a box (no ordering constraint).
template <class F>
double box_integrate(F&& f, int d, std::span<const std::pair<double, double>> box,
                     int nodes_per_axis) {
    if (d < 1) throw InvalidInputError("box_integrate: d must be >= 1");
    if (static_cast<int>(box.size()) != d)
        throw DimensionError("box_integrate: box size does not match d");
    const auto& ref = gauss_legendre_reference(nodes_per_axis);
    std::vector<double> z(d);
    auto recurse = [&](auto&& self, int axis, double w_outer) -> double {
        double a = box[axis].first, b = box[axis].second;
        if (!(a < b)) return 0.0;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double total = 0.0;
        for (const auto& nw : ref) {
            z[axis] = mid + half * nw[0];
            double w = w_outer * half * nw[1];
            total += (axis + 1 == d) ? w * f(std::span<const double>(z.data(), d))
                                     : self(self, axis + 1, w);
        }
        return total;
    };
    return recurse(recurse, 0, 1.0);
}

template <class F>
double chamber_integrate(F&& f, int d, std::span<const std::pair<double, double>> box,
                         int nodes_per_axis) {
    if (d < 1) throw InvalidInputError("chamber_integrate: d must be >= 1");
    if (d > 4) throw CapabilityError("chamber_integrate: oracle integration capped at d <= 4");
    if (static_cast<int>(box.size()) != d)
        throw DimensionError("chamber_integrate: box size does not match d");
    if (nodes_per_axis < 1) throw InvalidInputError("chamber_integrate: need at least one node");

    std::vector<double> lo(d), up(d);
    for (int j = 0; j < d; ++j) {
        lo[j] = box[j].first;
        up[j] = box[j].second;
    }
    for (int j = d - 2; j >= 0; --j) up[j] = std::min(up[j], up[j + 1]);

    std::vector<double> z(d);
    return detail::chamber_recurse(f, d, lo.data(), up.data(), 0,
                                   -std::numeric_limits<double>::infinity(), z, nodes_per_axis);
}

}  // namespace ordwalk
