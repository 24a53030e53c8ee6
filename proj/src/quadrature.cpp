#include "ordwalk/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace ordwalk {

namespace {

// Newton iteration on P_n roots, seeded by the Chebyshev approximation.
std::vector<std::array<double, 2>> compute_reference(int n) {
    std::vector<std::array<double, 2>> out(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = -std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (n == 1) { p1 = x; }
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double delta = -p1 / dp;
            x += delta;
            if (std::abs(delta) <= 4e-16 * std::max(1.0, std::abs(x))) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = {x, w};
        out[n - 1 - i] = {-x, w};
    }
    if (n % 2 == 1) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 2; k <= n; ++k) {
            double p2 = (-(k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        // P_n'(0) = n * (0*P_n(0) - P_{n-1}(0)) / (0 - 1) = n * P_{n-1}(0)
        double dp = n * p0;
        out[n / 2] = {0.0, 2.0 / (dp * dp)};
    }
    return out;
}

}  // namespace

const std::vector<std::array<double, 2>>& gauss_legendre_reference(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::array<double, 2>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_reference(n)).first;
    return it->second;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw InvalidInputError("gauss_legendre: order must be >= 1");
    if (!(lo < hi)) throw InvalidInputError("gauss_legendre: need lo < hi");
    const auto& ref = gauss_legendre_reference(n);
    QuadratureRule rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (const auto& nw : ref) {
        rule.nodes.push_back(mid + half * nw[0]);
        rule.weights.push_back(half * nw[1]);
    }
    return rule;
}

}  // namespace ordwalk
