#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ordwalk/density.hpp"
#include "ordwalk/errors.hpp"
#include "ordwalk/quadrature.hpp"
#include "ordwalk/specfun.hpp"

using namespace ordwalk;

namespace {

KilledDensityQuery query(std::vector<double> x, std::vector<double> z, long long n,
                         std::vector<double> rates, Kill kill) {
    return {ChamberPoint(std::move(x)), ChamberPoint(std::move(z)), n,
            classify_rates(rates), kill};
}

}  // namespace

TEST_CASE("g_tilde basics") {
    // d=1, n=2 is the Gamma(2) density
    CHECK(g_tilde(query({0}, {3}, 2, {1}, Kill::Rho)).value() ==
          doctest::Approx(3.0 * std::exp(-3.0)).epsilon(1e-13));
    // one-step interlacing product of exponentials
    CHECK(g_tilde(query({0, 1}, {0.5, 2}, 1, {1, 1}, Kill::Rho)).value() ==
          doctest::Approx(std::exp(-1.5)).epsilon(1e-13));
    // z1 > x2 kills the determinant exactly
    CHECK(g_tilde(query({0, 1}, {1.5, 2}, 1, {1, 1}, Kill::Rho)).value() == 0.0);
    CHECK_THROWS_AS(g_tilde(query({0, 1}, {0.5, 2}, 1, {1, 1}, Kill::Tau)), InvalidInputError);
}

TEST_CASE("g_killed basics") {
    CHECK(g_killed(query({0}, {3}, 2, {1}, Kill::Tau)).value() ==
          doctest::Approx(3.0 * std::exp(-3.0)).epsilon(1e-13));
    CHECK(g_killed(query({0, 1}, {0.5, 2}, 1, {1, 1}, Kill::Tau)).value() ==
          doctest::Approx(std::exp(-1.5)).epsilon(1e-13));
    // ordered one-step allows z1 > x2: plain product of densities
    // exp(-(1.5-0)) * exp(-(2-1))
    CHECK(g_killed(query({0, 1}, {1.5, 2}, 1, {1, 1}, Kill::Tau)).value() ==
          doctest::Approx(std::exp(-2.5)).epsilon(1e-13));
}

TEST_CASE("killed densities stay nonnegative on random queries") {
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 10000; ++rep) {
        int d = 1 + static_cast<int>(gen() % 5);
        long long n = 1 + static_cast<long long>(gen() % 50);
        std::vector<double> x(d), z(d);
        double v = 0.0;
        for (int j = 0; j < d; ++j) {
            v += 0.05 + 2.0 * u(gen);
            x[j] = v;
        }
        // z roughly n ahead so the density is not always zero
        v = x[0] + 0.3 * n * u(gen);
        for (int j = 0; j < d; ++j) {
            v += 0.05 + 2.0 * u(gen) + static_cast<double>(n) / d * u(gen);
            z[j] = v;
        }
        Kill kill = (gen() % 2 == 0) ? Kill::Tau : Kill::Rho;
        KilledDensityQuery q = query(x, z, n, std::vector<double>(d, 1.0), kill);
        LogSigned g = (kill == Kill::Tau) ? g_killed(q) : g_tilde(q);
        CHECK(g.sign >= 0);  // negatives beyond roundoff would have thrown
    }
}

TEST_CASE("mixture form agrees with the determinant") {
    // d=1 reduces to f_n(z - x) deterministically
    McEstimate m1 = g_killed_mixture(query({0}, {4}, 3, {1}, Kill::Tau), 200, 5);
    CHECK(m1.estimate == doctest::Approx(gamma_density(3, 4.0)).epsilon(1e-12));
    CHECK(m1.stderr_est <= 1e-15);

    McEstimate m2 = g_killed_mixture(query({0, 1}, {4, 7}, 6, {1, 1}, Kill::Tau), 100000, 6);
    double exact2 = g_killed(query({0, 1}, {4, 7}, 6, {1, 1}, Kill::Tau)).value();
    CHECK(std::abs(m2.estimate - exact2) <= 3.0 * m2.stderr_est);

    McEstimate m3 =
        g_killed_mixture(query({0, 1, 2}, {5, 7, 10}, 8, {1, 1, 1}, Kill::Tau), 100000, 7);
    double exact3 = g_killed(query({0, 1, 2}, {5, 7, 10}, 8, {1, 1, 1}, Kill::Tau)).value();
    CHECK(std::abs(m3.estimate - exact3) <= 3.0 * m3.stderr_est);

    // n = d carries a unit atom in the base density
    CHECK_THROWS_AS(g_killed_mixture(query({0, 1}, {1, 2}, 1, {1, 1}, Kill::Tau), 10, 1),
                    DomainError);

    // scaled equal rates go through the lambda^d Jacobian
    McEstimate m4 = g_killed_mixture(query({0, 1}, {2, 4}, 6, {2, 2}, Kill::Tau), 100000, 8);
    double exact4 = g_killed(query({0, 1}, {2, 4}, 6, {2, 2}, Kill::Tau)).value();
    CHECK(std::abs(m4.estimate - exact4) <= 3.0 * m4.stderr_est);
}

TEST_CASE("conditioned density integrates to one") {
    // d=1: h == 1
    CHECK(conditioned_density(ChamberPoint({0.0}), ChamberPoint({2.5}), 4, classify_rates({1.0}))
              .value() == doctest::Approx(gamma_density(4, 2.5)).epsilon(1e-13));

    for (std::vector<double> rates : {std::vector<double>{1, 1}, std::vector<double>{2, 1}}) {
        Rates r = classify_rates(rates);
        ChamberPoint x({0, 1});
        std::vector<std::pair<double, double>> box = {{0.0, 45.0}, {1.0, 45.0}};
        double total = chamber_integrate(
            [&](std::span<const double> z) {
                return conditioned_density(x, ChamberPoint({z[0], z[1]}), 1, r).value();
            },
            2, box, 96);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }

    CHECK_THROWS_AS(
        conditioned_density(ChamberPoint({0, 1}), ChamberPoint({1, 2}), 1, classify_rates({1, 2})),
        RegimeError);
}

TEST_CASE("semigroup residuals") {
    Rates eq1 = classify_rates({1.0});
    CHECK(semigroup_residual(ChamberPoint({0.0}), ChamberPoint({3.0}), 1, 1, eq1, Kill::Tau) <=
          1e-10);

    Rates eq = classify_rates({1, 1});
    ChamberPoint x({0, 1}), z({4, 6});
    CHECK(semigroup_residual(x, z, 2, 3, eq, Kill::Tau) <= 1e-6);
    CHECK(semigroup_residual(x, z, 2, 3, eq, Kill::Rho) <= 1e-6);
    // distinct rates obey the same composition
    Rates dec = classify_rates({2, 1});
    CHECK(semigroup_residual(x, z, 2, 2, dec, Kill::Tau) <= 1e-6);

    CHECK_THROWS_AS(semigroup_residual(ChamberPoint({0, 1, 2, 3}), ChamberPoint({5, 6, 7, 8}), 1, 1,
                                       classify_rates({1, 1, 1, 1}), Kill::Tau),
                    CapabilityError);
}

TEST_CASE("survival closed forms") {
    Rates eq = classify_rates({1, 1});
    ChamberPoint x({0, 1});
    SurvivalOptions quad;
    quad.nodes = 96;

    // d=1 has no constraint
    CHECK(survival(ChamberPoint({3.0}), 7, classify_rates({1.0}), Kill::Tau).estimate == 1.0);

    // one-step rho: P(X <= gap)
    McEstimate rho1 = survival(x, 1, eq, Kill::Rho, quad);
    CHECK(rho1.estimate == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));

    // one-step tau: 1 - e^-1/2
    McEstimate tau1 = survival(x, 1, eq, Kill::Tau, quad);
    CHECK(tau1.estimate == doctest::Approx(1.0 - 0.5 * std::exp(-1.0)).epsilon(1e-9));

    SurvivalOptions ex;
    ex.method = SurvivalMethod::ExactD2;
    CHECK(survival(x, 1, eq, Kill::Rho, ex).estimate ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(survival(x, 1, eq, Kill::Tau, ex), CapabilityError);

    // quadrature matches the exact d=2 series at larger n
    for (long long n : {2, 5, 10}) {
        McEstimate q = survival(x, n, eq, Kill::Rho, quad);
        McEstimate e = survival(x, n, eq, Kill::Rho, ex);
        CHECK(q.estimate == doctest::Approx(e.estimate).epsilon(1e-7));
    }
}

TEST_CASE("survival monotonicity and domination") {
    Rates eq = classify_rates({1, 1});
    ChamberPoint x({0, 1});
    SurvivalOptions ex;
    ex.method = SurvivalMethod::ExactD2;
    double prev = 1.0;
    for (long long n = 1; n <= 20; ++n) {
        double p = survival(x, n, eq, Kill::Rho, ex).estimate;
        CHECK(p <= 1.0);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("tau dominates rho survival") {
    SurvivalOptions quad;
    quad.nodes = 64;
    for (int d : {2, 3}) {
        std::vector<double> xc(d);
        for (int j = 0; j < d; ++j) xc[j] = 1.3 * j;
        ChamberPoint x(xc);
        Rates eq = classify_rates(std::vector<double>(d, 1.0));
        for (long long n : {1, 3, 6}) {
            double pt = survival(x, n, eq, Kill::Tau, quad).estimate;
            double pr = survival(x, n, eq, Kill::Rho, quad).estimate;
            CHECK(pt >= pr - 1e-9);
        }
    }
}

TEST_CASE("llt ratio") {
    // d=1 Stirling: f_n(n) sqrt(2 pi n) -> 1
    ChamberPoint x0({0.0}), z0({0.0});
    CHECK(llt_ratio(x0, z0, 10000, Kill::Tau) == doctest::Approx(1.0).epsilon(1e-4));

    ChamberPoint x({0, 1}), z({0, 1});
    double rt = llt_ratio(x, z, 10000, Kill::Tau);
    double rr = llt_ratio(x, z, 10000, Kill::Rho);
    CHECK(rt == doctest::Approx(1.0).epsilon(3e-2));
    CHECK(rr == doctest::Approx(1.0).epsilon(3e-2));
    // drift toward 1
    CHECK(std::abs(llt_ratio(x, z, 40000, Kill::Tau) - 1.0) < std::abs(rt - 1.0));
    CHECK(std::abs(llt_ratio(x, z, 40000, Kill::Rho) - 1.0) < std::abs(rr - 1.0));
}
