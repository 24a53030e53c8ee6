#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ordwalk/errors.hpp"
#include "ordwalk/harmonic.hpp"
#include "ordwalk/rng.hpp"
#include "ordwalk/stats.hpp"

using namespace ordwalk;

namespace {

ChamberPoint random_chamber(std::mt19937& gen, int d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> c(d);
    double v = 6.0 * u(gen) - 3.0;
    for (int j = 0; j < d; ++j) {
        v += 0.05 + e(gen);
        c[j] = v;
    }
    return ChamberPoint(c);
}

}  // namespace

TEST_CASE("h_equal small cases") {
    CHECK(h_equal(ChamberPoint({7.0})).value() == doctest::Approx(1.0));
    CHECK(h_equal(ChamberPoint({0, 1})).value() == doctest::Approx(2.0));
    CHECK(h_equal(ChamberPoint({0, 1, 2})).value() == doctest::Approx(16.0));
}

TEST_CASE("h_equal Monte Carlo oracle E[Delta(x + eta)]") {
    ChamberPoint x({0, 1});
    StreamRng rng(424242, 0);
    RunningStat stat;
    for (int s = 0; s < 200000; ++s) {
        double eta2 = rng.exponential(1.0);
        stat.add((x[1] + eta2) - x[0]);
    }
    double h = h_equal(x).value();
    CHECK(std::abs(stat.mean - h) <= 3.0 * stat.stderr_mean());
}

TEST_CASE("h_equal_phi matches h_equal and the printed-sign convention") {
    CHECK(h_equal_phi(ChamberPoint({5.0})).value() == doctest::Approx(1.0));
    CHECK(h_equal_phi(ChamberPoint({0, 1})).value() == doctest::Approx(2.0));
    CHECK(h_equal_phi(ChamberPoint({0, 1, 2})).value() == doctest::Approx(16.0));
}

TEST_CASE("h_equal_laguerre") {
    CHECK(h_equal_laguerre(ChamberPoint({3.0})).value() == doctest::Approx(1.0));
    CHECK(h_equal_laguerre(ChamberPoint({1, 2})).value() == doctest::Approx(2.0));
    // translation invariance moves the (0,1,2) value to (1,2,3)
    CHECK(h_equal_laguerre(ChamberPoint({1, 2, 3})).value() == doctest::Approx(16.0));
    CHECK_THROWS_AS(h_equal_laguerre(ChamberPoint({0, 1})), DomainError);
}

TEST_CASE("representation agreement on random chambers") {
    std::mt19937 gen(5);
    for (int rep = 0; rep < 100; ++rep) {
        int d = 1 + static_cast<int>(gen() % 6);
        ChamberPoint x = random_chamber(gen, d);
        double a = h_equal(x).value();
        double b = h_equal_phi(x).value();
        CHECK(b == doctest::Approx(a).epsilon(1e-8));
        bool has_zero = false;
        for (double c : x.coords) has_zero |= (c == 0.0);
        if (!has_zero) {
            double l = h_equal_laguerre(x).value();
            CHECK(l == doctest::Approx(a).epsilon(1e-8));
        }
    }
}

TEST_CASE("positivity and translation invariance") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    for (int rep = 0; rep < 60; ++rep) {
        int d = 1 + static_cast<int>(gen() % 8);
        ChamberPoint x = random_chamber(gen, d);
        LogSigned h = h_equal(x);
        CHECK(h.sign == 1);
        CHECK(h_hat(x).sign == 1);

        double c = shift(gen);
        std::vector<double> moved(x.coords);
        for (double& v : moved) v += c;
        double h2 = h_equal(ChamberPoint(moved)).value();
        CHECK(h2 == doctest::Approx(h.value()).epsilon(1e-9));
    }
}

TEST_CASE("h_equal degree d(d-1)/2 from log-slope on rays") {
    for (int d : {2, 3, 4}) {
        std::vector<double> c(d);
        for (int j = 0; j < d; ++j) c[j] = j + 1.0;
        double t1 = 512.0, t2 = 1024.0;
        std::vector<double> a(c), b(c);
        for (double& v : a) v *= t1;
        for (double& v : b) v *= t2;
        double slope = (h_equal(ChamberPoint(b)).logmag - h_equal(ChamberPoint(a)).logmag) /
                       std::log(t2 / t1);
        CHECK(slope == doctest::Approx(0.5 * d * (d - 1)).epsilon(1e-2));
    }
}

TEST_CASE("h_distinct") {
    Rates r21 = classify_rates({2, 1});
    CHECK(h_distinct(ChamberPoint({3.0}), classify_rates({2.0})).value() == doctest::Approx(1.0));
    double expect = 1.0 - 0.5 * std::exp(-1.0);
    CHECK(h_distinct(ChamberPoint({0, 1}), r21).value() == doctest::Approx(expect).epsilon(1e-12));
    // weak diagonal limit 1 - lambda2/lambda1
    CHECK(h_distinct(ChamberPoint({4.0, 4.0}, false), r21).value() ==
          doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(h_distinct(ChamberPoint({0, 1}), classify_rates({1, 1})), RegimeError);
}

TEST_CASE("h_hat") {
    CHECK(h_hat(ChamberPoint({9.0})).value() == doctest::Approx(1.0));
    CHECK(h_hat(ChamberPoint({0, 1})).value() == doctest::Approx(2.0));
    CHECK(h_hat(ChamberPoint({0, 1, 2})).value() == doctest::Approx(16.0));
}

TEST_CASE("frak_h") {
    CHECK(frak_h(ChamberPoint({0, 1, 3}), classify_rates({1, 1, 1})).value() ==
          doctest::Approx(6.0));
    // e*(e^-1 - e^-2) = 1 - 1/e by direct 2x2 evaluation
    double expect = std::exp(1.0) * (std::exp(-1.0) - std::exp(-2.0));
    CHECK(frak_h(ChamberPoint({0, 1}), classify_rates({2, 1})).value() ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(frak_h(ChamberPoint({5.0}), classify_rates({3.0})).value() == doctest::Approx(1.0));
    CHECK_THROWS_AS(frak_h(ChamberPoint({0, 1, 2}), classify_rates({2, 1, 2})), RegimeError);
}

TEST_CASE("harmonicity residuals by quadrature") {
    // d=1: tau never fires, expectation is the full integral
    CHECK(harmonicity_residual(ChamberPoint({0.0}), classify_rates({1.0}), Kill::Tau) <= 1e-10);

    Rates eq = classify_rates({1, 1});
    Rates dec = classify_rates({2, 1});
    ChamberPoint x({0, 1});
    CHECK(harmonicity_residual(x, eq, Kill::Tau) <= 1e-8);
    CHECK(harmonicity_residual(x, eq, Kill::Rho) <= 1e-8);
    CHECK(harmonicity_residual(x, dec, Kill::Tau) <= 1e-8);
    CHECK(harmonicity_residual(x, dec, Kill::Rho) <= 1e-8);

    CHECK_THROWS_AS(
        harmonicity_residual(ChamberPoint({0, 1, 2, 3}), classify_rates({1, 1, 1, 1}), Kill::Tau),
        CapabilityError);
}

TEST_CASE("harmonicity residual d=3") {
    ResidualOptions opt;
    opt.nodes = 48;
    CHECK(harmonicity_residual(ChamberPoint({0, 1, 2}), classify_rates({1, 1, 1}), Kill::Tau, opt) <=
          1e-7);
    CHECK(harmonicity_residual(ChamberPoint({0, 1, 2}), classify_rates({3, 2, 1}), Kill::Rho, opt) <=
          1e-7);
}

TEST_CASE("boundary residual") {
    Rates eq2 = classify_rates({1, 1});
    CHECK(boundary_residual(ChamberPoint({1, 1}, false), 2, eq2) <= 1e-6);
    Rates eq3 = classify_rates({1, 1, 1});
    CHECK(boundary_residual(ChamberPoint({0, 1, 1}, false), 3, eq3) <= 1e-6);
    Rates dec3 = classify_rates({3, 2, 1});
    CHECK(boundary_residual(ChamberPoint({0, 0, 1}, false), 2, dec3) <= 1e-6);

    CHECK_THROWS_AS(boundary_residual(ChamberPoint({0, 1, 1}, false), 2, eq3), InvalidInputError);
}

TEST_CASE("distinct-to-equal confluent limit") {
    CHECK(distinct_to_equal_limit(ChamberPoint({4.0}), 1e-3) == 0.0);

    double e2 = distinct_to_equal_limit(ChamberPoint({0, 1}), 1e-3);
    CHECK(e2 <= 5e-3);
    double e3 = distinct_to_equal_limit(ChamberPoint({0, 1, 2}), 1e-3);
    CHECK(e3 <= 2e-2);

    // Richardson-style decay: halving eps shrinks the gap roughly linearly
    double e2h = distinct_to_equal_limit(ChamberPoint({0, 1}), 5e-4);
    CHECK(e2h <= 0.7 * e2);
}

TEST_CASE("psi identity z-scores") {
    CHECK(psi_identity_check(ChamberPoint({2.0}), classify_rates({1.0}), 1000, 9, 1) ==
          doctest::Approx(0.0));

    double z1 = psi_identity_check(ChamberPoint({0, 1}), classify_rates({1, 1}), 200000, 31, 1);
    CHECK(std::abs(z1) <= 3.0);
    double z2 = psi_identity_check(ChamberPoint({0, 1}), classify_rates({2, 1}), 200000, 32, 2);
    CHECK(std::abs(z2) <= 3.0);
    double z3 =
        psi_identity_check(ChamberPoint({0, 1}), classify_rates({0.8, 1.2}), 200000, 33, 3);
    CHECK(std::abs(z3) <= 3.0);
    double z13 =
        psi_identity_check(ChamberPoint({0, 1, 2}), classify_rates({1, 1, 1}), 200000, 34, 1);
    CHECK(std::abs(z13) <= 3.0);

    CHECK_THROWS_AS(psi_identity_check(ChamberPoint({0, 1}), classify_rates({2, 1}), 100, 1, 1),
                    RegimeError);
    CHECK_THROWS_AS(psi_identity_check(ChamberPoint({0, 1}), classify_rates({1, 2}), 100, 1, 4),
                    InvalidInputError);
}
