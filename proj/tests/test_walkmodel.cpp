#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ordwalk/errors.hpp"
#include "ordwalk/walkmodel.hpp"

using namespace ordwalk;

TEST_CASE("vandermonde") {
    CHECK(vandermonde(ChamberPoint({5.0})) == 1.0);
    CHECK(vandermonde(ChamberPoint({0, 1, 3})) == doctest::Approx(6.0));
    CHECK(vandermonde(ChamberPoint({0, 0, 5}, false)) == 0.0);
}

TEST_CASE("vandermonde antisymmetry under transpositions") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> c(4);
        for (double& v : c) v = u(gen);
        LogSigned base = vandermonde_log(c);
        for (int i = 0; i < 3; ++i) {
            std::vector<double> swapped(c);
            std::swap(swapped[i], swapped[i + 1]);
            LogSigned flipped = vandermonde_log(swapped);
            if (base.is_zero()) {
                CHECK(flipped.is_zero());
            } else {
                CHECK(flipped.sign == -base.sign);
                CHECK(flipped.logmag == doctest::Approx(base.logmag));
            }
        }
    }
}

TEST_CASE("interlacing") {
    CHECK(interlaces(ChamberPoint({0, 2}), ChamberPoint({1, 3})));
    CHECK_FALSE(interlaces(ChamberPoint({0, 2}), ChamberPoint({3, 4})));
    ChamberPoint x({0.5, 1.5, 9.0});
    CHECK(interlaces(x, x));
    CHECK_THROWS_AS(interlaces(ChamberPoint({0, 1}), ChamberPoint({0, 1, 2})), DimensionError);
}

TEST_CASE("interlacing chains shift consistently") {
    ChamberPoint a({0.0, 2.0, 4.0});
    ChamberPoint b({1.0, 3.0, 5.0});
    REQUIRE(interlaces(a, b));
    for (double eps : {0.1, 0.5}) {
        std::vector<double> shifted(b.coords);
        for (double& v : shifted) v += eps;
        ChamberPoint c(shifted);
        CHECK(interlaces(b, c));
        CHECK(a[0] <= c[0]);
    }
}

TEST_CASE("classify_rates") {
    CHECK(classify_rates({1, 1, 1}).regime == Regime::Equal);
    CHECK(classify_rates({3, 2, 1}).regime == Regime::StrictlyDecreasing);
    CHECK(classify_rates({1, 2, 1.5}).regime == Regime::General);
    CHECK(classify_rates({1, 2, 3}).regime == Regime::StrictlyIncreasing);
    CHECK(classify_rates({2.0}).regime == Regime::Equal);
    CHECK_THROWS_AS(classify_rates({1, -2}), InvalidInputError);
    CHECK_THROWS_AS(classify_rates({}), InvalidInputError);
    // floating-point nearly equal stays General, no tolerance games
    CHECK(classify_rates({1.0, 1.0 + 1e-15, 1.0}).regime == Regime::General);
}

TEST_CASE("chamber point validation") {
    CHECK_THROWS_AS(ChamberPoint({1, 0}), InvalidInputError);
    CHECK_THROWS_AS(ChamberPoint({0, 0}), InvalidInputError);
    CHECK_NOTHROW(ChamberPoint({0, 0}, false));
    CHECK_THROWS_AS(ChamberPoint({1, 0}, false), InvalidInputError);
    CHECK_THROWS_AS(ChamberPoint(std::vector<double>{}), InvalidInputError);
}

TEST_CASE("GT pattern interlacing is enforced") {
    CHECK_NOTHROW(GTPattern({{1.0}, {0.5, 2.0}, {0.0, 1.5, 3.0}}));
    // upper violation: x^2_1 > x^1_1
    CHECK_THROWS_AS(GTPattern({{1.0}, {1.5, 2.0}}), InvalidInputError);
    // lower violation: x^2_2 < x^1_1
    CHECK_THROWS_AS(GTPattern({{1.0}, {0.5, 0.7}}), InvalidInputError);
    CHECK_THROWS_AS(GTPattern({{1.0}, {0.5}}), InvalidInputError);
}

TEST_CASE("JSON round trips") {
    Rates r = classify_rates({3, 2, 1});
    nlohmann::json jr = r;
    CHECK(jr.at("regime") == "strictly_decreasing");
    Rates r2 = jr.get<Rates>();
    CHECK(r2.values == r.values);
    CHECK(r2.regime == r.regime);

    nlohmann::json bad = {{"rates", {1.0, 2.0}}, {"regime", "equal"}};
    CHECK_THROWS_AS(bad.get<Rates>(), InvalidInputError);

    ChamberPoint x({0, 1, 2});
    nlohmann::json jx = x;
    ChamberPoint x2 = jx.get<ChamberPoint>();
    CHECK(x2.coords == x.coords);
    CHECK(x2.strict == x.strict);

    GTPattern p({{1.0}, {0.5, 2.0}});
    nlohmann::json jp = p;
    GTPattern p2 = jp.get<GTPattern>();
    CHECK(p2.layers == p.layers);
}
