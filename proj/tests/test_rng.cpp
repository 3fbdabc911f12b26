#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "insider/rng.hpp"

using namespace insider;

TEST_CASE("Philox4x32-10 matches the Random123 known-answer vectors", "[rng]") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal_quantile is accurate to well below 1e-9", "[rng]") {
    const boost::math::normal_distribution<double> nd;
    double worst = 0.0;
    for (int i = 1; i < 100000; ++i) {
        const double p = i / 100000.0;
        worst = std::max(worst, std::abs(normal_quantile(p) - quantile(nd, p)));
    }
    for (double p : {1e-300, 1e-100, 1e-20, 1e-12, 1e-6, 0.02425, 0.075, 0.925, 1 - 1e-6, 1 - 1e-12}) {
        const double ref = quantile(nd, p);
        worst = std::max(worst, std::abs(normal_quantile(p) - ref) / std::max(1.0, std::abs(ref)));
    }
    CHECK(worst < 1e-12);
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isnan(normal_quantile(1.5)));
}

TEST_CASE("streams are reproducible and distinct", "[rng]") {
    RngStream a(42, 0);
    RngStream b(42, 0);
    RngStream c(42, 1);
    RngStream d(43, 0);
    std::vector<double> xa, xb, xc, xd;
    for (int i = 0; i < 1000; ++i) {
        xa.push_back(a.normal());
        xb.push_back(b.normal());
        xc.push_back(c.normal());
        xd.push_back(d.normal());
    }
    CHECK(xa == xb);
    CHECK(xa != xc);
    CHECK(xa != xd);
    CHECK(a.seed() == 42);
    CHECK(c.index() == 1);
}

TEST_CASE("uniforms lie in the open unit interval with the right moments", "[rng]") {
    RngStream rng(3, 9);
    double sum = 0.0;
    double sum_sq = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sum_sq / n - mean * mean - 1.0 / 12.0) < 2e-3);
}
