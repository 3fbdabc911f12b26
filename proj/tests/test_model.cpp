#include <catch_amalgamated.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "insider/model.hpp"
#include "insider/rng.hpp"
#include "insider/strategies.hpp"

using namespace insider;

TEST_CASE("make_model accepts admissible constant markets", "[model]") {
    const MarketModel flat = make_model(1.0, 0.0, 0.0, 1.0);
    CHECK(honest_weight(flat, 0.3).value == 0.0);

    const MarketModel m = make_model(1.0, 0.01, 0.05, 0.2);
    CHECK(m.horizon() == 1.0);
    CHECK(m.r(0.7) == 0.01);
    CHECK(m.mu(0.0) == 0.05);
    CHECK(m.sigma(1.0) == 0.2);
}

TEST_CASE("make_model rejects invalid inputs", "[model]") {
    CHECK_THROWS_AS(make_model(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_model(1.0, 0.0, 0.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_model(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_model(-1.0, 0.0, 0.0, 1.0), std::invalid_argument);

    const auto one = Coefficient::constant(1.0);
    const auto zero = Coefficient::constant(0.0);
    // sigma sample <= 0
    CHECK_THROWS_AS(make_model(1.0, zero, zero, Coefficient::piecewise_linear({{0.0, 0.2}, {1.0, 0.0}})),
                    std::invalid_argument);
    // samples outside [0, T]
    CHECK_THROWS_AS(make_model(1.0, Coefficient::piecewise_linear({{0.0, 0.0}, {1.5, 0.1}}), zero, one),
                    std::invalid_argument);
    // not covering [0, T]
    CHECK_THROWS_AS(make_model(1.0, Coefficient::piecewise_linear({{0.0, 0.0}, {0.5, 0.1}}), zero, one),
                    std::invalid_argument);
    // unsorted
    CHECK_THROWS_AS(Coefficient::piecewise_linear({{0.0, 0.1}, {0.7, 0.2}, {0.5, 0.3}}), std::invalid_argument);
    CHECK_THROWS_AS(Coefficient::piecewise_linear({}), std::invalid_argument);
}

TEST_CASE("piecewise-linear coefficients interpolate and reproduce samples", "[model]") {
    const std::vector<Knot> knots{{0.0, 0.2}, {0.25, 0.35}, {0.6, 0.1}, {1.0, 0.4}};
    const auto c = Coefficient::piecewise_linear(knots);
    for (const Knot& k : knots) CHECK(c(k.time) == k.value);
    CHECK(c(0.125) == Catch::Approx(0.275).epsilon(1e-15));
    CHECK(c(0.8) == Catch::Approx(0.25).epsilon(1e-15));

    const MarketModel m = make_model(1.0, Coefficient::constant(0.0), Coefficient::constant(0.0), c);
    CHECK(m.breakpoints(0.7) == std::vector<double>{0.0, 0.25, 0.6, 0.7});
}

TEST_CASE("grid produces uniform nodes", "[model]") {
    CHECK(grid(1.0, 4).nodes() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(grid(0.5, 1).nodes() == std::vector<double>{0.0, 0.5});
    CHECK(grid(1.0, 4).step() == 0.25);
    CHECK_THROWS_AS(grid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(grid(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(grid(1.0, 0), std::invalid_argument);
}

TEST_CASE("doubling the step count keeps old nodes and inserts midpoints exactly", "[model][property]") {
    RngStream rng(7, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const double end = 0.01 + 100.0 * rng.uniform();
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 500);
        const TimeGrid coarse(end, n);
        const TimeGrid fine(end, 2 * n);
        REQUIRE(fine.node(0) == 0.0);
        REQUIRE(fine.node(2 * n) == end);
        for (std::size_t i = 0; i <= n; ++i) REQUIRE(fine.node(2 * i) == coarse.node(i));
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(fine.node(2 * i + 1) > coarse.node(i));
            REQUIRE(fine.node(2 * i + 1) < coarse.node(i + 1));
        }
    }
}

TEST_CASE("index_of locates grid nodes only", "[model]") {
    const TimeGrid g(1.0, 1024);
    CHECK(g.index_of(0.5) == std::size_t{512});
    CHECK(g.index_of(0.0) == std::size_t{0});
    CHECK(g.index_of(1.0) == std::size_t{1024});
    CHECK_FALSE(g.index_of(0.5001).has_value());
    CHECK_FALSE(g.index_of(1.5).has_value());
    CHECK_FALSE(g.index_of(-0.25).has_value());
}
