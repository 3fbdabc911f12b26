#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "insider/analysis.hpp"
#include "insider/parallel.hpp"
#include "insider/stochastic.hpp"

using namespace insider;

namespace {

std::vector<double> insider_integrand(const BrownianPath& path, std::size_t k) {
    const TimeGrid& g = path.grid();
    std::vector<double> phi(k);
    for (std::size_t i = 0; i < k; ++i) phi[i] = (path.terminal() - path.value(i)) / (g.end() - g.node(i));
    return phi;
}

}  // namespace

TEST_CASE("sample_path starts at zero and is deterministic", "[stochastic]") {
    const TimeGrid g(1.0, 256);
    const BrownianPath a = sample_path(g, RngStream(42, 0));
    const BrownianPath b = sample_path(g, RngStream(42, 0));
    const BrownianPath c = sample_path(g, RngStream(42, 1));
    CHECK(a.value(0) == 0.0);
    CHECK(std::vector<double>(a.values().begin(), a.values().end()) ==
          std::vector<double>(b.values().begin(), b.values().end()));
    CHECK(a.terminal() != c.terminal());
}

TEST_CASE("increments recompose the path values", "[stochastic]") {
    const BrownianPath p = sample_path(TimeGrid(2.0, 1000), RngStream(5, 5));
    double acc = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
        acc += p.increment(i);
        REQUIRE(std::abs(acc - p.value(i + 1)) <= 1e-15 * (i + 1) * 8.0);
    }
    const BrownianPath q = BrownianPath::from_increments(TimeGrid(1.0, 3), std::vector<double>{0.5, -1.0, 0.25});
    CHECK(std::vector<double>(q.values().begin(), q.values().end()) == std::vector<double>{0.0, 0.5, -0.5, -0.25});
    CHECK_THROWS_AS(BrownianPath(TimeGrid(1.0, 2), {0.1, 0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(BrownianPath(TimeGrid(1.0, 2), {0.0, 0.2}), std::invalid_argument);
}

TEST_CASE("terminal value is N(0, T)", "[stochastic]") {
    const double T = 1.7;
    const TimeGrid one_step(T, 1);
    const auto mean = mc_mean(100'000, 1, [&](std::size_t i) { return sample_path(one_step, RngStream(11, i)).terminal(); });
    CHECK(std::abs(mean.mean) < 4.0 * std::sqrt(T / 1e5));

    // Sample variance of 1e6 draws of W(1): the chi-square spread of the
    // estimator is sqrt(2 / 1e6) ~ 1.4e-3, well inside the 0.01 band.
    const TimeGrid unit(1.0, 1);
    McAccumulator acc;
    for (std::size_t i = 0; i < 1'000'000; ++i) acc.add(sample_path(unit, RngStream(12, i)).terminal());
    CHECK(std::abs(acc.variance() - 1.0) < 0.01);
}

TEST_CASE("coarsening observes the same trajectory", "[stochastic]") {
    const BrownianPath fine = sample_path(TimeGrid(1.0, 64), RngStream(1, 2));
    const BrownianPath coarse = fine.coarsened(4);
    REQUIRE(coarse.grid().steps() == 16);
    for (std::size_t i = 0; i <= 16; ++i) CHECK(coarse.value(i) == fine.value(4 * i));
    CHECK_THROWS_AS(fine.coarsened(3), std::invalid_argument);
}

TEST_CASE("Ito sums: trivial integrands", "[stochastic]") {
    const BrownianPath p = sample_path(TimeGrid(1.0, 512), RngStream(2, 0));
    const std::vector<double> zeros(512, 0.0);
    const std::vector<double> ones(512, 1.0);
    CHECK(ito_integral(zeros, p, 512).value == 0.0);
    CHECK(ito_integral(ones, p, 512).value == Catch::Approx(p.terminal()).margin(1e-13));
    CHECK(ito_integral(ones, p, 512).rule == IntegrationRule::ito_left);
    CHECK(ito_integral(ones, p, 512).steps == 512);
    CHECK_THROWS_AS(ito_integral(ones, p, 513), std::out_of_range);
    CHECK_THROWS_AS(ito_integral(std::vector<double>(10, 1.0), p, 11), std::out_of_range);
}

TEST_CASE("Ito sum of W dW converges to (W(1)^2 - 1) / 2", "[stochastic]") {
    constexpr std::size_t finest = 1024;
    const std::size_t sizes[] = {64, 256, 1024};
    double err[3] = {0, 0, 0};
    for (std::size_t path_id = 0; path_id < 1000; ++path_id) {
        const BrownianPath fine = sample_path(TimeGrid(1.0, finest), RngStream(21, path_id));
        const double exact = 0.5 * (fine.terminal() * fine.terminal() - 1.0);
        for (int j = 0; j < 3; ++j) {
            const BrownianPath p = fine.coarsened(finest / sizes[j]);
            std::vector<double> phi(p.values().begin(), p.values().end() - 1);
            err[j] += std::abs(ito_integral(phi, p, sizes[j]).value - exact) / 1000.0;
        }
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
}

TEST_CASE("forward sums: anticipating constant integrand", "[stochastic]") {
    const BrownianPath p = sample_path(TimeGrid(1.0, 400), RngStream(3, 0));
    const std::vector<double> phi(400, p.terminal());
    CHECK(forward_integral(phi, p, 400).value == Catch::Approx(p.terminal() * p.terminal()).margin(1e-13));
    CHECK(forward_integral(std::vector<double>(400, 0.0), p, 400).value == 0.0);
    CHECK(forward_integral(phi, p, 400).rule == IntegrationRule::forward_left);
}

TEST_CASE("Ito and forward sums agree on adapted integrands", "[stochastic][property]") {
    for (std::size_t id = 0; id < 50; ++id) {
        const BrownianPath p = sample_path(TimeGrid(1.0, 128), RngStream(4, id));
        std::vector<double> phi(128);
        for (std::size_t i = 0; i < 128; ++i) phi[i] = std::sin(p.value(i)) + p.value(i) * p.value(i);
        REQUIRE(ito_integral(phi, p, 100).value == forward_integral(phi, p, 100).value);
    }
}

TEST_CASE("Ito sums of deterministic integrands have zero mean", "[stochastic][property]") {
    const TimeGrid g(1.0, 128);
    std::vector<double> phi(128);
    for (std::size_t i = 0; i < 128; ++i) phi[i] = 1.0 + std::sin(6.0 * g.node(i));
    const auto est = mc_mean(20'000, 1, [&](std::size_t i) {
        return ito_integral(phi, sample_path(g, RngStream(8, i)), 128).value;
    });
    CHECK(std::abs(est.mean) < 4.0 * est.std_error);
}

TEST_CASE("forward sums of the insider integrand have mean log(T / (T - t))", "[stochastic][property]") {
    const TimeGrid g(1.0, 1024);
    const auto est = mc_mean(10'000, 1, [&](std::size_t i) {
        const BrownianPath p = sample_path(g, RngStream(9, i));
        return forward_integral(insider_integrand(p, 512), p, 512).value;
    });
    CHECK(std::abs(est.mean - std::log(2.0)) < 4.0 * est.std_error);
}

TEST_CASE("insider forward sum converges under refinement", "[stochastic]") {
    // Error of the left-point sum, net of the exact ds-correction, against the
    // closed-form gap; the mean absolute error roughly halves per 4x refinement.
    constexpr std::size_t finest = 4096;
    const std::size_t sizes[] = {256, 1024, 4096};
    double err[3] = {0, 0, 0};
    constexpr int paths = 400;
    for (int id = 0; id < paths; ++id) {
        const BrownianPath fine = sample_path(TimeGrid(1.0, finest), RngStream(10, id));
        const double exact = gap_closed_form(fine.value(finest / 2), fine.terminal(), 0.5, 1.0);
        for (int j = 0; j < 3; ++j) {
            const BrownianPath p = fine.coarsened(finest / sizes[j]);
            const std::size_t k = sizes[j] / 2;
            const auto phi = insider_integrand(p, k);
            double squares = 0.0;
            for (double x : phi) squares += x * x;
            const double simulated = forward_integral(phi, p, k).value - 0.5 * squares * p.grid().step();
            err[j] += std::abs(simulated - exact) / paths;
        }
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(err[0] / err[1] > 1.5);
    CHECK(err[1] / err[2] > 1.5);
}

TEST_CASE("mollified forward sums approach the left-point sum as the window shrinks", "[stochastic]") {
    constexpr std::size_t n = 4096;
    const std::size_t windows[] = {256, 64, 16};
    double diff[3] = {0, 0, 0};
    constexpr int paths = 300;
    for (int id = 0; id < paths; ++id) {
        const BrownianPath p = sample_path(TimeGrid(1.0, n), RngStream(13, id));
        const auto phi = insider_integrand(p, n / 2);
        const double left = forward_integral(phi, p, n / 2).value;
        for (int j = 0; j < 3; ++j) diff[j] += std::abs(mollified_forward_sum(phi, p, n / 2, windows[j]) - left) / paths;
    }
    CHECK(diff[1] < diff[0]);
    CHECK(diff[2] < diff[1]);

    const BrownianPath p = sample_path(TimeGrid(1.0, 8), RngStream(1, 1));
    CHECK_THROWS_AS(mollified_forward_sum(std::vector<double>(8, 1.0), p, 8, 1), std::out_of_range);
    CHECK_THROWS_AS(mollified_forward_sum(std::vector<double>(8, 1.0), p, 4, 0), std::invalid_argument);
}
