#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "insider/model.hpp"
#include "insider/numeric.hpp"
#include "insider/rng.hpp"

namespace insider {

/// Brownian trajectory sampled on a uniform grid over the full horizon.
class BrownianPath {
public:
    BrownianPath(TimeGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.steps() + 1) {
            throw std::invalid_argument("path needs one value per grid node");
        }
        if (values_.front() != 0.0) {
            throw std::invalid_argument("Brownian path must start at 0");
        }
    }

    static BrownianPath from_increments(TimeGrid grid, std::span<const double> increments) {
        if (increments.size() != grid.steps()) {
            throw std::invalid_argument("path needs one increment per grid step");
        }
        std::vector<double> values(increments.size() + 1, 0.0);
        for (std::size_t i = 0; i < increments.size(); ++i) values[i + 1] = values[i] + increments[i];
        return BrownianPath(grid, std::move(values));
    }

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }
    [[nodiscard]] double increment(std::size_t i) const { return values_.at(i + 1) - values_.at(i); }
    [[nodiscard]] double terminal() const noexcept { return values_.back(); }

    /// The same trajectory observed on every `factor`-th node.
    [[nodiscard]] BrownianPath coarsened(std::size_t factor) const {
        if (factor == 0 || grid_.steps() % factor != 0) {
            throw std::invalid_argument("coarsening factor must divide the step count");
        }
        const std::size_t n = grid_.steps() / factor;
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) v[i] = values_[i * factor];
        return BrownianPath(TimeGrid(grid_.end(), n), std::move(v));
    }

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Draws a path on `grid` from a copy of `rng`; the caller's stream is untouched.
inline BrownianPath sample_path(const TimeGrid& grid, RngStream rng) {
    const double scale = std::sqrt(grid.step());
    std::vector<double> values(grid.steps() + 1, 0.0);
    for (std::size_t i = 0; i < grid.steps(); ++i) values[i + 1] = values[i] + scale * rng.normal();
    return BrownianPath(grid, std::move(values));
}

enum class IntegrationRule { ito_left, forward_left };

struct IntegralResult {
    double value = 0.0;
    IntegrationRule rule = IntegrationRule::ito_left;
    std::size_t steps = 0;
};

namespace detail {

inline double left_point_sum(std::span<const double> phi, const BrownianPath& path, std::size_t up_to) {
    if (up_to > path.grid().steps()) {
        throw std::out_of_range("integration node index beyond the path grid");
    }
    if (phi.size() < up_to) {
        throw std::out_of_range("integrand shorter than the integration range");
    }
    const auto w = path.values();
    CompensatedSum acc;
    for (std::size_t i = 0; i < up_to; ++i) acc += phi[i] * (w[i + 1] - w[i]);
    return acc.value();
}

}  // namespace detail

/// Ito integral of an adapted integrand given at the left nodes t_0..t_{k-1}.
inline IntegralResult ito_integral(std::span<const double> phi, const BrownianPath& path, std::size_t up_to) {
    return {detail::left_point_sum(phi, path, up_to), IntegrationRule::ito_left, path.grid().steps()};
}

/// Forward integral: left-point evaluation against forward increments. The
/// integrand may depend on the whole path, including its terminal value.
inline IntegralResult forward_integral(std::span<const double> phi, const BrownianPath& path,
                                       std::size_t up_to) {
    return {detail::left_point_sum(phi, path, up_to), IntegrationRule::forward_left,
            path.grid().steps()};
}

/// Mollified forward sum with window eps = window * step: the grid version
/// of the integral of phi_s (W_{s+eps} - W_s) / eps ds over [0, t_k].
inline double mollified_forward_sum(std::span<const double> phi, const BrownianPath& path,
                                    std::size_t up_to, std::size_t window) {
    if (window == 0) throw std::invalid_argument("mollifier window must be positive");
    if (up_to + window > path.grid().steps()) {
        throw std::out_of_range("mollifier window reaches past the path grid");
    }
    if (phi.size() < up_to) throw std::out_of_range("integrand shorter than the integration range");
    const auto w = path.values();
    const double inv = 1.0 / static_cast<double>(window);
    CompensatedSum acc;
    for (std::size_t i = 0; i < up_to; ++i) acc += phi[i] * (w[i + window] - w[i]) * inv;
    return acc.value();
}

}  // namespace insider
