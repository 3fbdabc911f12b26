#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "insider/model.hpp"
#include "insider/numeric.hpp"
#include "insider/stochastic.hpp"

namespace insider {

/// Fraction of wealth held in the risky asset. Unbounded: shorting and
/// leverage are allowed.
struct PortfolioWeight {
    double value = 0.0;
};

struct WealthOutcome {
    double log_return_honest = 0.0;
    double log_return_insider = 0.0;
    double t = 0.0;
    std::size_t path_id = 0;

    [[nodiscard]] double gap() const noexcept { return log_return_insider - log_return_honest; }
};

enum class Trader { honest, insider };

/// Merton log-optimal weight (mu - r) / sigma^2.
inline PortfolioWeight honest_weight(const MarketModel& model, double s) {
    if (!(s >= 0.0 && s <= model.horizon())) {
        throw std::domain_error("honest_weight: time outside [0, T]");
    }
    const double sig = model.sigma(s);
    return {(model.mu(s) - model.r(s)) / (sig * sig)};
}

/// Log-optimal weight of a trader who knows B_T.
inline PortfolioWeight insider_weight(const MarketModel& model, double s, double b_s, double b_T) {
    if (!(s >= 0.0)) throw std::domain_error("insider_weight: negative time");
    if (!(s < model.horizon())) {
        throw std::domain_error("insider_weight: s must be strictly before the horizon");
    }
    return {honest_weight(model, s).value + (b_T - b_s) / (model.sigma(s) * (model.horizon() - s))};
}

namespace detail {

inline std::size_t strategy_node(const MarketModel& model, const BrownianPath& path, double t) {
    const TimeGrid& g = path.grid();
    if (std::abs(g.end() - model.horizon()) > 1e-12 * model.horizon()) {
        throw std::invalid_argument("path must span the model horizon");
    }
    if (!(t < model.horizon())) {
        throw std::domain_error("evaluation time must be strictly before the horizon");
    }
    const auto k = g.index_of(t);
    if (!k) throw std::invalid_argument("evaluation time is not a grid node");
    return *k;
}

}  // namespace detail

/// Pathwise anticipating correction log(M_insider / M_honest) up to node k:
/// the forward integral of (B_T - B_s)/(T - s) minus half the left-rectangle
/// integral of its square. Contains no market coefficients.
inline double simulated_gap(const BrownianPath& path, std::size_t k) {
    const TimeGrid& g = path.grid();
    if (k > g.steps() || (k == g.steps() && k > 0)) {
        throw std::domain_error("gap is only defined strictly before the horizon");
    }
    const double horizon = g.end();
    const double b_T = path.terminal();
    std::vector<double> phi(k);
    CompensatedSum squares;
    for (std::size_t i = 0; i < k; ++i) {
        phi[i] = (b_T - path.value(i)) / (horizon - g.node(i));
        squares += phi[i] * phi[i];
    }
    const double fwd = forward_integral(phi, path, k).value;
    return fwd - 0.5 * squares.value() * g.step();
}

/// log(M_t / M_0) for the honest Merton trader: Simpson quadrature of the
/// drift r + (mu - r)^2 / (2 sigma^2) plus the Ito integral of (mu - r)/sigma.
inline double honest_log_return(const MarketModel& model, const BrownianPath& path, double t) {
    const std::size_t k = detail::strategy_node(model, path, t);
    const TimeGrid& g = path.grid();
    std::vector<double> drift(k + 1);
    std::vector<double> vol(k);
    for (std::size_t i = 0; i <= k; ++i) {
        const double s = g.node(i);
        const double premium = model.mu(s) - model.r(s);
        const double sig = model.sigma(s);
        drift[i] = model.r(s) + premium * premium / (2.0 * sig * sig);
        if (i < k) vol[i] = premium / sig;
    }
    return simpson_on_nodes(drift, g.step()) + ito_integral(vol, path, k).value;
}

inline double insider_log_return(const MarketModel& model, const BrownianPath& path, double t) {
    const std::size_t k = detail::strategy_node(model, path, t);
    return honest_log_return(model, path, t) + simulated_gap(path, k);
}

inline WealthOutcome evaluate_outcome(const MarketModel& model, const BrownianPath& path, double t,
                                      std::size_t path_id) {
    const double honest = honest_log_return(model, path, t);
    const std::size_t k = detail::strategy_node(model, path, t);
    return {honest, honest + simulated_gap(path, k), t, path_id};
}

namespace detail {

inline PortfolioWeight weight_on_path(const MarketModel& model, const BrownianPath& path, std::size_t i,
                                      Trader who) {
    const double s = path.grid().node(i);
    return who == Trader::honest ? honest_weight(model, s)
                                 : insider_weight(model, s, path.value(i), path.terminal());
}

}  // namespace detail

/// Log-Euler solution of the wealth equation with M_0 = 1:
/// log M += [(1 - pi) r + pi mu - pi^2 sigma^2 / 2] dt + pi sigma dW,
/// weights frozen at the left node. Wealth stays positive by construction.
inline double simulate_wealth_euler(const MarketModel& model, const BrownianPath& path, double t,
                                    Trader who) {
    const std::size_t k = detail::strategy_node(model, path, t);
    const TimeGrid& g = path.grid();
    const double dt = g.step();
    CompensatedSum log_wealth;
    for (std::size_t i = 0; i < k; ++i) {
        const double s = g.node(i);
        const double pi = detail::weight_on_path(model, path, i, who).value;
        const double sig = model.sigma(s);
        const double drift = (1.0 - pi) * model.r(s) + pi * model.mu(s) - 0.5 * pi * pi * sig * sig;
        log_wealth += drift * dt;
        log_wealth += pi * sig * path.increment(i);
    }
    return log_wealth.value();
}

struct PlainEulerResult {
    /// log M_t, empty when wealth reached zero or below.
    std::optional<double> log_wealth;
    /// Step at which wealth first became non-positive (valid when log_wealth is empty).
    std::size_t failed_step = 0;
};

/// Diagnostic plain Euler scheme M += M [((1 - pi) r + pi mu) dt + pi sigma dW].
inline PlainEulerResult simulate_wealth_plain_euler(const MarketModel& model, const BrownianPath& path,
                                                    double t, Trader who) {
    const std::size_t k = detail::strategy_node(model, path, t);
    const TimeGrid& g = path.grid();
    const double dt = g.step();
    double wealth = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double s = g.node(i);
        const double pi = detail::weight_on_path(model, path, i, who).value;
        wealth *= 1.0 + ((1.0 - pi) * model.r(s) + pi * model.mu(s)) * dt +
                  pi * model.sigma(s) * path.increment(i);
        if (!(wealth > 0.0)) return {std::nullopt, i};
    }
    return {std::log(wealth), 0};
}

}  // namespace insider
