#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace insider {

struct Knot {
    double time;
    double value;

    friend bool operator==(const Knot&, const Knot&) = default;
};

/// A deterministic coefficient function of time: either a constant or the
/// piecewise-linear interpolant of (time, value) samples.
class Coefficient {
public:
    Coefficient() = default;

    static Coefficient constant(double value) {
        Coefficient c;
        c.knots_ = {{0.0, value}};
        return c;
    }

    static Coefficient piecewise_linear(std::vector<Knot> samples) {
        if (samples.empty()) {
            throw std::invalid_argument("coefficient sample list is empty");
        }
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (!(samples[i].time > samples[i - 1].time)) {
                throw std::invalid_argument("coefficient sample times must be strictly increasing");
            }
        }
        Coefficient c;
        c.knots_ = std::move(samples);
        c.piecewise_ = true;
        return c;
    }

    [[nodiscard]] bool is_constant() const noexcept { return !piecewise_; }
    [[nodiscard]] std::span<const Knot> knots() const noexcept { return knots_; }

    /// Linear interpolation between samples, clamped outside the sample span.
    [[nodiscard]] double operator()(double s) const noexcept {
        if (!piecewise_ || s <= knots_.front().time) return knots_.front().value;
        if (s >= knots_.back().time) return knots_.back().value;
        const auto hi = std::upper_bound(knots_.begin(), knots_.end(), s,
                                         [](double x, const Knot& k) { return x < k.time; });
        const auto lo = hi - 1;
        if (s == lo->time) return lo->value;
        const double w = (s - lo->time) / (hi->time - lo->time);
        return lo->value + w * (hi->value - lo->value);
    }

    friend bool operator==(const Coefficient&, const Coefficient&) = default;

private:
    std::vector<Knot> knots_{{0.0, 0.0}};
    bool piecewise_ = false;
};

/// Black-Scholes market on [0, T] with deterministic rate, drift and volatility.
class MarketModel {
public:
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] double r(double s) const noexcept { return r_(s); }
    [[nodiscard]] double mu(double s) const noexcept { return mu_(s); }
    [[nodiscard]] double sigma(double s) const noexcept { return sigma_(s); }

    [[nodiscard]] const Coefficient& rate() const noexcept { return r_; }
    [[nodiscard]] const Coefficient& drift() const noexcept { return mu_; }
    [[nodiscard]] const Coefficient& volatility() const noexcept { return sigma_; }

    /// Union of all coefficient sample times inside [0, t], plus 0 and t.
    [[nodiscard]] std::vector<double> breakpoints(double t) const {
        std::vector<double> pts{0.0, t};
        for (const Coefficient* c : {&r_, &mu_, &sigma_}) {
            if (c->is_constant()) continue;
            for (const Knot& k : c->knots()) {
                if (k.time > 0.0 && k.time < t) pts.push_back(k.time);
            }
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    friend MarketModel make_model(double horizon, Coefficient r, Coefficient mu, Coefficient sigma);

private:
    double horizon_ = 1.0;
    Coefficient r_;
    Coefficient mu_;
    Coefficient sigma_;
};

namespace detail {

inline void validate_coefficient(const Coefficient& c, double horizon, const char* name,
                                 bool strictly_positive) {
    const auto knots = c.knots();
    if (!c.is_constant()) {
        if (knots.front().time != 0.0 || knots.back().time != horizon) {
            throw std::invalid_argument(std::string(name) +
                                        ": samples must start at 0 and end at the horizon");
        }
    }
    for (const Knot& k : knots) {
        if (!std::isfinite(k.time) || !std::isfinite(k.value)) {
            throw std::invalid_argument(std::string(name) + ": non-finite sample");
        }
        if (k.time < 0.0 || k.time > horizon) {
            throw std::invalid_argument(std::string(name) + ": sample time outside [0, T]");
        }
        // Linear interpolation of positive samples stays positive, so the
        // knots are the only points that need checking.
        if (strictly_positive && !(k.value > 0.0)) {
            throw std::invalid_argument(std::string(name) + " must be strictly positive");
        }
    }
}

}  // namespace detail

inline MarketModel make_model(double horizon, Coefficient r, Coefficient mu, Coefficient sigma) {
    if (!std::isfinite(horizon) || !(horizon > 0.0)) {
        throw std::invalid_argument("horizon T must be positive and finite");
    }
    detail::validate_coefficient(r, horizon, "r", false);
    detail::validate_coefficient(mu, horizon, "mu", false);
    detail::validate_coefficient(sigma, horizon, "sigma", true);
    MarketModel m;
    m.horizon_ = horizon;
    m.r_ = std::move(r);
    m.mu_ = std::move(mu);
    m.sigma_ = std::move(sigma);
    return m;
}

inline MarketModel make_model(double horizon, double r, double mu, double sigma) {
    return make_model(horizon, Coefficient::constant(r), Coefficient::constant(mu),
                      Coefficient::constant(sigma));
}

/// Uniform grid 0 = t_0 < t_1 < ... < t_n = t_end.
class TimeGrid {
public:
    TimeGrid(double end, std::size_t steps) : end_(end), steps_(steps) {
        if (!std::isfinite(end) || !(end > 0.0)) {
            throw std::invalid_argument("grid end must be positive and finite");
        }
        if (steps == 0) {
            throw std::invalid_argument("grid needs at least one step");
        }
    }

    [[nodiscard]] double start() const noexcept { return 0.0; }
    [[nodiscard]] double end() const noexcept { return end_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] double step() const noexcept { return end_ / static_cast<double>(steps_); }

    // i/n is correctly rounded, so doubling n reproduces every old node bit for bit.
    [[nodiscard]] double node(std::size_t i) const noexcept {
        return end_ * (static_cast<double>(i) / static_cast<double>(steps_));
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> out(steps_ + 1);
        for (std::size_t i = 0; i <= steps_; ++i) out[i] = node(i);
        return out;
    }

    /// Index of the node equal to t (up to a relative 1e-12 of the grid end).
    [[nodiscard]] std::optional<std::size_t> index_of(double t) const noexcept {
        if (!(t >= 0.0) || t > end_ * (1.0 + 1e-12)) return std::nullopt;
        const double x = t / step();
        const auto k = static_cast<std::size_t>(std::llround(x));
        if (k > steps_) return std::nullopt;
        if (std::abs(node(k) - t) > 1e-12 * end_) return std::nullopt;
        return k;
    }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double end_;
    std::size_t steps_;
};

inline TimeGrid grid(double t_end, std::size_t n) { return TimeGrid(t_end, n); }

}  // namespace insider
