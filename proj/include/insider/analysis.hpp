#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "insider/model.hpp"
#include "insider/numeric.hpp"
#include "insider/parallel.hpp"
#include "insider/rng.hpp"

namespace insider {

/// Raised when a result contradicts a proven property of the closed forms.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct GapEvaluation {
    double t = 0.0;
    double horizon = 0.0;
    double b_t = 0.0;
    double b_T = 0.0;
    double gap = 0.0;
};

/// Lower bound on P(H_t < 0) together with its building blocks.
struct BoundEvaluation {
    double t = 0.0;
    double horizon = 0.0;
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double bound = 0.0;
    /// log(bound); stays finite where `bound` underflows to zero.
    double log_bound = 0.0;
};

/// Critical-point cubic A3 T^3 + A2 T^2 + A1 T + A0 of the scaled bound.
struct CubicPoly {
    double A3 = 0.0;
    double A2 = 0.0;
    double A1 = 0.0;
    double A0 = 0.0;
    double f = 0.0;
    double L = 0.0;

    [[nodiscard]] double operator()(double T) const noexcept { return ((A3 * T + A2) * T + A1) * T + A0; }
};

namespace detail {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
// (1 + sqrt 2) / sqrt 2
inline constexpr double kOnePlusSqrt2OverSqrt2 = 1.0 + 1.0 / std::numbers::sqrt2;

inline double log_horizon_ratio(double t, double T) { return std::log(T) - std::log(T - t); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline void require_inside(double t, double T, const char* what) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::domain_error(std::string(what) + ": T must be positive");
    if (!(t > 0.0 && t < T)) {
        throw std::domain_error(std::string(what) + ": t must lie strictly inside (0, T)");
    }
}

inline void require_fraction(double f, const char* what) {
    if (!(f > 0.0 && f < 1.0)) throw std::domain_error(std::string(what) + ": f must lie in (0, 1)");
}

inline double integrate_drift(const MarketModel& model, double t) {
    constexpr std::size_t kIntervalsPerPiece = 64;
    const auto pts = model.breakpoints(t);
    auto integrand = [&](double s) {
        const double premium = model.mu(s) - model.r(s);
        const double sig = model.sigma(s);
        return model.r(s) + 0.5 * premium * premium / (sig * sig);
    };
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        acc += simpson(integrand, pts[i], pts[i + 1], kIntervalsPerPiece);
    }
    return acc.value();
}

}  // namespace detail

/// E[log M_t / M_0] for the honest trader.
inline double expected_utility_honest(const MarketModel& model, double t) {
    if (!(t >= 0.0 && t <= model.horizon())) {
        throw std::domain_error("expected_utility_honest: t outside [0, T]");
    }
    if (t == 0.0) return 0.0;
    return detail::integrate_drift(model, t);
}

/// E[log M_t / M_0] for the insider: the honest value plus log(T / (T - t)) / 2.
inline double expected_utility_insider(const MarketModel& model, double t) {
    if (!(t >= 0.0)) throw std::domain_error("expected_utility_insider: negative t");
    if (!(t < model.horizon())) {
        throw std::domain_error("expected_utility_insider: market not viable at t >= T");
    }
    return expected_utility_honest(model, t) + 0.5 * detail::log_horizon_ratio(t, model.horizon());
}

/// H_t = [B_T^2 / T + log(T / (T - t)) - (B_T - B_t)^2 / (T - t)] / 2.
inline double gap_closed_form(double b_t, double b_T, double t, double T) {
    if (!(t >= 0.0 && t < T)) throw std::domain_error("gap_closed_form: need 0 <= t < T");
    const double tail = b_T - b_t;
    return 0.5 * (b_T * b_T / T + detail::log_horizon_ratio(t, T) - tail * tail / (T - t));
}

inline GapEvaluation evaluate_gap(double b_t, double b_T, double t, double T) {
    return {t, T, b_t, b_T, gap_closed_form(b_t, b_T, t, T)};
}

/// P(H_t < 0) by conditioning on X = B_t / sqrt(t).
///
/// With Y = (B_T - B_t) / sqrt(T - t) independent of X, H_t < 0 iff
/// t Y^2 - 2 sqrt(t (T - t)) X Y - (t X^2 + T l) > 0, l = log(T / (T - t)),
/// i.e. Y outside the roots y-, y+. The conditional probability
/// Phi(y-) + Phi(-y+) is even in X and is integrated against phi(X) by
/// adaptive Gauss-Kronrod.
inline double prob_honest_wins_quadrature(double t, double T) {
    detail::require_inside(t, T, "prob_honest_wins_quadrature");
    const double ell = detail::log_horizon_ratio(t, T);
    const double slope = std::sqrt((T - t) / t);
    const double spread = std::sqrt(T / t);
    const double shift = T * ell / t;

    auto conditional = [=](double x) {
        const double y_plus = slope * x + spread * std::sqrt(x * x + ell);
        // Product of the roots is -(x^2 + T l / t); avoids cancellation in y-.
        const double y_minus = -(x * x + shift) / y_plus;
        return detail::normal_pdf(x) * (detail::normal_cdf(y_minus) + detail::normal_cdf(-y_plus));
    };

    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    constexpr unsigned kMaxDepth = 20;
    constexpr double kTol = 1e-13;
    const double knee = std::min(1.0, std::sqrt(ell));
    const double inner = Rule::integrate(conditional, 0.0, knee, kMaxDepth, kTol);
    const double middle = Rule::integrate(conditional, knee, 10.0, kMaxDepth, kTol);
    const double outer =
        Rule::integrate(conditional, 10.0, std::numeric_limits<double>::infinity(), kMaxDepth, kTol);
    return 2.0 * (inner + middle + outer);
}

/// Monte Carlo estimate of P(H_t < 0) from independent (B_t, B_T - B_t)
/// draws; stream i feeds sample i. The standard error is binomial.
inline McEstimate prob_honest_wins_mc(double t, double T, std::size_t paths, std::uint64_t seed,
                                      unsigned workers = 1) {
    detail::require_inside(t, T, "prob_honest_wins_mc");
    if (paths == 0) throw std::invalid_argument("prob_honest_wins_mc: need at least one path");
    const double sd_head = std::sqrt(t);
    const double sd_tail = std::sqrt(T - t);
    const auto counts = map_chunks(paths, workers, [&](std::size_t begin, std::size_t end) {
        std::size_t wins = 0;
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(seed, i);
            const double b_t = sd_head * rng.normal();
            const double b_T = b_t + sd_tail * rng.normal();
            if (gap_closed_form(b_t, b_T, t, T) < 0.0) ++wins;
        }
        return wins;
    });
    std::size_t wins = 0;
    for (std::size_t c : counts) wins += c;
    const double n = static_cast<double>(paths);
    const double p = static_cast<double>(wins) / n;
    return {paths, p, std::sqrt(p * (1.0 - p) / n)};
}

/// Explicit positive lower bound on P(H_t < 0):
///   sqrt(t (T-t)) / [4 (3t + T + 2tL + sqrt2 (T-t))]
///   * exp{-[t (L+1)(L+2) + ((1+sqrt2)/sqrt2)(T-t)] / [t (T-t)]},
/// with L = ((T-t)/2) log(T/(T-t)) and the quadratic-form constants a, b, c.
inline BoundEvaluation lower_bound(double t, double T) {
    detail::require_inside(t, T, "lower_bound");
    using detail::kOnePlusSqrt2OverSqrt2;
    using detail::kSqrt2;
    BoundEvaluation e;
    e.t = t;
    e.horizon = T;
    const double rest = T - t;
    const double prod = t * rest;
    e.L = 0.5 * rest * detail::log_horizon_ratio(t, T);
    e.a = (t + T) / (2.0 * prod);
    e.b = (2.0 * t * (e.L + 1.0) + kSqrt2 * rest) / prod;
    e.c = (t * (e.L + 1.0) * (e.L + 1.0) + rest) / prod;

    const double denom = 4.0 * (3.0 * t + T + 2.0 * t * e.L + kSqrt2 * rest);
    const double exponent = (t * (e.L + 1.0) * (e.L + 2.0) + kOnePlusSqrt2OverSqrt2 * rest) / prod;
    e.bound = std::sqrt(prod) / denom * std::exp(-exponent);
    e.log_bound = 0.5 * std::log(prod) - std::log(denom) - exponent;
    return e;
}

/// L = ((1 - f) / 2) log(1 / (1 - f)), the horizon-free factor of L_t at t = fT.
inline double scaled_L(double f) { return -0.5 * (1.0 - f) * std::log1p(-f); }

namespace detail {

struct ScaledParts {
    double prefactor;
    double exponent;
};

inline ScaledParts scaled_parts(double f, double T) {
    require_fraction(f, "lower_bound_scaled");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::domain_error("lower_bound_scaled: T must be positive");
    const double L = scaled_L(f);
    const double g = 1.0 - f;
    const double prefactor = std::sqrt(f * g) / (4.0 * (3.0 * f + 1.0 + 2.0 * f * L * T + kSqrt2 * g));
    const double exponent = (f * (L * T + 1.0) * (L * T + 2.0) + kOnePlusSqrt2OverSqrt2 * g) / (f * g * T);
    return {prefactor, exponent};
}

}  // namespace detail

/// The bound at t = fT written in terms of f and T.
inline double lower_bound_scaled(double f, double T) {
    const auto p = detail::scaled_parts(f, T);
    return p.prefactor * std::exp(-p.exponent);
}

inline double log_lower_bound_scaled(double f, double T) {
    const auto p = detail::scaled_parts(f, T);
    return std::log(p.prefactor) - p.exponent;
}

/// Numerator of d/dT log L_{fT} after clearing the positive denominator
/// f (1-f) T^2 (D + 2 f L T), D = 3f + 1 + sqrt2 (1-f), E = 2f + ((1+sqrt2)/sqrt2)(1-f):
///   A3 = -2 f^2 L^3
///   A2 = -(D f L^2 + 2 f^2 (1-f) L)
///   A1 = 2 f L E
///   A0 = E D
inline CubicPoly cubic_coefficients(double f) {
    detail::require_fraction(f, "cubic_coefficients");
    const double g = 1.0 - f;
    const double L = scaled_L(f);
    const double D = 3.0 * f + 1.0 + detail::kSqrt2 * g;
    const double E = 2.0 * f + detail::kOnePlusSqrt2OverSqrt2 * g;
    CubicPoly p;
    p.f = f;
    p.L = L;
    p.A3 = -2.0 * f * f * L * L * L;
    p.A2 = -(D * f * L * L + 2.0 * f * f * g * L);
    p.A1 = 2.0 * f * L * E;
    p.A0 = E * D;
    return p;
}

/// Horizon T* maximizing L_{fT}: the unique positive root of the cubic.
inline double optimal_horizon(double f) {
    const CubicPoly p = cubic_coefficients(f);
    double lo = 1e-12;
    double hi = 1.0;
    if (!(p(lo) > 0.0)) throw InconsistencyError("optimal_horizon: cubic not positive near T = 0");
    while (p(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw InconsistencyError("optimal_horizon: no sign change of the cubic in [1e-12, 1e12]");
    }
    for (int iter = 0; iter < 400 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (p(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);

    const double at = log_lower_bound_scaled(f, root);
    if (!(at > log_lower_bound_scaled(f, root * (1.0 - 1e-4)) &&
          at > log_lower_bound_scaled(f, root * (1.0 + 1e-4)))) {
        throw InconsistencyError("optimal_horizon: cubic root is not a local maximum of the bound");
    }
    return root;
}

/// E[(M_insider / M_honest)^alpha] =
///   (T/(T+at))^(1/2) (T/(T-t))^(a/2) ((T+at)/(T-a^2 t))^(1/2)
/// for t < min(T, T/a^2). Returns std::nullopt when the moment diverges.
inline std::optional<double> moment_ratio(double alpha, double t, double T) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("moment_ratio: alpha must be positive");
    if (!(T > 0.0)) throw std::domain_error("moment_ratio: T must be positive");
    if (!(t >= 0.0 && t < T)) throw std::domain_error("moment_ratio: need 0 <= t < T");
    if (t >= T / (alpha * alpha)) return std::nullopt;
    const double at = alpha * t;
    return std::sqrt(T / (T + at)) * std::pow(T / (T - t), 0.5 * alpha) *
           std::sqrt((T + at) / (T - alpha * at));
}

/// Monte Carlo mean of exp(alpha H_t), finite regime only.
inline McEstimate moment_ratio_mc(double alpha, double t, double T, std::size_t paths, std::uint64_t seed,
                                  unsigned workers = 1) {
    if (!moment_ratio(alpha, t, T)) {
        throw std::domain_error("moment_ratio_mc: moment diverges for t >= T / alpha^2");
    }
    if (paths == 0) throw std::invalid_argument("moment_ratio_mc: need at least one path");
    const double sd_head = std::sqrt(t);
    const double sd_tail = std::sqrt(T - t);
    return mc_mean(paths, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        const double b_t = sd_head * rng.normal();
        const double b_T = b_t + sd_tail * rng.normal();
        return std::exp(alpha * gap_closed_form(b_t, b_T, t, T));
    });
}

}  // namespace insider
