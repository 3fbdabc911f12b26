#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "insider/analysis.hpp"
#include "insider/model.hpp"
#include "insider/parallel.hpp"
#include "insider/report.hpp"
#include "insider/rng.hpp"
#include "insider/stochastic.hpp"
#include "insider/strategies.hpp"

namespace insider {

/// Location of a curve's maximum and whether the curve rises strictly up to
/// it and falls strictly after it.
struct CurveShape {
    std::size_t argmax = 0;
    bool strictly_unimodal = false;
    bool interior = false;
    /// Points above both neighbours (one neighbour at the ends).
    std::size_t local_maxima = 0;
};

inline CurveShape analyze_curve(std::span<const double> values) {
    CurveShape shape;
    if (values.empty()) return shape;
    shape.argmax = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    shape.interior = shape.argmax > 0 && shape.argmax + 1 < values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool above_left = i == 0 || values[i] > values[i - 1];
        const bool above_right = i + 1 == values.size() || values[i] > values[i + 1];
        if (above_left && above_right) ++shape.local_maxima;
    }
    shape.strictly_unimodal = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const bool rising = i <= shape.argmax;
        if (rising ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
            shape.strictly_unimodal = false;
            break;
        }
    }
    return shape;
}

namespace detail {

inline std::string join(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_double(xs[i]);
    }
    return out;
}

template <class Int>
std::string join_ints(std::span<const Int> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

// Normalizing in log space keeps curves well defined where the bound underflows.
inline std::vector<double> normalized_from_log(std::span<const double> logs) {
    const double top = *std::max_element(logs.begin(), logs.end());
    std::vector<double> out(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) out[i] = std::exp(logs[i] - top);
    return out;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// The bound L_t on a uniform t-grid strictly inside (0, T), for each T.
inline ExperimentReport figure_bound_vs_t(std::span<const double> horizons, std::size_t samples) {
    if (horizons.empty()) throw std::invalid_argument("figure_bound_vs_t: no horizons");
    if (samples < 3) throw std::invalid_argument("figure_bound_vs_t: need at least 3 samples per curve");
    detail::Stopwatch clock;
    ExperimentReport rep;
    rep.name = "figure-bound-t";
    rep.add_parameter("T", detail::join(horizons));
    rep.add_parameter("samples", std::to_string(samples));
    rep.columns = {"T", "t", "bound", "log_bound", "bound_normalized"};
    for (double T : horizons) {
        if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("figure_bound_vs_t: T must be positive");
        std::vector<BoundEvaluation> curve;
        std::vector<double> logs;
        for (std::size_t i = 1; i <= samples; ++i) {
            const double t = T * (static_cast<double>(i) / static_cast<double>(samples + 1));
            curve.push_back(lower_bound(t, T));
            logs.push_back(curve.back().log_bound);
        }
        const auto normalized = detail::normalized_from_log(logs);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            rep.add_row({T, curve[i].t, curve[i].bound, curve[i].log_bound, normalized[i]});
        }
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// The scaled bound L_{T/n} over T in (0, T_max] for each n, with the
/// analytic maximizer of every curve.
inline ExperimentReport figure_bound_vs_T(std::span<const int> ns, double T_max, std::size_t samples) {
    if (ns.empty()) throw std::invalid_argument("figure_bound_vs_T: no n values");
    if (!(T_max > 0.0) || !std::isfinite(T_max)) throw std::invalid_argument("figure_bound_vs_T: T range must be positive");
    if (samples < 3) throw std::invalid_argument("figure_bound_vs_T: need at least 3 samples per curve");
    detail::Stopwatch clock;
    ExperimentReport rep;
    rep.name = "figure-bound-T";
    rep.add_parameter("n", detail::join_ints(ns));
    rep.add_parameter("T_max", format_double(T_max));
    rep.add_parameter("samples", std::to_string(samples));
    rep.columns = {"n", "T", "bound", "bound_normalized", "analytic_argmax"};
    for (int n : ns) {
        if (n < 2) throw std::invalid_argument("figure_bound_vs_T: every n must be at least 2");
        const double f = 1.0 / static_cast<double>(n);
        const double t_star = optimal_horizon(f);
        std::vector<double> Ts;
        std::vector<double> logs;
        for (std::size_t i = 1; i <= samples; ++i) {
            Ts.push_back(T_max * (static_cast<double>(i) / static_cast<double>(samples)));
            logs.push_back(log_lower_bound_scaled(f, Ts.back()));
        }
        const auto normalized = detail::normalized_from_log(logs);
        for (std::size_t i = 0; i < Ts.size(); ++i) {
            rep.add_row({std::int64_t{n}, Ts[i], lower_bound_scaled(f, Ts[i]), normalized[i], t_star});
        }
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// Mean absolute (and signed) difference between the simulated gap and its
/// closed form, for nested grids that share one fine Brownian path per sample.
inline ExperimentReport convergence_study(double t, double T, std::span<const std::size_t> sizes, std::size_t paths,
                                          std::uint64_t seed, unsigned workers = 1) {
    if (sizes.empty()) throw std::invalid_argument("convergence_study: no grid sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw std::invalid_argument("convergence_study: grid sizes must be positive");
        if (i > 0 && !(sizes[i] > sizes[i - 1])) {
            throw std::invalid_argument("convergence_study: grid sizes must be strictly increasing");
        }
    }
    if (!(T > 0.0) || !(t >= 0.0 && t < T)) throw std::domain_error("convergence_study: need 0 <= t < T");
    if (paths == 0) throw std::invalid_argument("convergence_study: need at least one path");
    const std::size_t finest = sizes.back();
    std::vector<std::size_t> nodes;
    for (std::size_t n : sizes) {
        if (finest % n != 0) throw std::invalid_argument("convergence_study: grid sizes must divide the finest size");
        const auto k = TimeGrid(T, n).index_of(t);
        if (!k) throw std::invalid_argument("convergence_study: t is not a node of every grid");
        nodes.push_back(*k);
    }

    detail::Stopwatch clock;
    const TimeGrid fine(T, finest);
    struct Partial {
        std::vector<McAccumulator> abs_err;
        std::vector<McAccumulator> err;
    };
    const auto partials = map_chunks(paths, workers, [&](std::size_t begin, std::size_t end) {
        Partial p{std::vector<McAccumulator>(sizes.size()), std::vector<McAccumulator>(sizes.size())};
        for (std::size_t i = begin; i < end; ++i) {
            const BrownianPath path = sample_path(fine, RngStream(seed, i));
            const std::size_t k_fine = nodes.back();
            const double exact = gap_closed_form(path.value(k_fine), path.terminal(), t, T);
            for (std::size_t j = 0; j < sizes.size(); ++j) {
                const BrownianPath coarse = path.coarsened(finest / sizes[j]);
                const double e = simulated_gap(coarse, nodes[j]) - exact;
                p.abs_err[j].add(std::abs(e));
                p.err[j].add(e);
            }
        }
        return p;
    }, 256);
    std::vector<McAccumulator> abs_err(sizes.size());
    std::vector<McAccumulator> err(sizes.size());
    for (const auto& p : partials) {
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            abs_err[j].merge(p.abs_err[j]);
            err[j].merge(p.err[j]);
        }
    }

    ExperimentReport rep;
    rep.name = "converge";
    rep.seed = seed;
    rep.add_parameter("t", format_double(t));
    rep.add_parameter("T", format_double(T));
    rep.add_parameter("n", detail::join_ints(sizes));
    rep.add_parameter("paths", std::to_string(paths));
    rep.add_parameter("seed", std::to_string(seed));
    rep.columns = {"n", "mean_abs_error", "mean_abs_error_stderr", "mean_error"};
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        const auto a = abs_err[j].estimate();
        rep.add_row({static_cast<std::int64_t>(sizes[j]), a.mean, a.std_error, err[j].mean()});
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// Monte Carlo summary of simulated honest and insider wealth at time t.
struct WealthComparison {
    McEstimate honest;
    McEstimate insider;
    McEstimate gap;
    McEstimate discretization_bias;  // simulated gap minus closed-form gap
    McEstimate honest_wins;
    McEstimate euler_honest_deviation;
    McEstimate euler_insider_deviation;
};

inline WealthComparison compare_wealth(const MarketModel& model, double t, std::size_t steps, std::size_t paths,
                                       std::uint64_t seed, unsigned workers = 1, bool with_euler = true) {
    if (paths == 0) throw std::invalid_argument("compare_wealth: need at least one path");
    const TimeGrid g(model.horizon(), steps);
    const std::size_t k = detail::strategy_node(model, BrownianPath(g, std::vector<double>(steps + 1, 0.0)), t);

    struct Partial {
        McAccumulator honest, insider, gap, bias, wins, euler_h, euler_i;
    };
    const auto partials = map_chunks(paths, workers, [&](std::size_t begin, std::size_t end) {
        Partial p;
        for (std::size_t i = begin; i < end; ++i) {
            const BrownianPath path = sample_path(g, RngStream(seed, i));
            const WealthOutcome out = evaluate_outcome(model, path, t, i);
            const double exact = gap_closed_form(path.value(k), path.terminal(), t, model.horizon());
            p.honest.add(out.log_return_honest);
            p.insider.add(out.log_return_insider);
            p.gap.add(out.gap());
            p.bias.add(out.gap() - exact);
            p.wins.add(out.gap() < 0.0 ? 1.0 : 0.0);
            if (with_euler) {
                p.euler_h.add(std::abs(simulate_wealth_euler(model, path, t, Trader::honest) - out.log_return_honest));
                p.euler_i.add(std::abs(simulate_wealth_euler(model, path, t, Trader::insider) - out.log_return_insider));
            }
        }
        return p;
    }, 256);
    Partial total;
    for (const auto& p : partials) {
        total.honest.merge(p.honest);
        total.insider.merge(p.insider);
        total.gap.merge(p.gap);
        total.bias.merge(p.bias);
        total.wins.merge(p.wins);
        total.euler_h.merge(p.euler_h);
        total.euler_i.merge(p.euler_i);
    }
    return {total.honest.estimate(), total.insider.estimate(), total.gap.estimate(),
            total.bias.estimate(), total.wins.estimate(), total.euler_h.estimate(),
            total.euler_i.estimate()};
}

inline ExperimentReport wealth_report(const MarketModel& model, double t, std::size_t steps, std::size_t paths,
                                      std::uint64_t seed, unsigned workers = 1) {
    detail::Stopwatch clock;
    const WealthComparison w = compare_wealth(model, t, steps, paths, seed, workers);
    const double T = model.horizon();
    ExperimentReport rep;
    rep.name = "simulate";
    rep.seed = seed;
    rep.add_parameter("T", format_double(T));
    rep.add_parameter("t", format_double(t));
    rep.add_parameter("n", std::to_string(steps));
    rep.add_parameter("paths", std::to_string(paths));
    rep.add_parameter("seed", std::to_string(seed));
    rep.columns = {"quantity", "estimate", "std_error", "reference"};
    const double p_quad = t > 0.0 ? prob_honest_wins_quadrature(t, T) : 0.0;
    rep.add_row({std::string("honest_log_return"), w.honest.mean, w.honest.std_error, expected_utility_honest(model, t)});
    rep.add_row({std::string("insider_log_return"), w.insider.mean, w.insider.std_error, expected_utility_insider(model, t)});
    rep.add_row({std::string("utility_gap"), w.gap.mean, w.gap.std_error, 0.5 * detail::log_horizon_ratio(t, T)});
    rep.add_row({std::string("discretization_bias"), w.discretization_bias.mean, w.discretization_bias.std_error, 0.0});
    rep.add_row({std::string("prob_honest_wins"), w.honest_wins.mean, w.honest_wins.std_error, p_quad});
    rep.add_row({std::string("euler_honest_abs_deviation"), w.euler_honest_deviation.mean,
                 w.euler_honest_deviation.std_error, 0.0});
    rep.add_row({std::string("euler_insider_abs_deviation"), w.euler_insider_deviation.mean,
                 w.euler_insider_deviation.std_error, 0.0});
    rep.wall_seconds = clock.seconds();
    return rep;
}

/// Knobs for the acceptance battery. `bound_scale` multiplies the lower
/// bound in the domination check and exists for fault-injection tests.
struct AcceptanceOptions {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double bound_scale = 1.0;
    /// Criteria to run (1..8); empty runs all of them.
    std::set<int> only;
    std::size_t gap_paths = 100'000;
    std::size_t gap_steps = 1024;
    std::size_t convergence_paths = 1'000;
    std::size_t prob_paths = 1'000'000;
    std::size_t moment_paths = 1'000'000;
};

/// Frozen maximizer of L_{T/2} over T, from bisection on the critical-point
/// cubic and cross-checked by direct maximization of the bound.
inline constexpr double kOptimalHorizonHalf = 8.754570766424171;

namespace detail {

class AcceptanceRecorder {
public:
    explicit AcceptanceRecorder(ExperimentReport& rep) : rep_(rep) {}

    void check(int criterion, std::string name, bool passed, double measured, double reference, double tolerance) {
        rep_.add_row({std::int64_t{criterion}, std::move(name), passed, measured, reference, tolerance});
    }

private:
    ExperimentReport& rep_;
};

inline void acceptance_rows(const AcceptanceOptions& opt, ExperimentReport& rep) {
    AcceptanceRecorder rec(rep);
    auto wanted = [&](int c) { return opt.only.empty() || opt.only.count(c) > 0; };
    // Streams at and above this index are reserved for parameter draws.
    constexpr std::uint64_t kParamStream = std::uint64_t{1} << 40;

    if (wanted(1)) {
        const MarketModel model = make_model(1.0, 0.01, 0.05, 0.2);
        const WealthComparison w = compare_wealth(model, 0.5, opt.gap_steps, opt.gap_paths, opt.seed, opt.workers, false);
        const double reference = 0.5 * std::numbers::ln2;
        const double tol = 4.0 * w.gap.std_error + std::abs(w.discretization_bias.mean);
        rec.check(1, "mean utility gap equals log(2)/2", std::abs(w.gap.mean - reference) <= tol, w.gap.mean,
                  reference, tol);
    }

    if (wanted(2)) {
        const std::vector<std::size_t> sizes{64, 256, 1024};
        const auto conv = convergence_study(0.5, 1.0, sizes, opt.convergence_paths, opt.seed, opt.workers);
        const std::size_t col = conv.column_index("mean_abs_error");
        for (std::size_t j = 1; j < sizes.size(); ++j) {
            const double prev = std::get<double>(conv.rows[j - 1][col]);
            const double cur = std::get<double>(conv.rows[j][col]);
            rec.check(2, "gap error decreases from n=" + std::to_string(sizes[j - 1]) + " to n=" + std::to_string(sizes[j]),
                      cur < prev, cur, prev, 0.0);
        }
    }

    if (wanted(3)) {
        std::size_t nonpositive = 0;
        std::size_t violations = 0;
        double min_margin = std::numeric_limits<double>::infinity();
        const double log_scale = std::log(opt.bound_scale);
        for (int i = 0; i < 20; ++i) {
            const double T = 0.1 * std::pow(1000.0, i / 19.0);
            for (int j = 0; j < 20; ++j) {
                const double f = 0.02 + 0.96 * (j / 19.0);
                const double t = f * T;
                const BoundEvaluation b = lower_bound(t, T);
                if (!std::isfinite(b.log_bound)) ++nonpositive;
                const double margin = std::log(prob_honest_wins_quadrature(t, T)) - (b.log_bound + log_scale);
                if (!(margin >= 0.0)) ++violations;
                min_margin = std::min(min_margin, margin);
            }
        }
        rec.check(3, "lower bound positive on 20x20 grid (log-domain)", nonpositive == 0,
                  static_cast<double>(nonpositive), 0.0, 0.0);
        rec.check(3, "quadrature probability dominates bound on 20x20 grid", violations == 0, min_margin, 0.0, 0.0);

        const double spots[5][2] = {{0.5, 1.0}, {0.1, 1.0}, {0.9, 1.0}, {2.0, 10.0}, {50.0, 100.0}};
        for (const auto& s : spots) {
            const double t = s[0];
            const double T = s[1];
            const McEstimate mc = prob_honest_wins_mc(t, T, opt.prob_paths, opt.seed, opt.workers);
            const double quad = prob_honest_wins_quadrature(t, T);
            const double tol = 4.0 * mc.std_error;
            rec.check(3, "MC probability matches quadrature at t=" + format_double(t) + " T=" + format_double(T),
                      std::abs(mc.mean - quad) <= tol, mc.mean, quad, tol);
        }
    }

    if (wanted(4)) {
        for (double t : {1e-4, 1.0 - 1e-4}) {
            const BoundEvaluation b = lower_bound(t, 1.0);
            rec.check(4, "bound vanishes at t=" + format_double(t) + " T=1", b.bound < 1e-8, b.bound, 0.0, 1e-8);
        }
    }

    if (wanted(5)) {
        RngStream rng(opt.seed, kParamStream);
        std::size_t bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const CubicPoly p = cubic_coefficients(rng.uniform());
            if (!(p.A3 < 0.0 && p.A2 < 0.0 && p.A1 > 0.0 && p.A0 > 0.0)) ++bad;
        }
        rec.check(5, "cubic sign pattern (-,-,+,+) for 1000 random f", bad == 0, static_cast<double>(bad), 0.0, 0.0);

        for (int n : {2, 4, 8, 16}) {
            const double f = 1.0 / n;
            const CubicPoly p = cubic_coefficients(f);
            int changes = 0;
            constexpr int kScan = 100'000;
            double prev = p(1e-6);
            for (int i = 1; i <= kScan; ++i) {
                const double cur = p(1e-6 * std::pow(1e14, static_cast<double>(i) / kScan));
                if ((prev > 0.0) != (cur > 0.0)) ++changes;
                prev = cur;
            }
            rec.check(5, "one positive root of the cubic for f=1/" + std::to_string(n), changes == 1,
                      static_cast<double>(changes), 1.0, 0.0);

            const double t_star = optimal_horizon(f);
            constexpr int kSamples = 40'000;
            const double step = 400.0 / kSamples;
            std::vector<double> logs;
            for (int i = 1; i <= kSamples; ++i) logs.push_back(log_lower_bound_scaled(f, step * i));
            const double argmax = step * static_cast<double>(analyze_curve(logs).argmax + 1);
            rec.check(5, "grid argmax of scaled bound near T* for f=1/" + std::to_string(n),
                      std::abs(argmax - t_star) <= step, argmax, t_star, step);
        }
        const double t_star = optimal_horizon(0.5);
        const double rel = std::abs(t_star - kOptimalHorizonHalf) / kOptimalHorizonHalf;
        rec.check(5, "T* for f=1/2 matches bisection oracle", rel <= 1e-6, t_star, kOptimalHorizonHalf, 1e-6);
    }

    if (wanted(6)) {
        RngStream rng(opt.seed, kParamStream + 1);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double T = 0.1 + 99.9 * rng.uniform();
            const double t = T * rng.uniform();
            const double exact = T / (T - t);
            worst = std::max(worst, std::abs(*moment_ratio(1.0, t, T) - exact) / exact);
        }
        rec.check(6, "alpha=1 moment equals T/(T-t) on 1000 random (t,T)", worst <= 1e-12, worst, 0.0, 1e-12);

        for (double alpha : {0.25, 0.5, 1.0}) {
            const McEstimate mc = moment_ratio_mc(alpha, 0.5, 1.0, opt.moment_paths, opt.seed, opt.workers);
            const double exact = *moment_ratio(alpha, 0.5, 1.0);
            const double tol = 4.0 * mc.std_error;
            rec.check(6, "MC moment matches closed form for alpha=" + format_double(alpha),
                      std::abs(mc.mean - exact) <= tol, mc.mean, exact, tol);
        }
        for (double t : {0.24, 0.25, 0.26}) {
            const bool divergent = !moment_ratio(2.0, t, 1.0).has_value();
            const bool expected = t >= 0.25;
            rec.check(6, "alpha=2 divergence signalled iff t >= 1/4 at t=" + format_double(t), divergent == expected,
                      divergent ? 1.0 : 0.0, expected ? 1.0 : 0.0, 0.0);
        }
    }

    if (wanted(7)) {
        const std::vector<double> horizons{1.0, 10.0, 50.0, 100.0};
        constexpr std::size_t kSamples = 400;
        const auto fig1 = figure_bound_vs_t(horizons, kSamples);
        const std::size_t log_col = fig1.column_index("log_bound");
        const std::size_t norm_col = fig1.column_index("bound_normalized");
        for (std::size_t c = 0; c < horizons.size(); ++c) {
            std::vector<double> logs;
            for (std::size_t i = 0; i < kSamples; ++i) logs.push_back(std::get<double>(fig1.rows[c * kSamples + i][log_col]));
            const CurveShape shape = analyze_curve(logs);
            const double end_max = std::max(std::get<double>(fig1.rows[c * kSamples][norm_col]),
                                            std::get<double>(fig1.rows[c * kSamples + kSamples - 1][norm_col]));
            rec.check(7, "L_t vs t interior max with ends below 1e-3 of max for T=" + format_double(horizons[c]),
                      shape.interior && end_max < 1e-3, end_max, 0.0, 1e-3);
            rec.check(7, "L_t vs t strictly unimodal (local maxima) for T=" + format_double(horizons[c]),
                      shape.strictly_unimodal, static_cast<double>(shape.local_maxima), 1.0, 0.0);
        }

        const std::vector<int> ns{2, 4, 8, 16};
        constexpr std::size_t kTSamples = 4000;
        const double T_max = 400.0;
        const double step = T_max / kTSamples;
        for (int n : ns) {
            const double f = 1.0 / n;
            std::vector<double> logs;
            for (std::size_t i = 1; i <= kTSamples; ++i) logs.push_back(log_lower_bound_scaled(f, step * static_cast<double>(i)));
            const CurveShape shape = analyze_curve(logs);
            const double argmax = step * static_cast<double>(shape.argmax + 1);
            rec.check(7, "L_{T/n} vs T unimodal with interior max for n=" + std::to_string(n),
                      shape.strictly_unimodal && shape.interior && std::abs(argmax - optimal_horizon(f)) <= step,
                      argmax, optimal_horizon(f), step);
        }
    }
}

inline std::string serialize_rows(const ExperimentReport& rep) {
    std::ostringstream os;
    write_csv(os, rep);
    return os.str();
}

}  // namespace detail

inline ExperimentReport acceptance_suite(const AcceptanceOptions& opt = {}) {
    detail::Stopwatch clock;
    ExperimentReport rep;
    rep.name = "accept";
    rep.seed = opt.seed;
    rep.add_parameter("seed", std::to_string(opt.seed));
    rep.add_parameter("gap_paths", std::to_string(opt.gap_paths));
    rep.add_parameter("gap_steps", std::to_string(opt.gap_steps));
    rep.add_parameter("convergence_paths", std::to_string(opt.convergence_paths));
    rep.add_parameter("prob_paths", std::to_string(opt.prob_paths));
    rep.add_parameter("moment_paths", std::to_string(opt.moment_paths));
    rep.add_parameter("bound_scale", format_double(opt.bound_scale));
    rep.columns = {"criterion", "check", "passed", "measured", "reference", "tolerance"};

    detail::acceptance_rows(opt, rep);

    if (opt.only.empty() || opt.only.count(8) > 0) {
        // Re-run everything else with a different worker count and compare bytes.
        AcceptanceOptions other = opt;
        other.workers = opt.workers == 1 ? 3 : 1;
        ExperimentReport again = rep;
        again.rows.clear();
        detail::acceptance_rows(other, again);
        const bool same = detail::serialize_rows(rep) == detail::serialize_rows(again);
        detail::AcceptanceRecorder(rep).check(8, "byte-identical rows at a different worker count", same,
                                              same ? 1.0 : 0.0, 1.0, 0.0);
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

[[nodiscard]] inline bool all_passed(const ExperimentReport& acceptance) {
    const std::size_t col = acceptance.column_index("passed");
    return std::all_of(acceptance.rows.begin(), acceptance.rows.end(),
                       [&](const auto& row) { return std::get<bool>(row[col]); });
}

}  // namespace insider
