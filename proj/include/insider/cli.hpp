#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "insider/analysis.hpp"
#include "insider/experiments.hpp"
#include "insider/model.hpp"
#include "insider/report.hpp"

namespace insider::cli {

/// Invalid command line or configuration; the message is one actionable line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help was requested; `what()` holds the usage text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{
        "simulate", "prob", "bound", "bound-scaled", "optimal-horizon", "moment",
        "figure-bound-t", "figure-bound-T", "converge", "accept"};
    return names;
}

inline constexpr const char* kSeedEnv = "INSIDER_SEED";

struct RunConfig {
    std::string command;
    /// --T; a list only for figure-bound-t. Unset means the command default.
    std::optional<std::vector<double>> horizons;
    double t = 0.5;
    std::string r = "0.01";
    std::string mu = "0.05";
    std::string sigma = "0.2";
    double alpha = 1.0;
    double f = 0.5;
    /// --n; grid steps, or a list for converge and figure-bound-T.
    std::optional<std::vector<std::int64_t>> steps;
    std::optional<std::int64_t> paths;
    std::optional<std::int64_t> samples;
    std::uint64_t seed = 1;
    std::string out;
    OutputFormat format = OutputFormat::csv;
    unsigned workers = 1;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParsedArgs {
    RunConfig config;
    bool dump_config = false;
};

/// Constant ("0.05") or piecewise-linear ("0:0.2,0.5:0.25,1:0.3") coefficient.
inline Coefficient parse_coefficient(std::string_view spec, std::string_view name) {
    auto number = [&](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw ConfigError("--" + std::string(name) + ": cannot parse number '" + std::string(s) + "'");
        }
        return v;
    };
    if (spec.find(':') == std::string_view::npos) return Coefficient::constant(number(spec));
    std::vector<Knot> knots;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const std::string_view item = spec.substr(0, comma);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("--" + std::string(name) + ": expected time:value pairs, got '" + std::string(item) + "'");
        }
        knots.push_back({number(item.substr(0, colon)), number(item.substr(colon + 1))});
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    }
    try {
        return Coefficient::piecewise_linear(std::move(knots));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--" + std::string(name) + ": " + e.what());
    }
}

namespace detail {

inline double single_horizon(const RunConfig& c, double fallback = 1.0) {
    if (!c.horizons) return fallback;
    if (c.horizons->size() != 1) throw ConfigError("--T: command '" + c.command + "' takes a single horizon");
    return c.horizons->front();
}

inline std::int64_t single_steps(const RunConfig& c, std::int64_t fallback) {
    if (!c.steps) return fallback;
    if (c.steps->size() != 1) throw ConfigError("--n: command '" + c.command + "' takes a single grid size");
    return c.steps->front();
}

inline MarketModel build_model(const RunConfig& c) {
    const double T = single_horizon(c);
    try {
        return make_model(T, parse_coefficient(c.r, "r"), parse_coefficient(c.mu, "mu"),
                          parse_coefficient(c.sigma, "sigma"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("market model: ") + e.what());
    }
}

inline void require_viable_t(const RunConfig& c, double T) {
    if (!(c.t >= 0.0)) throw ConfigError("--t must be non-negative");
    if (!(c.t < T)) {
        throw ConfigError("--t must be < T: the insider market is not viable at t >= T");
    }
}

inline void require_inside_t(const RunConfig& c, double T) {
    if (!(c.t > 0.0 && c.t < T)) throw ConfigError("--t must lie strictly inside (0, T)");
}

inline void require_fraction(const RunConfig& c) {
    if (!(c.f > 0.0 && c.f < 1.0)) throw ConfigError("--f must lie strictly inside (0, 1)");
}

inline std::int64_t paths_or(const RunConfig& c, std::int64_t fallback) {
    const std::int64_t p = c.paths.value_or(fallback);
    if (p < 1) throw ConfigError("--paths must be at least 1");
    return p;
}

inline std::int64_t samples_or(const RunConfig& c, std::int64_t fallback) {
    const std::int64_t s = c.samples.value_or(fallback);
    if (s < 3) throw ConfigError("--samples must be at least 3");
    return s;
}

inline std::vector<std::size_t> converge_sizes(const RunConfig& c) {
    std::vector<std::size_t> sizes;
    for (std::int64_t n : c.steps.value_or(std::vector<std::int64_t>{64, 256, 1024})) {
        if (n < 1) throw ConfigError("--n: grid sizes must be positive");
        sizes.push_back(static_cast<std::size_t>(n));
    }
    return sizes;
}

inline std::vector<int> figure_ns(const RunConfig& c) {
    std::vector<int> ns;
    for (std::int64_t n : c.steps.value_or(std::vector<std::int64_t>{2, 4, 8, 16})) {
        if (n < 2) throw ConfigError("--n: figure-bound-T needs every n >= 2");
        ns.push_back(static_cast<int>(n));
    }
    return ns;
}

inline std::vector<double> figure_horizons(const RunConfig& c) {
    const auto hs = c.horizons.value_or(std::vector<double>{1.0, 10.0, 50.0, 100.0});
    for (double T : hs) {
        if (!(T > 0.0)) throw ConfigError("--T: every horizon must be positive");
    }
    return hs;
}

}  // namespace detail

/// Checks every precondition of the target operation; throws ConfigError.
inline void validate(const RunConfig& c) {
    using namespace detail;
    const std::string& cmd = c.command;
    if (c.horizons && c.horizons->empty()) throw ConfigError("--T needs a value");
    if (c.steps && c.steps->empty()) throw ConfigError("--n needs a value");

    if (cmd == "simulate") {
        const MarketModel model = build_model(c);
        require_viable_t(c, model.horizon());
        const std::int64_t n = single_steps(c, 1024);
        if (n < 1) throw ConfigError("--n must be at least 1");
        if (!TimeGrid(model.horizon(), static_cast<std::size_t>(n)).index_of(c.t)) {
            throw ConfigError("--t must be a node of the n-step grid on [0, T]");
        }
        paths_or(c, 100'000);
    } else if (cmd == "prob") {
        const double T = single_horizon(c);
        if (!(T > 0.0)) throw ConfigError("--T must be positive");
        require_inside_t(c, T);
        paths_or(c, 1'000'000);
    } else if (cmd == "bound") {
        const double T = single_horizon(c);
        if (!(T > 0.0)) throw ConfigError("--T must be positive");
        require_inside_t(c, T);
    } else if (cmd == "bound-scaled") {
        const double T = single_horizon(c);
        if (!(T > 0.0)) throw ConfigError("--T must be positive");
        require_fraction(c);
    } else if (cmd == "optimal-horizon") {
        require_fraction(c);
    } else if (cmd == "moment") {
        const double T = single_horizon(c);
        if (!(T > 0.0)) throw ConfigError("--T must be positive");
        if (!(c.alpha > 0.0)) throw ConfigError("--alpha must be positive");
        require_viable_t(c, T);
        paths_or(c, 1'000'000);
    } else if (cmd == "figure-bound-t") {
        figure_horizons(c);
        samples_or(c, 400);
    } else if (cmd == "figure-bound-T") {
        figure_ns(c);
        if (!(single_horizon(c, 400.0) > 0.0)) throw ConfigError("--T (range end) must be positive");
        samples_or(c, 4000);
    } else if (cmd == "converge") {
        const double T = single_horizon(c);
        if (!(T > 0.0)) throw ConfigError("--T must be positive");
        require_viable_t(c, T);
        const auto sizes = converge_sizes(c);
        for (std::size_t i = 1; i < sizes.size(); ++i) {
            if (!(sizes[i] > sizes[i - 1])) throw ConfigError("--n: grid sizes must be strictly increasing");
            if (sizes.back() % sizes[i - 1] != 0) throw ConfigError("--n: grid sizes must divide the largest size");
        }
        for (std::size_t n : sizes) {
            if (!TimeGrid(T, n).index_of(c.t)) throw ConfigError("--t must be a node of every grid in --n");
        }
        paths_or(c, 1'000);
    } else if (cmd == "accept") {
        // fixed budgets
    } else {
        throw ConfigError("unknown command '" + cmd + "'");
    }
}

/// Parses `args` (program name excluded). Precedence for every value:
/// flag > --config file > INSIDER_SEED (seed only) > built-in default.
inline ParsedArgs parse_args(std::vector<std::string> args) {
    ParsedArgs parsed;
    RunConfig& c = parsed.config;
    CLI::App app{"Honest versus insider trader: closed forms, bounds and Monte Carlo checks", "insider"};
    app.set_config("--config", "", "Read defaults from a key = value config file");

    std::vector<double> horizons;
    std::vector<std::int64_t> steps;
    std::int64_t paths = 0;
    std::int64_t samples = 0;
    std::string format = "csv";

    app.add_option("command", c.command, "Subcommand")->required()->check(CLI::IsMember(commands()));
    auto* opt_T = app.add_option("--T", horizons, "Horizon T (comma list for figure-bound-t; range end for figure-bound-T)")
                      ->delimiter(',');
    app.add_option("--t", c.t, "Evaluation time t");
    app.add_option("--r", c.r, "Risk-free rate: constant or time:value list");
    app.add_option("--mu", c.mu, "Stock drift: constant or time:value list");
    app.add_option("--sigma", c.sigma, "Volatility: constant or time:value list");
    app.add_option("--alpha", c.alpha, "Moment order alpha");
    app.add_option("--f", c.f, "Fraction f = t / T");
    auto* opt_n = app.add_option("--n", steps, "Grid steps (comma list for converge and figure-bound-T)")->delimiter(',');
    auto* opt_paths = app.add_option("--paths", paths, "Monte Carlo sample count");
    auto* opt_samples = app.add_option("--samples", samples, "Points per figure curve");
    app.add_option("--seed", c.seed, "Master seed")->envname(kSeedEnv);
    app.add_option("--out", c.out, "Output file (default: stdout)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", c.workers, "Monte Carlo worker threads (0 = all cores)");
    app.add_flag("--dump-config", parsed.dump_config, "Print the effective configuration and exit");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    if (opt_T->count() > 0) c.horizons = horizons;
    if (opt_n->count() > 0) c.steps = steps;
    if (opt_paths->count() > 0) c.paths = paths;
    if (opt_samples->count() > 0) c.samples = samples;
    c.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

    validate(c);
    return parsed;
}

/// Config text that parses back to an identical RunConfig via --config.
inline std::string dump_config(const RunConfig& c) {
    auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
    std::ostringstream os;
    os << "command = " << quoted(c.command) << '\n';
    if (c.horizons) {
        os << "T = [";
        for (std::size_t i = 0; i < c.horizons->size(); ++i) os << (i ? ", " : "") << format_double((*c.horizons)[i]);
        os << "]\n";
    }
    os << "t = " << format_double(c.t) << '\n';
    os << "r = " << quoted(c.r) << '\n';
    os << "mu = " << quoted(c.mu) << '\n';
    os << "sigma = " << quoted(c.sigma) << '\n';
    os << "alpha = " << format_double(c.alpha) << '\n';
    os << "f = " << format_double(c.f) << '\n';
    if (c.steps) {
        os << "n = [";
        for (std::size_t i = 0; i < c.steps->size(); ++i) os << (i ? ", " : "") << (*c.steps)[i];
        os << "]\n";
    }
    if (c.paths) os << "paths = " << *c.paths << '\n';
    if (c.samples) os << "samples = " << *c.samples << '\n';
    os << "seed = " << c.seed << '\n';
    if (!c.out.empty()) os << "out = " << quoted(c.out) << '\n';
    os << "format = " << quoted(c.format == OutputFormat::json ? "json" : "csv") << '\n';
    os << "workers = " << c.workers << '\n';
    return os.str();
}

/// Runs the configured operation and returns its report.
inline ExperimentReport execute(const RunConfig& c) {
    using namespace detail;
    validate(c);
    const std::string& cmd = c.command;
    ExperimentReport rep;

    auto header = [&](std::initializer_list<std::pair<const char*, std::string>> params) {
        rep.name = cmd;
        rep.seed = c.seed;
        for (const auto& [k, v] : params) rep.add_parameter(k, v);
    };

    if (cmd == "simulate") {
        const MarketModel model = build_model(c);
        rep = wealth_report(model, c.t, static_cast<std::size_t>(single_steps(c, 1024)),
                            static_cast<std::size_t>(paths_or(c, 100'000)), c.seed, c.workers);
        rep.add_parameter("r", c.r);
        rep.add_parameter("mu", c.mu);
        rep.add_parameter("sigma", c.sigma);
    } else if (cmd == "prob") {
        const double T = single_horizon(c);
        const auto paths = static_cast<std::size_t>(paths_or(c, 1'000'000));
        header({{"t", format_double(c.t)}, {"T", format_double(T)}, {"paths", std::to_string(paths)},
                {"seed", std::to_string(c.seed)}});
        const McEstimate mc = prob_honest_wins_mc(c.t, T, paths, c.seed, c.workers);
        const BoundEvaluation b = lower_bound(c.t, T);
        rep.columns = {"t", "T", "mc_estimate", "mc_stderr", "quadrature_value", "lower_bound", "log_lower_bound",
                       "mc_ge_bound"};
        rep.add_row({c.t, T, mc.mean, mc.std_error, prob_honest_wins_quadrature(c.t, T), b.bound, b.log_bound,
                     mc.mean >= b.bound});
    } else if (cmd == "bound") {
        const double T = single_horizon(c);
        header({{"t", format_double(c.t)}, {"T", format_double(T)}});
        const BoundEvaluation b = lower_bound(c.t, T);
        rep.columns = {"t", "T", "L", "a", "b", "c", "bound", "log_bound"};
        rep.add_row({b.t, b.horizon, b.L, b.a, b.b, b.c, b.bound, b.log_bound});
    } else if (cmd == "bound-scaled") {
        const double T = single_horizon(c);
        header({{"f", format_double(c.f)}, {"T", format_double(T)}});
        rep.columns = {"f", "T", "bound", "log_bound"};
        rep.add_row({c.f, T, lower_bound_scaled(c.f, T), log_lower_bound_scaled(c.f, T)});
    } else if (cmd == "optimal-horizon") {
        header({{"f", format_double(c.f)}});
        const CubicPoly p = cubic_coefficients(c.f);
        const double t_star = optimal_horizon(c.f);
        rep.columns = {"f", "T_star", "A3", "A2", "A1", "A0", "bound_at_T_star"};
        rep.add_row({c.f, t_star, p.A3, p.A2, p.A1, p.A0, lower_bound_scaled(c.f, t_star)});
    } else if (cmd == "moment") {
        const double T = single_horizon(c);
        const auto paths = static_cast<std::size_t>(paths_or(c, 1'000'000));
        header({{"alpha", format_double(c.alpha)}, {"t", format_double(c.t)}, {"T", format_double(T)},
                {"paths", std::to_string(paths)}, {"seed", std::to_string(c.seed)}});
        rep.columns = {"alpha", "t", "T", "divergent", "closed_form", "mc_estimate", "mc_stderr"};
        if (const auto m = moment_ratio(c.alpha, c.t, T)) {
            const McEstimate mc = moment_ratio_mc(c.alpha, c.t, T, paths, c.seed, c.workers);
            rep.add_row({c.alpha, c.t, T, false, *m, mc.mean, mc.std_error});
        } else {
            rep.add_row({c.alpha, c.t, T, true, std::string("inf"), std::string(""), std::string("")});
        }
    } else if (cmd == "figure-bound-t") {
        const auto hs = figure_horizons(c);
        rep = figure_bound_vs_t(hs, static_cast<std::size_t>(samples_or(c, 400)));
    } else if (cmd == "figure-bound-T") {
        const auto ns = figure_ns(c);
        rep = figure_bound_vs_T(ns, single_horizon(c, 400.0), static_cast<std::size_t>(samples_or(c, 4000)));
    } else if (cmd == "converge") {
        const auto sizes = converge_sizes(c);
        rep = convergence_study(c.t, single_horizon(c), sizes, static_cast<std::size_t>(paths_or(c, 1'000)), c.seed,
                                c.workers);
    } else if (cmd == "accept") {
        AcceptanceOptions opt;
        opt.seed = c.seed;
        opt.workers = c.workers;
        rep = acceptance_suite(opt);
    }
    return rep;
}

inline void write_report(std::ostream& os, const ExperimentReport& rep, OutputFormat format) {
    if (format == OutputFormat::json) {
        write_json(os, rep);
    } else {
        write_csv(os, rep);
    }
}

/// Executes `c` and writes the report to `c.out` (or `fallback` when empty).
/// Returns the process exit status: nonzero iff an acceptance item failed.
inline int run(const RunConfig& c, std::ostream& fallback) {
    const ExperimentReport rep = execute(c);
    if (c.out.empty()) {
        write_report(fallback, rep, c.format);
    } else {
        std::ofstream file(c.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file '" + c.out + "'");
        write_report(file, rep, c.format);
        if (!file.flush()) throw std::runtime_error("failed writing output file '" + c.out + "'");
    }
    std::cerr << rep.name << ": " << rep.rows.size() << " rows in " << rep.wall_seconds << " s\n";
    if (c.command == "accept" && !all_passed(rep)) return 1;
    return 0;
}

}  // namespace insider::cli
