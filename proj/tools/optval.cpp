#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "optval/asian_pricer.hpp"
#include "optval/gbm_analytic.hpp"
#include "optval/market_data.hpp"
#include "optval/mc_oracle.hpp"
#include "optval/report.hpp"

using namespace optval;

namespace {

// ============================================================================
// REPORT OUTPUT
// ============================================================================

using Value = std::variant<double, std::int64_t, std::string>;

struct Report {
    std::vector<std::pair<std::string, Value>> fields;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    void add(std::string key, Value v) { fields.emplace_back(std::move(key), std::move(v)); }
};

std::string text_of(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return fmt6(*d);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    return std::get<std::string>(v);
}

nlohmann::json json_of(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return round6(*d);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    return std::get<std::string>(v);
}

std::string render(const Report& r, const std::string& format) {
    std::ostringstream out;
    if (format == "json") {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : r.fields) j[k] = json_of(v);
        if (!r.columns.empty()) {
            auto rows = nlohmann::ordered_json::array();
            for (const auto& row : r.rows) {
                nlohmann::ordered_json o;
                for (std::size_t c = 0; c < r.columns.size(); ++c) o[r.columns[c]] = json_of(row[c]);
                rows.push_back(std::move(o));
            }
            j["rows"] = std::move(rows);
        }
        out << j.dump(2) << '\n';
        return out.str();
    }
    for (const auto& [k, v] : r.fields) out << k << ',' << text_of(v) << '\n';
    if (!r.columns.empty()) {
        if (!r.fields.empty()) out << '\n';
        for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
        out << '\n';
        for (const auto& row : r.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << text_of(row[c]);
            out << '\n';
        }
    }
    return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot write output file: " + out_path);
    f << text;
    if (!f) throw InputError("failed writing output file: " + out_path);
}

// ============================================================================
// ARGUMENT PARSING HELPERS
// ============================================================================

IndexRange parse_range(const std::string& text, const std::string& flag) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw std::invalid_argument(flag + ": expected a..b, got '" + text + "'");
    try {
        std::size_t used = 0;
        const auto a = std::stoll(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument("");
        const auto tail = text.substr(dots + 2);
        const auto b = std::stoll(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("");
        return {a, b};
    } catch (const std::exception&) {
        throw std::invalid_argument(flag + ": expected integers a..b, got '" + text + "'");
    }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto& f : split_fields(text, ',')) {
        double v = 0;
        if (!parse_double(f, v)) throw std::invalid_argument(flag + ": bad number '" + f + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(flag + ": empty list");
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<std::int64_t> out;
    for (double v : parse_number_list(text, flag)) {
        if (v != std::floor(v)) throw std::invalid_argument(flag + ": expected integers");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

/// "a:b:step" expands to a, a+step, ..., b; anything else is a comma list.
std::vector<double> parse_strikes(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_number_list(text, "--strikes");
    const auto parts = split_fields(text, ':');
    double a = 0, b = 0, step = 0;
    if (parts.size() != 3 || !parse_double(parts[0], a) || !parse_double(parts[1], b) || !parse_double(parts[2], step) ||
        !(step > 0) || b < a)
        throw std::invalid_argument("--strikes: expected a:b:step with step > 0 and a <= b");
    std::vector<double> out;
    const auto n = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9));
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
}

char parse_delimiter(const std::string& text) {
    if (text == "tab" || text == "\\t") return '\t';
    if (text.size() != 1) throw std::invalid_argument("--delimiter: expected a single character or 'tab'");
    return text[0];
}

template <class T>
T pick(const std::optional<T>& given, const std::optional<T>& preset, T fallback) {
    if (given) return *given;
    if (preset) return *preset;
    return fallback;
}

// ============================================================================
// SUBCOMMAND OPTIONS
// ============================================================================

struct Common {
    std::string out;
    std::string format = "csv";
};

struct DataOpts {
    std::string path;
    std::string price_column = "price";
    std::string index_column;
    std::string delimiter = ",";
    std::optional<std::size_t> skip_rows;

    PriceSeries load(std::optional<std::size_t> preset_skip = {}) const {
        if (path.empty()) throw std::invalid_argument("--data is required");
        const auto series = load_price_series(path, {index_column, price_column, parse_delimiter(delimiter)});
        return series.drop_front(pick(skip_rows, preset_skip, std::size_t{0}));
    }
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "Output file (default stdout)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_data(CLI::App* app, DataOpts& d) {
    app->add_option("--data", d.path, "Price file (delimiter-separated, header row)");
    app->add_option("--price-column", d.price_column, "Price column name");
    app->add_option("--index-column", d.index_column, "Day-index column name (default: row order)");
    app->add_option("--delimiter", d.delimiter, "Field delimiter, or 'tab'");
    app->add_option("--skip-rows", d.skip_rows, "Drop this many leading observations");
}

struct GbmOpts {
    std::optional<double> mu, sigma, rho, kappa, tau, t;
    std::optional<int> figure;

    void add(CLI::App* app) {
        app->add_option("--mu", mu, "Growth rate");
        app->add_option("--sigma", sigma, "Volatility");
        app->add_option("--rho", rho, "Risk-free rate");
        app->add_option("--kappa,--strike", kappa, "Exercise price");
        app->add_option("--tau", tau, "Expiry");
        app->add_option("--t", t, "Current time");
        app->add_option("--paper-figure", figure, "Preset for figures 1-5")->check(CLI::Range(1, 5));
    }

    /// Figures 1-5 share mu=0, sigma=0.5, rho=1, tau=2 and differ in kappa
    /// (and t for figure 5).
    std::pair<GbmParams, double> resolve() const {
        std::optional<double> pk, pt;
        std::optional<GbmParams> base;
        if (figure) {
            static constexpr double kappas[] = {0.1, 1.1, 1.0, 5.0, 1.1};
            pk = kappas[*figure - 1];
            pt = *figure == 5 ? 1.5 : 0.0;
            base = figure_params(*pk);
        }
        GbmParams p;
        p.mu = pick(mu, base ? std::optional(base->mu) : std::nullopt, 0.0);
        p.sigma = pick(sigma, base ? std::optional(base->sigma) : std::nullopt, 0.0);
        p.rho = pick(rho, base ? std::optional(base->rho) : std::nullopt, 0.0);
        p.kappa = pick(kappa, pk, 0.0);
        p.tau = pick(tau, base ? std::optional(base->tau) : std::nullopt, 0.0);
        p.validate();
        return {p, pick(t, pt, 0.0)};
    }
};

struct AsianOpts {
    DataOpts data;
    std::optional<double> strike, rate_daily, z0, discount_override;
    std::optional<std::int64_t> term_days;
    std::optional<std::size_t> window;
    std::optional<std::string> horizons, cell_range, start_range, sd_range;
    std::optional<int> figure;
    bool midpoint = false;

    void add(CLI::App* app) {
        add_data(app, data);
        app->add_option("--strike", strike, "Exercise price");
        app->add_option("--rate-daily", rate_daily, "Daily risk-free rate");
        app->add_option("--term-days", term_days, "Option term in days");
        app->add_option("--window", window, "Moving-window length");
        app->add_option("--horizons", horizons, "Averaging horizons, e.g. 20,40,60");
        app->add_option("--cell-range", cell_range, "Cell index range lo..hi (write --cell-range=-3..2)");
        app->add_option("--start-range", start_range, "Sample start indices a..b");
        app->add_option("--sd-range", sd_range, "Window starts averaged for s0, a..b");
        app->add_option("--z0", z0, "Current price (default: last price in the file)");
        app->add_option("--discount-override", discount_override, "Discount factor replacing e^{-rate*term}");
        app->add_flag("--midpoint-tags", midpoint, "Tag cells at their midpoints");
        app->add_option("--paper-figure", figure, "Preset for figure 9")->check(CLI::IsMember({9}));
    }
};

struct Pipeline {
    AsianConfig config;
    std::vector<CellEstimate> estimates;
    std::size_t rows = 0;
    std::size_t windows = 0;
};

/// Runs load -> stats -> s0 -> anchors -> estimate, tagging any failure with
/// the stage that raised it.
Pipeline run_pipeline(const AsianOpts& o) {
    const bool fig9 = o.figure.has_value();
    auto preset = [&](auto v) { return fig9 ? std::optional(v) : std::nullopt; };

    std::string stage = "load";
    try {
        const auto series = o.data.load(preset(std::size_t{6}));

        stage = "stats";
        const auto window = pick(o.window, preset(std::size_t{60}), std::size_t{60});
        const auto stats = moving_window_stats(series, window);

        stage = "config";
        Pipeline out;
        out.rows = series.size();
        out.windows = stats.size();
        auto& c = out.config;
        c.strike = pick(o.strike, preset(3.5), 0.0);
        c.rho_daily = pick(o.rate_daily, preset(0.0003), 0.0);
        c.term_days = pick(o.term_days, preset(std::int64_t{60}), std::int64_t{60});
        c.discount_factor_override = o.discount_override ? o.discount_override : preset(std::exp(-0.02));
        c.midpoint_tags = o.midpoint;
        const auto horizons =
            parse_int_list(pick(o.horizons, preset(std::string("20,40,60")), std::string("20,40,60")), "--horizons");
        const auto cells = parse_range(pick(o.cell_range, preset(std::string("-3..2")), std::string("-3..2")),
                                       "--cell-range");
        c.grid.horizons = horizons;
        c.grid.cells = {static_cast<int>(cells.first), static_cast<int>(cells.last)};
        if (!o.start_range && !fig9) throw std::invalid_argument("--start-range is required");
        c.start_range = parse_range(pick(o.start_range, preset(std::string("4550..5000")), std::string()),
                                    "--start-range");
        const auto sd_range = o.sd_range || fig9 ? parse_range(pick(o.sd_range, preset(std::string("5000..5160")),
                                                                    std::string()),
                                                               "--sd-range")
                                                 : stats.starts();

        stage = "s0";
        c.grid.cell_width_s0 = recent_sd_average(stats, sd_range);

        stage = "anchors";
        const double z0 = pick(o.z0, preset(3.7), series.prices().back());
        c.grid.anchors = risk_neutral_anchors(z0, c.rho_daily, horizons);
        c.validate();

        stage = "estimate";
        out.estimates = estimate_all_cells(series, stats, horizons, c.grid.cells, c.start_range);
        return out;
    } catch (const std::exception& e) {
        throw InputError("stage " + stage + ": " + e.what());
    }
}

void add_pipeline_fields(Report& r, const Pipeline& p) {
    r.add("rows", static_cast<std::int64_t>(p.rows));
    r.add("windows", static_cast<std::int64_t>(p.windows));
    r.add("s0", p.config.grid.cell_width_s0);
    r.add("samples", static_cast<std::int64_t>(p.config.start_range.size()));
    r.add("discount", p.config.discount());
}

// ============================================================================
// SUBCOMMANDS
// ============================================================================

Report cmd_fit(const DataOpts& d, const std::optional<std::string>& range) {
    const auto series = d.load();
    const auto r = range ? parse_range(*range, "--fit-range") : series.positions();
    const auto model = fit_exponential_trend(series, r);
    Report rep;
    rep.add("scale_a", model.scale_a);
    rep.add("mu", model.daily_rate_mu);
    rep.add("fit_first", r.first);
    rep.add("fit_last", r.last);
    rep.add("log_residual_ss", log_residual_ss(series, r, model));
    rep.columns = {"t", "price", "trend"};
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(series.size()); ++k) {
        rep.rows.push_back({k, series.at(k), model.predict(static_cast<double>(k))});
    }
    return rep;
}

std::string cmd_stats(const DataOpts& d, std::size_t window, bool centered, const std::string& format) {
    const auto series = d.load();
    const auto stats = moving_window_stats(series, window);
    if (!centered && format == "csv") {
        std::ostringstream out;
        write_window_stats(out, stats);
        return out.str();
    }
    Report rep;
    rep.columns = {centered ? "center_index" : "start_index", "mean", "sd"};
    for (auto k = stats.starts().first; k <= stats.starts().last; ++k) {
        rep.rows.push_back({centered ? window_center(k, window) : k, stats.mean_at(k), stats.sd_at(k)});
    }
    return render(rep, format);
}

Report cmd_exercise_curve(const GbmOpts& g, std::size_t samples, std::optional<double> grid_step) {
    const auto [p, t] = g.resolve();
    if (samples < 2) throw std::invalid_argument("--samples must be >= 2");
    const auto d = grid_step ? optimal_exercise_time(t, p, *grid_step) : optimal_exercise_time(t, p);
    Report rep;
    rep.add("t", t);
    rep.add("kappa", p.kappa);
    rep.add("varsigma", d.varsigma);
    rep.add("q_at_varsigma", d.q_at_varsigma);
    rep.add("boundary", std::string(to_string(d.boundary)));
    rep.add("analytic_varsigma", d.analytic_varsigma);
    rep.columns = {"s", "q"};
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = i + 1 == samples ? p.tau : t + (p.tau - t) * static_cast<double>(i) / (samples - 1.0);
        rep.rows.push_back({s, expected_discounted_payoff_from(t, s, p)});
    }
    return rep;
}

Report cmd_price_american(const GbmOpts& g, double z0) {
    const auto [p, t] = g.resolve();
    if (!(z0 > 0)) throw std::invalid_argument("--z0 must be > 0");
    const auto d = optimal_exercise_time(t, p);
    const double w = american_call_value(z0, t, d.varsigma, p);
    const auto floor = arbitrage_floor_check(w, p.kappa, z0);
    Report rep;
    rep.add("z0", z0);
    rep.add("t", t);
    rep.add("varsigma", d.varsigma);
    rep.add("boundary", std::string(to_string(d.boundary)));
    rep.add("value", w);
    rep.add("floor_ok", std::int64_t{floor.ok ? 1 : 0});
    rep.add("floor_violation", floor.violation);
    return rep;
}

std::string cmd_price_asian(const AsianOpts& o, bool cells, const std::string& format) {
    const auto pipe = run_pipeline(o);
    AsianQuote q;
    try {
        q = price_asian(pipe.config, pipe.estimates);
    } catch (const std::exception& e) {
        throw InputError(std::string("stage price: ") + e.what());
    }
    if (format == "csv") {
        std::ostringstream body;
        write_asian_report(body, pipe.config, q, cells);
        auto text = body.str();
        const auto eol = text.find('\n') + 1;
        text.insert(eol, "rows," + std::to_string(pipe.rows) + "\nwindows," + std::to_string(pipe.windows) + '\n');
        return text;
    }
    Report rep;
    rep.add("strike", pipe.config.strike);
    add_pipeline_fields(rep, pipe);
    rep.add("total_prob", q.total_prob);
    rep.add("w0", q.w0);
    if (cells) {
        const auto d = pipe.config.grid.horizons.size();
        for (std::size_t j = 0; j < d; ++j) rep.columns.push_back("p" + std::to_string(j + 1));
        for (std::size_t j = 0; j < d; ++j) rep.columns.push_back("tag" + std::to_string(j + 1));
        for (const char* c : {"payoff", "probability", "contribution"}) rep.columns.emplace_back(c);
        for (const auto& t : q.per_cell) {
            std::vector<Value> row;
            for (int p : t.tuple.indices) row.emplace_back(std::int64_t{p});
            for (double v : t.tag_values) row.emplace_back(v);
            row.insert(row.end(), {t.payoff, t.probability, t.contribution});
            rep.rows.push_back(std::move(row));
        }
    }
    return render(rep, format);
}

Report cmd_strike_sweep(const AsianOpts& o, const std::optional<std::string>& strikes) {
    const auto pipe = run_pipeline(o);
    const auto ks = parse_strikes(pick(strikes, o.figure ? std::optional<std::string>("3.0:3.8:0.05") : std::nullopt,
                                       std::string("")));
    const auto sweep = strike_sweep(pipe.config, pipe.estimates, ks);
    Report rep;
    add_pipeline_fields(rep, pipe);
    rep.add("total_prob", total_probability(pipe.estimates));
    rep.columns = {"strike", "w0"};
    for (const auto& s : sweep) rep.rows.push_back({s.strike, s.w0});
    return rep;
}

Report cmd_mc_validate(const GbmOpts& g, std::size_t paths, std::size_t steps, std::uint64_t seed) {
    const auto [p, t] = g.resolve();
    (void)t;
    const auto phys = simulate_gbm(1.0, p, steps, paths, seed);
    const auto rn = simulate_gbm(1.0, p, steps, paths, seed + 1, Measure::risk_neutral);
    Report rep;
    rep.add("paths", static_cast<std::int64_t>(paths));
    rep.add("steps", static_cast<std::int64_t>(steps));
    rep.add("seed", static_cast<std::int64_t>(seed));
    rep.columns = {"s", "q_closed", "q_mc", "q_se", "q_z", "disc_mean_rn", "disc_mean_se"};
    std::int64_t outside = 0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double s = k == steps ? p.tau : p.tau * static_cast<double>(k) / static_cast<double>(steps);
        const double exact = expected_discounted_payoff(s, p);
        const auto e = mc_expected_discounted_payoff(phys, p.kappa, p.rho, s);
        const auto m = mc_discounted_mean(rn, p.rho, s);
        const double z = e.std_error > 0 ? (e.value - exact) / e.std_error : 0.0;
        if (std::abs(z) > 3) ++outside;
        rep.rows.push_back({s, exact, e.value, e.std_error, z, m.value, m.std_error});
    }
    rep.add("beyond_3se", outside);
    return rep;
}

// ============================================================================
// MAIN
// ============================================================================

int run(int argc, char** argv) {
    CLI::App app{"Option valuation toolkit: trend fits, exercise times, Asian pricing"};
    app.require_subcommand(1);
    Common common;

    auto* fit = app.add_subcommand("fit", "Exponential trend fit of a price file");
    DataOpts fit_data;
    std::optional<std::string> fit_range;
    add_data(fit, fit_data);
    fit->add_option("--fit-range", fit_range, "Positions a..b used in the fit");
    add_common(fit, common);

    auto* stats = app.add_subcommand("stats", "Moving-window means and sample sds");
    DataOpts stats_data;
    std::size_t window = 60;
    bool centered = false;
    add_data(stats, stats_data);
    stats->add_option("--window", window, "Window length")->capture_default_str();
    stats->add_flag("--centered", centered, "Index rows by window centre instead of start");
    add_common(stats, common);

    auto* curve = app.add_subcommand("exercise-curve", "q_t(s) curve and optimal exercise time");
    GbmOpts curve_gbm;
    std::size_t samples = 201;
    std::optional<double> grid_step;
    curve_gbm.add(curve);
    curve->add_option("--samples", samples, "Curve points")->capture_default_str();
    curve->add_option("--grid-step", grid_step, "Argmax search step (default tau/2000)");
    add_common(curve, common);

    auto* american = app.add_subcommand("price-american", "Value at the optimal exercise time");
    GbmOpts am_gbm;
    double z0 = 1.0;
    am_gbm.add(american);
    american->add_option("--z0", z0, "Current price")->capture_default_str();
    add_common(american, common);

    auto* asian = app.add_subcommand("price-asian", "Empirical Riemann-sum Asian call value");
    AsianOpts asian_opts;
    bool with_cells = false;
    asian_opts.add(asian);
    asian->add_flag("--cells", with_cells, "Include the per-cell table");
    add_common(asian, common);

    auto* sweep = app.add_subcommand("strike-sweep", "Asian value over a range of strikes");
    AsianOpts sweep_opts;
    std::optional<std::string> strikes;
    sweep_opts.add(sweep);
    sweep->add_option("--strikes", strikes, "a:b:step or a comma list");
    add_common(sweep, common);

    auto* mc = app.add_subcommand("mc-validate", "Monte-Carlo check of the closed-form q(s)");
    GbmOpts mc_gbm;
    std::size_t paths = 100000, steps = 20;
    std::uint64_t seed = 1;
    mc_gbm.add(mc);
    mc->add_option("--paths", paths, "Number of paths")->capture_default_str();
    mc->add_option("--steps", steps, "Time steps")->capture_default_str();
    mc->add_option("--seed", seed, "RNG seed")->capture_default_str();
    add_common(mc, common);

    auto* fixture = app.add_subcommand("make-fixture", "Write a synthetic GBM price file");
    std::size_t length = 5219;
    double start_price = 0.1, drift = 0.0007, sigma = 0.015, end_price = 0.0;
    std::uint64_t fixture_seed = 1;
    fixture->add_option("--length", length, "Number of prices")->capture_default_str();
    fixture->add_option("--start-price", start_price, "Price at day 0")->capture_default_str();
    fixture->add_option("--drift", drift, "Daily log drift")->capture_default_str();
    fixture->add_option("--sigma", sigma, "Daily log volatility")->capture_default_str();
    fixture->add_option("--end-price", end_price, "Rescale so the last price equals this (0: off)");
    fixture->add_option("--seed", fixture_seed, "RNG seed")->capture_default_str();
    add_common(fixture, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string text;
    if (*fit) {
        text = render(cmd_fit(fit_data, fit_range), common.format);
    } else if (*stats) {
        text = cmd_stats(stats_data, window, centered, common.format);
    } else if (*curve) {
        text = render(cmd_exercise_curve(curve_gbm, samples, grid_step), common.format);
    } else if (*american) {
        text = render(cmd_price_american(am_gbm, z0), common.format);
    } else if (*asian) {
        text = cmd_price_asian(asian_opts, with_cells, common.format);
    } else if (*sweep) {
        text = render(cmd_strike_sweep(sweep_opts, strikes), common.format);
    } else if (*mc) {
        text = render(cmd_mc_validate(mc_gbm, paths, steps, seed), common.format);
    } else if (*fixture) {
        std::ostringstream out;
        write_price_series(out, synthetic_gbm_series(length, start_price, drift, sigma, fixture_seed, end_price));
        text = out.str();
    }
    emit(text, common.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
