#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsforecast/io.hpp"
#include "tsforecast/tsforecast.hpp"

namespace tsf::cli {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "TSFORECAST_CONFIG";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kNumericalError = 2;

using io::Json;

/// The eight orders compared in the reference AIC table.
inline const std::vector<arima::ArimaOrder>& reference_orders() {
    static const std::vector<arima::ArimaOrder> orders{{2, 0, 2}, {1, 0, 0}, {0, 0, 1}, {2, 0, 0},
                                                       {1, 0, 1}, {2, 0, 1}, {1, 0, 2}, {0, 0, 2}};
    return orders;
}

namespace detail {

/// Flag values; each one only overrides the config when given.
struct Flags {
    std::string data;
    std::string config;
    std::string output = "text";
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t test_length = 0;
    std::size_t horizon = 0;
    double level = 0.0;
    int d = 0;
    int p = 0;
    int q = 0;
    bool no_intercept = false;
    bool train_only = false;
    std::size_t lags = 0;
    std::size_t lb_lags = 0;
    int max_p = 0, max_q = 0, max_d = 0, max_steps = 0;
    std::string kind;
    std::size_t hidden = 0, epochs = 0, look_back = 0;
    double lr = 0.0, clip = 0.0;
    std::string optimizer;
    std::string weights;
    std::size_t forecast_steps = 0;
    std::vector<std::string> models;
    std::string plot_kind;
    std::string svg;
};

struct Context {
    const Flags& flags;
    const CLI::App& sub;
    io::RunConfig config;
    TimeSeries series;
    std::ostream& out;

    [[nodiscard]] bool given(const std::string& name) const {
        const auto* opt = sub.get_option_no_throw(name);
        return opt && opt->count() > 0;
    }
    [[nodiscard]] bool json() const { return flags.output == "json"; }
};

inline std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

inline io::RunConfig resolve_config(const Flags& f, const CLI::App& sub) {
    io::RunConfig c;
    std::string path = f.config;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnv); env && *env) path = env;
    }
    if (!path.empty()) c = io::load_config(path);
    auto has = [&](const char* name) {
        const auto* opt = sub.get_option_no_throw(name);
        return opt && opt->count() > 0;
    };
    if (has("--seed")) c.seed = f.seed;
    if (has("--test-length")) c.test_length = f.test_length;
    if (has("--horizon")) c.horizon = f.horizon;
    if (has("--level")) c.level = f.level;
    if (has("--out-dir")) c.output_dir = f.out_dir;
    if (has("--lags")) c.acf_lags = f.lags;
    if (has("--lb-lags")) c.ljung_box_lags = f.lb_lags;
    if (has("--max-p")) c.search.max_p = f.max_p;
    if (has("--max-q")) c.search.max_q = f.max_q;
    if (has("--max-d")) c.search.max_d = f.max_d;
    if (has("--max-steps")) c.search.max_steps = f.max_steps;
    if (has("--kind")) c.neural_kind = neural::parse_kind(f.kind);
    if (has("--hidden")) c.neural.hidden_size = f.hidden;
    if (has("--epochs")) c.neural.epochs = f.epochs;
    if (has("--look-back")) c.neural.look_back = f.look_back;
    if (has("--lr")) c.neural.learning_rate = f.lr;
    if (has("--clip")) c.neural.gradient_clip = f.clip;
    if (has("--optimizer")) c.neural.optimizer = neural::parse_optimizer(f.optimizer);
    c.search.kpss = c.kpss;
    c.validate();
    return c;
}

inline Json envelope(const Context& ctx, const std::string& command, Json result) {
    return Json{{"command", command},
                {"config", io::to_json(ctx.config)},
                {"data", Json{{"path", ctx.flags.data},
                              {"start", ctx.series.start().to_string()},
                              {"end", ctx.series.end().to_string()},
                              {"n", ctx.series.size()}}},
                {"result", std::move(result)}};
}

inline void emit_json(const Context& ctx, const std::string& command, Json result) {
    ctx.out << envelope(ctx, command, std::move(result)).dump(2) << '\n';
}

inline TimeSeries differenced(const TimeSeries& s, int d) {
    return d == 0 ? s : difference(s, d).first;
}

inline void text_test(std::ostream& o, const TestReport& r) {
    o << "  " << r.test << ": statistic " << fmt(r.statistic) << ", p-value " << r.p_value_display << ", lags "
      << r.lags_used << ", nobs " << r.nobs << '\n'
      << "    critical values:";
    for (const auto& [lvl, cv] : r.critical_values) o << ' ' << io::level_key(100 * lvl) << "%=" << fmt(cv, 3);
    o << "\n    null: " << r.null_hypothesis << " -> " << (r.reject_null ? "reject" : "fail to reject")
      << " at 5%\n";
}

inline void text_fit(std::ostream& o, const arima::ArimaFit& f) {
    o << "ARIMA" << f.order.to_string() << (f.with_intercept ? " with intercept" : " without intercept") << '\n';
    for (std::size_t i = 0; i < f.ar_coeffs.size(); ++i) o << "  ar" << i + 1 << " = " << fmt(f.ar_coeffs[i]) << '\n';
    for (std::size_t i = 0; i < f.ma_coeffs.size(); ++i) o << "  ma" << i + 1 << " = " << fmt(f.ma_coeffs[i]) << '\n';
    if (f.with_intercept) o << "  intercept = " << fmt(f.intercept) << '\n';
    o << "  sigma2 = " << fmt(f.sigma2) << "  loglik = " << fmt(f.log_likelihood, 3) << "  AIC = " << fmt(f.aic, 3)
      << "  BIC = " << fmt(f.bic, 3) << "  n = " << f.n_obs << '\n';
}

inline void text_forecast(std::ostream& o, const arima::Forecast& fc, const std::vector<double>& actual = {}) {
    o << "period    point      lower      upper" << (actual.empty() ? "" : "      actual") << '\n';
    for (std::size_t h = 0; h < fc.horizon; ++h) {
        o << fc.start.advanced(static_cast<long>(h)).to_string() << std::setw(10) << fmt(fc.point[h], 3)
          << std::setw(11) << fmt(fc.lower[h], 3) << std::setw(11) << fmt(fc.upper[h], 3);
        if (h < actual.size()) o << std::setw(12) << fmt(actual[h], 3);
        o << '\n';
    }
}

inline void text_metrics(std::ostream& o, const std::string& id, const evaluation::MetricReport& m) {
    o << "  " << std::left << std::setw(16) << id << std::right << " RMSE " << fmt(m.rmse) << "  MAE " << fmt(m.mae)
      << "  MAPE " << fmt(m.mape, 2) << "%";
    if (m.skipped_zero_actuals) o << " (" << m.skipped_zero_actuals << " zero actuals skipped)";
    o << '\n';
}

inline std::string output_path(const io::RunConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.output_dir);
    return (std::filesystem::path(c.output_dir) / name).string();
}

/// Fits the requested order, or searches when no order was given.
struct ModelChoice {
    arima::ArimaFit fit;
    std::optional<arima::SearchTrace> trace;
};

inline ModelChoice choose_model(const Context& ctx, const TimeSeries& s) {
    if (ctx.given("--p") || ctx.given("--q")) {
        const arima::ArimaOrder order{ctx.flags.p, ctx.given("--d") ? ctx.flags.d : 0, ctx.flags.q};
        return {arima::fit(s, order, !ctx.flags.no_intercept, ctx.config.search.fit), std::nullopt};
    }
    auto cfg = ctx.config.search;
    if (ctx.given("--d")) cfg.d = ctx.flags.d;
    auto [fit, trace] = arima::stepwise_search(s, cfg);
    return {std::move(fit), std::move(trace)};
}

inline TimeSeries fit_span(const Context& ctx) {
    return ctx.flags.train_only ? split_train_test(ctx.series, ctx.config.test_length).first : ctx.series;
}

// ---- commands -------------------------------------------------------------

inline void cmd_stationarity(const Context& ctx) {
    const int d = ctx.given("--d") ? ctx.flags.d : 0;
    if (d < 0) throw Error(ErrorCode::config, "--d must be non-negative");
    const auto s = differenced(ctx.series, d);
    const auto adf = adf_test(s.values(), ctx.config.adf);
    const auto kpss = kpss_test(s.values(), ctx.config.kpss);
    if (ctx.json()) {
        emit_json(ctx, "stationarity", Json{{"d", d}, {"adf", io::to_json(adf)}, {"kpss", io::to_json(kpss)}});
        return;
    }
    ctx.out << "Stationarity tests at d = " << d << " (" << s.size() << " observations)\n";
    text_test(ctx.out, adf);
    text_test(ctx.out, kpss);
}

inline void cmd_correlogram(const Context& ctx) {
    const int d = ctx.given("--d") ? ctx.flags.d : 0;
    const auto s = differenced(ctx.series, d);
    const auto a = acf(s.values(), ctx.config.acf_lags);
    const auto p = pacf(s.values(), ctx.config.acf_lags);
    if (ctx.json()) {
        emit_json(ctx, "correlogram", Json{{"d", d}, {"acf", io::to_json(a)}, {"pacf", io::to_json(p)}});
        return;
    }
    ctx.out << "Correlogram at d = " << d << ", band +/-" << fmt(a.confidence_band) << '\n'
            << "lag       acf      pacf\n";
    for (std::size_t k = 1; k < a.values.size(); ++k) {
        ctx.out << std::setw(3) << k << std::setw(10) << fmt(a.values[k]) << std::setw(10) << fmt(p.values[k])
                << (std::abs(a.values[k]) > a.confidence_band || std::abs(p.values[k]) > p.confidence_band ? "  *" : "")
                << '\n';
    }
}

inline void cmd_fit_arima(const Context& ctx) {
    if (!ctx.given("--p") || !ctx.given("--q")) throw Error(ErrorCode::config, "fit-arima requires --p and --q");
    const auto s = fit_span(ctx);
    const arima::ArimaOrder order{ctx.flags.p, ctx.given("--d") ? ctx.flags.d : 0, ctx.flags.q};
    const auto f = arima::fit(s, order, !ctx.flags.no_intercept, ctx.config.search.fit);
    const auto diag = arima::diagnose(f, ctx.config.ljung_box_lags);
    if (ctx.json()) {
        emit_json(ctx, "fit-arima", Json{{"fit", io::to_json(f)}, {"diagnostics", io::to_json(diag)}});
        return;
    }
    text_fit(ctx.out, f);
    ctx.out << "Residual diagnostics\n";
    text_test(ctx.out, diag.ljung_box);
}

inline void text_trace(std::ostream& o, const arima::SearchTrace& t) {
    o << "Stepwise search (" << t.evaluated.size() << " candidates" << (t.hit_step_limit ? ", step limit hit" : "")
      << ")\n";
    for (const auto& c : t.evaluated) {
        o << "  ARIMA" << c.order.to_string() << (c.with_intercept ? " +c " : "    ");
        if (c.aic) {
            o << " AIC " << fmt(*c.aic, 3) << '\n';
        } else {
            o << " failed: " << c.failure << '\n';
        }
    }
    o << "Best: ARIMA" << t.best.to_string() << (t.best_with_intercept ? " with intercept" : "") << '\n';
}

inline void cmd_auto_arima(const Context& ctx) {
    const auto s = fit_span(ctx);
    auto cfg = ctx.config.search;
    if (ctx.given("--d")) cfg.d = ctx.flags.d;
    try {
        const auto [f, trace] = arima::stepwise_search(s, cfg);
        const auto diag = arima::diagnose(f, ctx.config.ljung_box_lags);
        if (ctx.json()) {
            emit_json(ctx, "auto-arima",
                      Json{{"trace", io::to_json(trace)}, {"fit", io::to_json(f)}, {"diagnostics", io::to_json(diag)}});
            return;
        }
        text_trace(ctx.out, trace);
        text_fit(ctx.out, f);
        text_test(ctx.out, diag.ljung_box);
    } catch (const arima::SearchError& e) {
        if (!ctx.json()) text_trace(ctx.out, e.trace());
        throw;
    }
}

inline void cmd_forecast(const Context& ctx) {
    const auto s = fit_span(ctx);
    const auto choice = choose_model(ctx, s);
    const auto fc = arima::forecast(choice.fit, ctx.config.horizon, ctx.config.level);
    std::vector<double> actual;
    if (ctx.flags.train_only) {
        const auto test = split_train_test(ctx.series, ctx.config.test_length).second;
        for (std::size_t h = 0; h < std::min(fc.horizon, test.size()); ++h) actual.push_back(test[h]);
    }
    if (ctx.json()) {
        Json r{{"fit", io::to_json(choice.fit, false)}, {"forecast", io::to_json(fc)}};
        if (choice.trace) r["trace"] = io::to_json(*choice.trace);
        if (!actual.empty()) r["actual"] = actual;
        emit_json(ctx, "forecast", std::move(r));
        return;
    }
    text_fit(ctx.out, choice.fit);
    ctx.out << "Forecast, " << io::level_key(100 * fc.level) << "% intervals\n";
    text_forecast(ctx.out, fc, actual);
}

inline void cmd_train_nn(const Context& ctx) {
    const auto cfg = ctx.config.train_config();
    const auto [train, test] = split_train_test(ctx.series, ctx.config.test_length);
    const auto trained = neural::train(train, cfg, ctx.config.neural_kind);
    const std::string kind(neural::to_string(ctx.config.neural_kind));
    const std::string weights =
        ctx.flags.weights.empty() ? output_path(ctx.config, kind + "_weights.json") : ctx.flags.weights;
    io::save_model(weights, trained);

    const auto pred = neural::predict_series(trained, ctx.series.values(), test.size(),
                                             neural::PredictMode::teacher_forced);
    evaluation::MetricReport m;
    try {
        m = evaluation::score(test.values(), pred);
    } catch (const evaluation::MapeUndefinedError& e) {
        m = e.partial();
    }
    std::vector<double> ahead;
    if (ctx.flags.forecast_steps > 0) {
        ahead = neural::predict_series(trained, ctx.series.values(), ctx.flags.forecast_steps,
                                       neural::PredictMode::recursive);
    }
    if (ctx.json()) {
        Json r{{"kind", kind},
               {"weights_path", weights},
               {"parameter_count", trained.model.parameter_count()},
               {"scaler", Json{{"min", trained.scaler.min}, {"max", trained.scaler.max}}},
               {"train_report", io::to_json(trained.report)},
               {"test", Json{{"prediction_mode", "teacher_forced"},
                             {"start", test.start().to_string()},
                             {"actual", test.vector()},
                             {"predicted", pred},
                             {"metrics", io::to_json(m)}}}};
        if (!ahead.empty()) {
            r["forecast"] = Json{{"prediction_mode", "recursive"},
                                 {"start", ctx.series.end().advanced(1).to_string()},
                                 {"predicted", ahead}};
        }
        emit_json(ctx, "train-nn", std::move(r));
        return;
    }
    ctx.out << kind << " trained on " << train.size() << " observations (" << trained.model.parameter_count()
            << " parameters), final loss " << fmt(trained.report.final_loss, 6) << '\n'
            << "weights written to " << weights << '\n'
            << "Test span " << test.start().to_string() << ".." << test.end().to_string() << " (teacher forced)\n";
    text_metrics(ctx.out, kind, m);
    for (std::size_t i = 0; i < ahead.size(); ++i) {
        ctx.out << ctx.series.end().advanced(static_cast<long>(i + 1)).to_string() << "  " << fmt(ahead[i], 3) << '\n';
    }
}

/// Parses "auto-arima", "arima:p:d:q", "arima:p:d:q:nc", "rnn", "lstm".
inline evaluation::ModelSpec parse_model(const std::string& token, const io::RunConfig& c) {
    evaluation::ModelSpec spec;
    spec.id = token;
    if (token == "auto-arima") {
        spec.model = evaluation::AutoArimaSpec{c.search};
        return spec;
    }
    if (token.rfind("arima:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(token.substr(6));
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() == 3 || (parts.size() == 4 && parts[3] == "nc")) {
            try {
                evaluation::ArimaSpec a;
                a.order = {std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2])};
                a.with_intercept = parts.size() == 3;
                a.options = c.search.fit;
                spec.model = a;
                return spec;
            } catch (const std::exception&) {
            }
        }
        throw Error(ErrorCode::config, "model '" + token + "': expected arima:p:d:q[:nc]");
    }
    try {
        spec.model = evaluation::NeuralSpec{neural::parse_kind(token), c.train_config()};
    } catch (const Error&) {
        throw Error(ErrorCode::config, "unknown model '" + token + "'");
    }
    return spec;
}

inline std::vector<evaluation::ModelSpec> model_specs(const Context& ctx) {
    std::vector<std::string> tokens = ctx.flags.models;
    if (tokens.empty()) tokens = {"auto-arima", "rnn", "lstm"};
    std::vector<evaluation::ModelSpec> specs;
    for (const auto& t : tokens) specs.push_back(parse_model(t, ctx.config));
    return specs;
}

inline void text_comparison(std::ostream& o, const evaluation::Comparison& c) {
    o << "Test span from " << c.test_start.to_string() << " (" << c.test_length
      << " months); ARIMA models forecast, neural models teacher forced\n";
    for (const auto& r : c.ranking) text_metrics(o, r.id + " [" + r.prediction_mode + "]", *r.metrics);
    for (const auto& r : c.failures) o << "  " << r.id << " failed: " << r.failure << '\n';
}

inline void cmd_evaluate(const Context& ctx) {
    const auto cmp = evaluation::compare(ctx.series, ctx.config.test_length, model_specs(ctx));
    if (ctx.json()) {
        emit_json(ctx, "evaluate", Json{{"comparison", io::to_json(cmp)}});
        return;
    }
    text_comparison(ctx.out, cmp);
}

inline std::string plot_one(const Context& ctx, const std::string& kind, const std::string& path_override) {
    auto path_for = [&](const std::string& name) {
        return path_override.empty() ? output_path(ctx.config, name) : path_override;
    };
    if (kind == "series") {
        const auto p = path_for("series.svg");
        io::svg::write_file(p, io::svg::series_chart(ctx.series, "Monthly inflation rate"));
        return p;
    }
    if (kind == "differenced") {
        const int d = ctx.given("--d") ? std::max(ctx.flags.d, 1) : 1;
        const auto p = path_for("differenced.svg");
        io::svg::write_file(p, io::svg::series_chart(differenced(ctx.series, d),
                                                     "Inflation rate after differencing (d = " + std::to_string(d) + ")",
                                                     "Change in inflation rate"));
        return p;
    }
    if (kind == "correlogram") {
        const int d = ctx.given("--d") ? ctx.flags.d : 0;
        const auto s = differenced(ctx.series, d);
        const auto p = path_for("correlogram.svg");
        io::svg::write_file(p, io::svg::correlogram_chart(acf(s.values(), ctx.config.acf_lags),
                                                          "Autocorrelation (d = " + std::to_string(d) + ")", 1));
        return p;
    }
    if (kind == "forecast") {
        const auto s = fit_span(ctx);
        const auto choice = choose_model(ctx, s);
        const auto fc = arima::forecast(choice.fit, ctx.config.horizon, ctx.config.level);
        std::vector<double> actual;
        if (ctx.flags.train_only) {
            const auto test = split_train_test(ctx.series, ctx.config.test_length).second;
            for (std::size_t h = 0; h < std::min(fc.horizon, test.size()); ++h) actual.push_back(test[h]);
        }
        const auto p = path_for("forecast.svg");
        io::svg::write_file(p, io::svg::forecast_chart(s, fc, "ARIMA" + choice.fit.order.to_string() + " forecast",
                                                       actual));
        return p;
    }
    if (kind == "overlay") {
        const auto [train, test] = split_train_test(ctx.series, ctx.config.test_length);
        const auto trained = neural::train(train, ctx.config.train_config(), ctx.config.neural_kind);
        const auto pred = neural::predict_series(trained, ctx.series.values(), test.size(),
                                                 neural::PredictMode::teacher_forced);
        const std::string name(neural::to_string(ctx.config.neural_kind));
        const auto p = path_for("overlay_" + name + ".svg");
        io::svg::write_file(p, io::svg::overlay_chart(test.start(), test.vector(), name + " prediction", pred,
                                                      "Actual inflation and " + name + " predictions"));
        return p;
    }
    throw Error(ErrorCode::config, "unknown plot kind '" + kind + "' (series, differenced, correlogram, forecast, overlay)");
}

inline void cmd_plot(const Context& ctx) {
    const auto path = plot_one(ctx, ctx.flags.plot_kind, ctx.flags.svg);
    if (ctx.json()) {
        emit_json(ctx, "plot", Json{{"kind", ctx.flags.plot_kind}, {"file", path}});
        return;
    }
    ctx.out << "wrote " << path << '\n';
}

/// Stationarity at d = 0 and 1, correlograms, the reference AIC table, stepwise search,
/// residual diagnostics, forecasts and the neural comparison, with all figures.
inline void cmd_pipeline(const Context& ctx) {
    const auto& c = ctx.config;
    const auto [train, test] = split_train_test(ctx.series, c.test_length);
    Json r = Json::object();
    Json files = Json::array();
    auto write = [&](const std::string& name, const std::string& svg) {
        const auto p = output_path(c, name);
        io::svg::write_file(p, svg);
        files.push_back(p);
    };

    // Identification on the training span.
    Json stationarity = Json::array();
    for (int d : {0, 1}) {
        const auto s = differenced(train, d);
        stationarity.push_back(Json{{"d", d},
                                    {"adf", io::to_json(adf_test(s.values(), c.adf))},
                                    {"kpss", io::to_json(kpss_test(s.values(), c.kpss))}});
    }
    r["stationarity"] = stationarity;
    const auto diff1 = differenced(train, 1);
    r["correlogram"] = Json{{"d", 1},
                            {"acf", io::to_json(acf(diff1.values(), c.acf_lags))},
                            {"pacf", io::to_json(pacf(diff1.values(), c.acf_lags))}};
    write("series.svg", io::svg::series_chart(ctx.series, "Monthly inflation rate"));
    write("differenced.svg", io::svg::series_chart(diff1, "Inflation rate after first differencing",
                                                   "Change in inflation rate"));
    write("acf_differenced.svg", io::svg::correlogram_chart(acf(diff1.values(), c.acf_lags),
                                                            "Autocorrelation of the differenced series", 1));

    // Reference AIC table at d = 0.
    Json table = Json::array();
    for (const auto& order : reference_orders()) {
        Json row{{"order", Json{{"p", order.p}, {"d", order.d}, {"q", order.q}}}};
        try {
            const auto f = arima::fit(train, order, true, c.search.fit);
            row["aic"] = f.aic;
        } catch (const Error& e) {
            row["aic"] = nullptr;
            row["failure"] = std::string(to_string(e.code())) + ": " + e.what();
        }
        table.push_back(std::move(row));
    }
    r["aic_table"] = table;

    // Estimation, diagnostics, forecasting.
    auto search = c.search;
    if (ctx.given("--d")) search.d = ctx.flags.d;
    const auto [best, trace] = arima::stepwise_search(train, search);
    const auto diag = arima::diagnose(best, c.ljung_box_lags);
    const auto fc = arima::forecast(best, c.test_length + c.horizon, c.level);
    r["search"] = io::to_json(trace);
    r["fit"] = io::to_json(best);
    r["diagnostics"] = io::to_json(diag);
    r["forecast"] = io::to_json(fc);
    write("forecast.svg", io::svg::forecast_chart(train, fc, "ARIMA" + best.order.to_string() + " forecast",
                                                  test.vector()));
    write("residual_acf.svg", io::svg::correlogram_chart(diag.residual_acf, "Residual autocorrelation", 1));

    // Model comparison on the test span.
    std::vector<evaluation::ModelSpec> specs{parse_model("arima:" + std::to_string(best.order.p) + ":" +
                                                             std::to_string(best.order.d) + ":" +
                                                             std::to_string(best.order.q) +
                                                             (best.with_intercept ? "" : ":nc"),
                                                         c),
                                             parse_model("rnn", c), parse_model("lstm", c)};
    const auto cmp = evaluation::compare(ctx.series, c.test_length, specs);
    r["comparison"] = io::to_json(cmp);
    for (const auto& m : cmp.ranking) {
        if (m.prediction_mode != "teacher_forced") continue;
        write("overlay_" + m.id + ".svg",
              io::svg::overlay_chart(cmp.test_start, cmp.actual, m.id + " prediction", m.predictions,
                                     "Actual inflation and " + m.id + " predictions"));
    }
    r["files"] = files;

    if (ctx.json()) {
        emit_json(ctx, "run-paper-pipeline", std::move(r));
        return;
    }
    auto& o = ctx.out;
    o << "Training span " << train.start().to_string() << ".." << train.end().to_string() << ", test span "
      << test.start().to_string() << ".." << test.end().to_string() << "\n\n";
    for (int d : {0, 1}) {
        const auto s = differenced(train, d);
        o << "Stationarity at d = " << d << '\n';
        text_test(o, adf_test(s.values(), c.adf));
        text_test(o, kpss_test(s.values(), c.kpss));
    }
    o << "\nAIC of reference orders (d = 0)\n";
    for (const auto& row : table) {
        o << "  ARIMA(" << row["order"]["p"] << ',' << row["order"]["d"] << ',' << row["order"]["q"] << ")  "
          << (row["aic"].is_null() ? std::string("failed") : fmt(row["aic"].get<double>(), 3)) << '\n';
    }
    o << '\n';
    text_trace(o, trace);
    text_fit(o, best);
    text_test(o, diag.ljung_box);
    o << "\nForecast\n";
    text_forecast(o, fc, test.vector());
    o << "\nComparison\n";
    text_comparison(o, cmp);
    o << "\nFigures\n";
    for (const auto& f : files) o << "  " << f.get<std::string>() << '\n';
}

inline void add_common(CLI::App& sub, Flags& f) {
    sub.add_option("--data,-i", f.data, "CSV file with columns period,value")->required();
    sub.add_option("--config", f.config, std::string("JSON config file (default: $") + kConfigEnv + ")");
    sub.add_option("--output", f.output, "Report format")->check(CLI::IsMember({"json", "text"}));
    sub.add_option("--out-dir", f.out_dir, "Directory for written files");
    sub.add_option("--seed", f.seed, "RNG seed");
    sub.add_option("--test-length", f.test_length, "Held-out months at the end of the series");
}

inline void add_arima(CLI::App& sub, Flags& f, bool order_flags) {
    if (order_flags) {
        sub.add_option("--p", f.p, "AR order")->check(CLI::NonNegativeNumber);
        sub.add_option("--q", f.q, "MA order")->check(CLI::NonNegativeNumber);
        sub.add_flag("--no-intercept", f.no_intercept, "Fit without a mean term");
    }
    sub.add_option("--d", f.d, "Differencing order")->check(CLI::NonNegativeNumber);
    sub.add_flag("--train-only", f.train_only, "Fit on the span before the test period");
    sub.add_option("--lb-lags", f.lb_lags, "Ljung-Box lags");
}

inline void add_search(CLI::App& sub, Flags& f) {
    sub.add_option("--max-p", f.max_p)->check(CLI::NonNegativeNumber);
    sub.add_option("--max-q", f.max_q)->check(CLI::NonNegativeNumber);
    sub.add_option("--max-d", f.max_d)->check(CLI::NonNegativeNumber);
    sub.add_option("--max-steps", f.max_steps, "Maximum number of candidate fits")->check(CLI::PositiveNumber);
}

inline void add_forecast(CLI::App& sub, Flags& f) {
    sub.add_option("--horizon", f.horizon, "Forecast steps")->check(CLI::PositiveNumber);
    sub.add_option("--level", f.level, "Interval coverage");
}

inline void add_neural(CLI::App& sub, Flags& f) {
    sub.add_option("--kind", f.kind, "rnn or lstm");
    sub.add_option("--hidden", f.hidden)->check(CLI::PositiveNumber);
    sub.add_option("--epochs", f.epochs)->check(CLI::PositiveNumber);
    sub.add_option("--look-back", f.look_back)->check(CLI::PositiveNumber);
    sub.add_option("--lr", f.lr)->check(CLI::PositiveNumber);
    sub.add_option("--clip", f.clip)->check(CLI::PositiveNumber);
    sub.add_option("--optimizer", f.optimizer, "adam or sgd");
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    Flags f;
    CLI::App app{"Monthly inflation forecasting: unit-root tests, ARIMA and recurrent networks", "tsforecast"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::vector<std::pair<CLI::App*, std::function<void(const Context&)>>> commands;
    auto add = [&](const char* name, const char* help, std::function<void(const Context&)> fn) {
        auto* sub = app.add_subcommand(name, help);
        add_common(*sub, f);
        commands.emplace_back(sub, std::move(fn));
        return sub;
    };

    auto* st = add("stationarity", "ADF and KPSS tests at differencing order d", cmd_stationarity);
    st->add_option("--d", f.d, "Differencing order")->check(CLI::NonNegativeNumber);

    auto* co = add("correlogram", "ACF and PACF with the white-noise band", cmd_correlogram);
    co->add_option("--d", f.d, "Differencing order")->check(CLI::NonNegativeNumber);
    co->add_option("--lags", f.lags, "Maximum lag")->check(CLI::PositiveNumber);

    auto* fa = add("fit-arima", "Fit ARIMA(p,d,q) by exact maximum likelihood", cmd_fit_arima);
    add_arima(*fa, f, true);

    auto* aa = add("auto-arima", "Stepwise AIC search", cmd_auto_arima);
    add_arima(*aa, f, false);
    add_search(*aa, f);

    auto* fc = add("forecast", "Point forecasts with prediction intervals", cmd_forecast);
    add_arima(*fc, f, true);
    add_search(*fc, f);
    add_forecast(*fc, f);

    auto* nn = add("train-nn", "Train a recurrent network and save its weights", cmd_train_nn);
    add_neural(*nn, f);
    nn->add_option("--weights", f.weights, "Weight file path");
    nn->add_option("--forecast-steps", f.forecast_steps, "Recursive forecast steps past the end of the data");

    auto* ev = add("evaluate", "Compare models on the held-out span", cmd_evaluate);
    add_search(*ev, f);
    add_neural(*ev, f);
    ev->add_option("--model", f.models, "auto-arima, arima:p:d:q[:nc], rnn or lstm (repeatable)");

    auto* pl = add("plot", "Write an SVG chart", cmd_plot);
    pl->add_option("chart", f.plot_kind, "series, differenced, correlogram, forecast or overlay")->required();
    pl->add_option("--svg", f.svg, "Output file");
    pl->add_option("--lags", f.lags, "Correlogram lags")->check(CLI::PositiveNumber);
    add_arima(*pl, f, true);
    add_search(*pl, f);
    add_forecast(*pl, f);
    add_neural(*pl, f);

    auto* pp = add("run-paper-pipeline", "Full identification, estimation, forecasting and comparison run",
                   cmd_pipeline);
    add_search(*pp, f);
    add_forecast(*pp, f);
    add_neural(*pp, f);
    pp->add_option("--lags", f.lags, "Correlogram lags")->check(CLI::PositiveNumber);
    pp->add_option("--lb-lags", f.lb_lags, "Ljung-Box lags");
    pp->add_option("--d", f.d, "Fixed differencing order for the search (default: chosen by KPSS)")
        ->check(CLI::NonNegativeNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kDataError;
    }

    for (auto& [sub, fn] : commands) {
        if (!sub->parsed()) continue;
        try {
            const auto config = resolve_config(f, *sub);
            Context ctx{f, *sub, config, io::read_series(f.data), out};
            fn(ctx);
            return kOk;
        } catch (const Error& e) {
            err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
            if (f.output == "json") {
                Json body{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
                if (const auto* se = dynamic_cast<const arima::SearchError*>(&e)) body["trace"] = io::to_json(se->trace());
                out << Json{{"error", body}}.dump(2) << '\n';
            }
            return is_numerical(e.code()) ? kNumericalError : kDataError;
        } catch (const std::filesystem::filesystem_error& e) {
            err << "error [ingestion]: " << e.what() << '\n';
            return kDataError;
        }
    }
    return kDataError;
}

}  // namespace tsf::cli
