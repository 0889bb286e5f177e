#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsforecast/arima/estimate.hpp"
#include "tsforecast/arima/search.hpp"
#include "tsforecast/arima/types.hpp"
#include "tsforecast/diagnostics/correlation.hpp"
#include "tsforecast/diagnostics/report.hpp"
#include "tsforecast/evaluation.hpp"
#include "tsforecast/neural/train.hpp"
#include "tsforecast/series.hpp"

// Report serialization. Field names follow the library types.
namespace tsf::io {

using Json = nlohmann::ordered_json;

inline std::string level_key(double level) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%g", level);
    return buf;
}

inline Json to_json(const Period& p) { return p.to_string(); }

inline Json series_summary(const TimeSeries& s) {
    return Json{{"start", s.start().to_string()}, {"end", s.end().to_string()}, {"n", s.size()}};
}

inline Json to_json(const TestReport& r) {
    Json cv = Json::object();
    for (const auto& [level, value] : r.critical_values) cv[level_key(level)] = value;
    return Json{{"test", r.test},
                {"statistic", r.statistic},
                {"p_value", r.p_value},
                {"p_value_clipped", r.p_value_clipped},
                {"p_value_display", r.p_value_display},
                {"critical_values", cv},
                {"reject_null", r.reject_null},
                {"lags_used", r.lags_used},
                {"nobs", r.nobs},
                {"tail", r.tail == Tail::left ? "left" : "right"},
                {"null_hypothesis", r.null_hypothesis}};
}

inline Json to_json(const CorrelationSequence& c) {
    return Json{{"values", c.values}, {"n", c.n}, {"confidence_band", c.confidence_band}};
}

namespace arima_json {

inline Json order(const arima::ArimaOrder& o) { return Json{{"p", o.p}, {"d", o.d}, {"q", o.q}}; }

}  // namespace arima_json

inline Json to_json(const arima::ArimaFit& f, bool include_residuals = true) {
    Json j{{"order", arima_json::order(f.order)},
           {"with_intercept", f.with_intercept},
           {"ar_coeffs", f.ar_coeffs},
           {"ma_coeffs", f.ma_coeffs},
           {"intercept", f.intercept},
           {"sigma2", f.sigma2},
           {"log_likelihood", f.log_likelihood},
           {"aic", f.aic},
           {"bic", f.bic}};
    j["residuals"] = include_residuals ? Json(f.residuals) : Json::array();
    j["n_obs"] = f.n_obs;
    j["convergence"] = Json{{"converged", f.converged}, {"iterations", f.iterations}};
    return j;
}

inline Json to_json(const arima::SearchTrace& t) {
    Json evaluated = Json::array();
    for (const auto& c : t.evaluated) {
        evaluated.push_back(Json{{"order", arima_json::order(c.order)},
                                 {"with_intercept", c.with_intercept},
                                 {"aic", c.aic ? Json(*c.aic) : Json(nullptr)},
                                 {"failure", c.failure.empty() ? Json(nullptr) : Json(c.failure)}});
    }
    Json steps = Json::array();
    for (const auto& s : t.step_log) {
        steps.push_back(Json{{"phase", s.phase},
                             {"order", arima_json::order(s.order)},
                             {"with_intercept", s.with_intercept},
                             {"aic", s.aic}});
    }
    Json dsel = Json::array();
    for (const auto& r : t.d_selection) dsel.push_back(to_json(r));
    return Json{{"evaluated", evaluated},
                {"best", arima_json::order(t.best)},
                {"best_with_intercept", t.best_with_intercept},
                {"step_log", steps},
                {"d_selection", dsel},
                {"hit_step_limit", t.hit_step_limit}};
}

inline Json to_json(const arima::Forecast& f) {
    Json periods = Json::array();
    for (std::size_t h = 0; h < f.horizon; ++h) periods.push_back(f.start.advanced(static_cast<long>(h)).to_string());
    return Json{{"horizon", f.horizon}, {"level", f.level},     {"periods", periods},        {"point", f.point},
                {"lower", f.lower},     {"upper", f.upper},     {"std_error", f.std_error}};
}

inline Json to_json(const arima::ResidualDiagnostics& d) {
    return Json{{"ljung_box", to_json(d.ljung_box)}, {"residual_acf", to_json(d.residual_acf)}};
}

inline Json to_json(const evaluation::MetricReport& m) {
    return Json{{"rmse", m.rmse}, {"mae", m.mae}, {"mape", m.mape}, {"n", m.n},
                {"skipped_zero_actuals", m.skipped_zero_actuals}};
}

inline Json to_json(const evaluation::Comparison& c) {
    auto entry = [](const evaluation::ModelResult& r) {
        Json j{{"id", r.id}, {"prediction_mode", r.prediction_mode}};
        if (r.metrics) j["metrics"] = to_json(*r.metrics);
        j["predictions"] = r.predictions;
        if (!r.failure.empty()) j["failure"] = r.failure;
        return j;
    };
    Json ranking = Json::array(), failures = Json::array();
    for (const auto& r : c.ranking) ranking.push_back(entry(r));
    for (const auto& r : c.failures) failures.push_back(entry(r));
    return Json{{"test_length", c.test_length},
                {"test_start", c.test_start.to_string()},
                {"actual", c.actual},
                {"ranking", ranking},
                {"failures", failures}};
}

inline Json to_json(const neural::TrainConfig& c) {
    return Json{{"look_back", c.look_back},
                {"hidden_size", c.hidden_size},
                {"epochs", c.epochs},
                {"learning_rate", c.learning_rate},
                {"batch_mode", std::string(neural::TrainConfig::batch_mode)},
                {"seed", c.seed},
                {"gradient_clip", c.gradient_clip},
                {"optimizer", std::string(neural::to_string(c.optimizer))},
                {"beta1", c.beta1},
                {"beta2", c.beta2},
                {"epsilon", c.epsilon}};
}

inline neural::TrainConfig train_config_from_json(const Json& j, neural::TrainConfig c = {}) {
    c.look_back = j.value("look_back", c.look_back);
    c.hidden_size = j.value("hidden_size", c.hidden_size);
    c.epochs = j.value("epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.seed = j.value("seed", c.seed);
    c.gradient_clip = j.value("gradient_clip", c.gradient_clip);
    if (j.contains("optimizer")) c.optimizer = neural::parse_optimizer(j.at("optimizer").get<std::string>());
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.epsilon = j.value("epsilon", c.epsilon);
    return c;
}

inline Json to_json(const neural::TrainReport& r) {
    return Json{{"loss_history", r.loss_history}, {"final_loss", r.final_loss}, {"epochs_run", r.epochs_run}};
}

}  // namespace tsf::io
