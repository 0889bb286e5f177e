#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsforecast/arima/estimate.hpp"
#include "tsforecast/arima/forecast.hpp"
#include "tsforecast/arima/search.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/neural/train.hpp"
#include "tsforecast/series.hpp"
#include "tsforecast/transforms.hpp"

namespace tsf::evaluation {

struct MetricReport {
    double rmse = 0.0;
    double mae = 0.0;
    /// Percent, over entries whose actual value is not ~0.
    double mape = 0.0;
    std::size_t n = 0;
    std::size_t skipped_zero_actuals = 0;
};

/// MAPE undefined because every actual is zero; rmse/mae are still available.
class MapeUndefinedError : public Error {
public:
    explicit MapeUndefinedError(MetricReport partial)
        : Error(ErrorCode::mape_undefined, "score: MAPE undefined, every actual value is zero"),
          partial_(partial) {}

    [[nodiscard]] const MetricReport& partial() const noexcept { return partial_; }

private:
    MetricReport partial_;
};

inline constexpr double kZeroActual = 1e-12;

inline MetricReport score(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) {
        throw Error(ErrorCode::structural, "score: " + std::to_string(actual.size()) + " actuals vs " +
                                               std::to_string(predicted.size()) + " predictions");
    }
    if (actual.empty()) throw Error(ErrorCode::structural, "score: empty inputs");
    MetricReport r;
    r.n = actual.size();
    double se = 0.0, ae = 0.0, pe = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i])) {
            throw Error(ErrorCode::invalid_value, "score: non-finite value at index " + std::to_string(i));
        }
        const double e = predicted[i] - actual[i];
        se += e * e;
        ae += std::abs(e);
        if (std::abs(actual[i]) > kZeroActual) {
            pe += std::abs(e / actual[i]);
            ++counted;
        } else {
            ++r.skipped_zero_actuals;
        }
    }
    const double n = static_cast<double>(r.n);
    r.rmse = std::sqrt(se / n);
    r.mae = ae / n;
    if (counted == 0) throw MapeUndefinedError(r);
    r.mape = 100.0 * pe / static_cast<double>(counted);
    return r;
}

struct ArimaSpec {
    arima::ArimaOrder order;
    bool with_intercept = true;
    arima::FitOptions options;
};

struct AutoArimaSpec {
    arima::SearchConfig config;
};

struct NeuralSpec {
    neural::RecurrentKind kind = neural::RecurrentKind::lstm;
    neural::TrainConfig config;
};

struct ModelSpec {
    std::string id;
    std::variant<ArimaSpec, AutoArimaSpec, NeuralSpec> model;
};

struct ModelResult {
    std::string id;
    /// "forecast" for ARIMA (H-step out-of-sample), "teacher_forced" for neural models.
    std::string prediction_mode;
    std::vector<double> predictions;
    std::optional<MetricReport> metrics;
    std::string failure;
    /// Declaration index, used as the final tie-break.
    std::size_t position = 0;
};

struct Comparison {
    std::size_t test_length = 0;
    Period test_start{};
    std::vector<double> actual;
    /// Surviving models, ascending RMSE, then MAE, then declaration order.
    std::vector<ModelResult> ranking;
    std::vector<ModelResult> failures;
};

namespace detail {

inline std::vector<double> predict_test(const ModelSpec& spec, const TimeSeries& full, const TimeSeries& train,
                                        std::size_t test_length, std::string& mode) {
    if (const auto* a = std::get_if<ArimaSpec>(&spec.model)) {
        mode = "forecast";
        const auto f = arima::fit(train, a->order, a->with_intercept, a->options);
        return arima::forecast(f, test_length).point;
    }
    if (const auto* a = std::get_if<AutoArimaSpec>(&spec.model)) {
        mode = "forecast";
        const auto [f, trace] = arima::stepwise_search(train, a->config);
        return arima::forecast(f, test_length).point;
    }
    const auto& n = std::get<NeuralSpec>(spec.model);
    mode = "teacher_forced";
    const auto trained = neural::train(train, n.config, n.kind);
    return neural::predict_series(trained, full.values(), test_length, neural::PredictMode::teacher_forced);
}

}  // namespace detail

/// Splits once, fits every model on the training span and scores it on the test span.
/// Failing models are reported separately; the comparison fails only if none survive.
inline Comparison compare(const TimeSeries& series, std::size_t test_length, const std::vector<ModelSpec>& specs) {
    if (specs.empty()) throw Error(ErrorCode::config, "compare: no model specifications");
    const auto [train, test] = split_train_test(series, test_length);
    Comparison out;
    out.test_length = test_length;
    out.test_start = test.start();
    out.actual = test.vector();

    for (std::size_t i = 0; i < specs.size(); ++i) {
        ModelResult r;
        r.id = specs[i].id;
        r.position = i;
        try {
            r.predictions = detail::predict_test(specs[i], series, train, test_length, r.prediction_mode);
            try {
                r.metrics = score(out.actual, r.predictions);
            } catch (const MapeUndefinedError& e) {
                r.metrics = e.partial();
            }
            out.ranking.push_back(std::move(r));
        } catch (const Error& e) {
            r.failure = std::string(to_string(e.code())) + ": " + e.what();
            out.failures.push_back(std::move(r));
        }
    }
    if (out.ranking.empty()) {
        throw Error(ErrorCode::comparison_failure, "compare: every model failed");
    }
    std::stable_sort(out.ranking.begin(), out.ranking.end(), [](const ModelResult& a, const ModelResult& b) {
        if (a.metrics->rmse != b.metrics->rmse) return a.metrics->rmse < b.metrics->rmse;
        if (a.metrics->mae != b.metrics->mae) return a.metrics->mae < b.metrics->mae;
        return a.position < b.position;
    });
    return out;
}

}  // namespace tsf::evaluation
