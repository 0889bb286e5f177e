#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/neural/model.hpp"
#include "tsforecast/neural/recurrent.hpp"
#include "tsforecast/series.hpp"
#include "tsforecast/transforms.hpp"

namespace tsf::neural {

struct TrainReport {
    /// Mean squared error on scaled targets per epoch, measured before each window's update.
    std::vector<double> loss_history;
    double final_loss = 0.0;
    std::size_t epochs_run = 0;
};

struct TrainedModel {
    RecurrentModel model;
    ScalerState scaler;
    TrainReport report;
    TrainConfig config;
};

/// Plain SGD or Adam with bias correction; moment buffers mirror the model layout.
class Optimizer {
public:
    Optimizer(const TrainConfig& cfg, const RecurrentModel& model)
        : cfg_(cfg), m_(zero_gradients(model)), v_(zero_gradients(model)) {}

    void step(RecurrentModel& model, const Gradients& g) {
        ++t_;
        auto& arrays = model.mutable_arrays();
        const double lr = cfg_.learning_rate;
        if (cfg_.optimizer == OptimizerKind::sgd) {
            for (std::size_t a = 0; a < arrays.size(); ++a)
                for (std::size_t i = 0; i < arrays[a].values.size(); ++i) arrays[a].values[i] -= lr * g[a].values[i];
            return;
        }
        const double b1 = cfg_.beta1, b2 = cfg_.beta2;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
        for (std::size_t a = 0; a < arrays.size(); ++a) {
            auto& w = arrays[a].values;
            auto& m = m_[a].values;
            auto& v = v_[a].values;
            const auto& gr = g[a].values;
            for (std::size_t i = 0; i < w.size(); ++i) {
                m[i] = b1 * m[i] + (1.0 - b1) * gr[i];
                v[i] = b2 * v[i] + (1.0 - b2) * gr[i] * gr[i];
                w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.epsilon);
            }
        }
    }

private:
    TrainConfig cfg_;
    Gradients m_;
    Gradients v_;
    long t_ = 0;
};

/// Root mean squared error of the model over a window set (targets on the model's scale).
inline double window_rmse(const RecurrentModel& model, const WindowSet& windows) {
    double s = 0.0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const double e = predict_one(model, windows.inputs[i]) - windows.targets[i];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(windows.size()));
}

/**
 * Fits a min-max scaler on `series`, builds look-back windows and trains with one
 * clipped gradient step per window, windows visited in chronological order.
 */
inline TrainedModel train(const TimeSeries& series, const TrainConfig& cfg, RecurrentKind kind) {
    cfg.validate();
    if (series.size() <= cfg.look_back + 1) {
        throw Error(ErrorCode::degenerate_input, "train: need more than " + std::to_string(cfg.look_back + 1) +
                                                     " observations, got " + std::to_string(series.size()));
    }
    TrainedModel out;
    out.config = cfg;
    out.scaler = fit_scaler(series);
    const auto scaled = apply_scaler(series.values(), out.scaler);
    const auto windows = make_windows(scaled, cfg.look_back);

    out.model = RecurrentModel::initialized(kind, cfg.hidden_size, cfg.seed);
    Optimizer opt(cfg, out.model);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double sum = 0.0;
        for (std::size_t w = 0; w < windows.size(); ++w) {
            const auto cache = forward(out.model, windows.inputs[w]);
            const double err = cache.prediction - windows.targets[w];
            sum += err * err;
            auto grads = backward(out.model, cache, windows.targets[w]);
            clip_global_norm(grads, cfg.gradient_clip);
            opt.step(out.model, grads);
        }
        const double loss = sum / static_cast<double>(windows.size());
        if (!std::isfinite(loss) || !out.model.all_finite()) {
            throw Error(ErrorCode::divergence, "train: loss became non-finite in epoch " + std::to_string(epoch + 1));
        }
        out.model.validate();
        out.report.loss_history.push_back(loss);
    }
    out.report.epochs_run = out.report.loss_history.size();
    out.report.final_loss = out.report.loss_history.back();
    return out;
}

enum class PredictMode { teacher_forced, recursive };

/**
 * Predictions on the original scale.
 *
 * teacher_forced: predicts the last `steps` observations of `history`, each from the
 * true preceding look_back values (requires history.size() >= look_back + steps).
 * recursive: predicts `steps` values past the end of `history`, feeding predictions back.
 */
inline std::vector<double> predict_series(const RecurrentModel& model, const ScalerState& scaler,
                                          std::span<const double> history, std::size_t look_back,
                                          std::size_t steps, PredictMode mode) {
    if (look_back == 0) throw Error(ErrorCode::bounds, "predict_series: look_back must be positive");
    if (history.size() < look_back) {
        throw Error(ErrorCode::bounds, "predict_series: history shorter than look_back " + std::to_string(look_back));
    }
    std::vector<double> out;
    if (steps == 0) return out;
    out.reserve(steps);
    if (mode == PredictMode::teacher_forced) {
        if (history.size() < look_back + steps) {
            throw Error(ErrorCode::bounds, "predict_series: teacher-forced prediction of " + std::to_string(steps) +
                                               " steps needs " + std::to_string(look_back + steps) +
                                               " observations of history");
        }
        const auto scaled = apply_scaler(history, scaler);
        const std::size_t first = history.size() - steps;
        for (std::size_t t = first; t < history.size(); ++t) {
            const std::span<const double> window(scaled.data() + t - look_back, look_back);
            out.push_back(scaler.invert(predict_one(model, window)));
        }
        return out;
    }
    std::vector<double> buf = apply_scaler(history.subspan(history.size() - look_back), scaler);
    for (std::size_t s = 0; s < steps; ++s) {
        const double next = predict_one(model, std::span<const double>(buf).subspan(buf.size() - look_back));
        buf.push_back(next);
        out.push_back(scaler.invert(next));
    }
    return out;
}

inline std::vector<double> predict_series(const TrainedModel& trained, std::span<const double> history,
                                          std::size_t steps, PredictMode mode) {
    return predict_series(trained.model, trained.scaler, history, trained.config.look_back, steps, mode);
}

}  // namespace tsf::neural
