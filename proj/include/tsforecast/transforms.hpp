#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"

namespace tsf {

/// Seeds consumed by `difference`, one per pass, needed to undo it.
struct DifferenceState {
    int order = 0;
    std::vector<double> seeds;
};

/// Applies `d` passes of y[t] - y[t-1]. The first element of each pass is kept as a seed.
inline std::pair<TimeSeries, DifferenceState> difference(const TimeSeries& series, int d) {
    if (d < 0) {
        throw Error(ErrorCode::bounds, "difference: order must be non-negative");
    }
    if (series.size() <= static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::degenerate_input,
                    "difference: need at least " + std::to_string(d + 1) +
                        " observations for order " + std::to_string(d) + ", got " +
                        std::to_string(series.size()));
    }
    DifferenceState state{d, {}};
    std::vector<double> v = series.vector();
    for (int pass = 0; pass < d; ++pass) {
        state.seeds.push_back(v.front());
        for (std::size_t t = v.size() - 1; t > 0; --t) v[t] -= v[t - 1];
        v.erase(v.begin());
    }
    return {TimeSeries(std::move(v), series.start().advanced(d)), std::move(state)};
}

inline TimeSeries undifference(const TimeSeries& series, const DifferenceState& state) {
    if (state.order < 0 || state.seeds.size() != static_cast<std::size_t>(state.order)) {
        throw Error(ErrorCode::state_corruption,
                    "undifference: expected " + std::to_string(state.order) + " seeds, got " +
                        std::to_string(state.seeds.size()));
    }
    std::vector<double> v = series.vector();
    for (int pass = state.order - 1; pass >= 0; --pass) {
        std::vector<double> out;
        out.reserve(v.size() + 1);
        out.push_back(state.seeds[static_cast<std::size_t>(pass)]);
        for (double dv : v) out.push_back(out.back() + dv);
        v = std::move(out);
    }
    return TimeSeries(std::move(v), series.start().advanced(-state.order));
}

/// Min-max scaling to [0, 1].
struct ScalerState {
    double min = 0.0;
    double max = 1.0;

    [[nodiscard]] double range() const noexcept { return max - min; }
    [[nodiscard]] double apply(double x) const noexcept { return (x - min) / (max - min); }
    [[nodiscard]] double invert(double s) const noexcept { return s * (max - min) + min; }
};

inline ScalerState fit_scaler(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::degenerate_input, "fit_scaler: empty series");
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(*hi > *lo)) {
        throw Error(ErrorCode::zero_range, "fit_scaler: constant series has zero range");
    }
    return ScalerState{*lo, *hi};
}

inline ScalerState fit_scaler(const TimeSeries& series) { return fit_scaler(series.values()); }

inline std::vector<double> apply_scaler(std::span<const double> values, const ScalerState& s) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double x) { return s.apply(x); });
    return out;
}

inline std::vector<double> invert_scaler(std::span<const double> values, const ScalerState& s) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double x) { return s.invert(x); });
    return out;
}

/// Sliding look-back windows: inputs[i] = source[i, i+L), targets[i] = source[i+L].
struct WindowSet {
    std::size_t look_back = 0;
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;

    [[nodiscard]] std::size_t size() const noexcept { return targets.size(); }
};

inline WindowSet make_windows(std::span<const double> source, std::size_t look_back) {
    if (look_back == 0) {
        throw Error(ErrorCode::bounds, "make_windows: look_back must be positive");
    }
    if (source.size() <= look_back) {
        throw Error(ErrorCode::degenerate_input,
                    "make_windows: need more than " + std::to_string(look_back) +
                        " observations, got " + std::to_string(source.size()));
    }
    WindowSet w;
    w.look_back = look_back;
    const std::size_t count = source.size() - look_back;
    w.inputs.reserve(count);
    w.targets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        w.inputs.emplace_back(source.begin() + static_cast<std::ptrdiff_t>(i),
                              source.begin() + static_cast<std::ptrdiff_t>(i + look_back));
        w.targets.push_back(source[i + look_back]);
    }
    return w;
}

inline WindowSet make_windows(const TimeSeries& series, std::size_t look_back) {
    return make_windows(series.values(), look_back);
}

/// Chronological split; the last `test_length` points form the test span.
inline std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& series,
                                                          std::size_t test_length) {
    if (test_length == 0 || test_length >= series.size()) {
        throw Error(ErrorCode::bounds, "split_train_test: test_length " +
                                           std::to_string(test_length) + " outside 1.." +
                                           std::to_string(series.size() > 0 ? series.size() - 1 : 0));
    }
    const auto cut = static_cast<std::ptrdiff_t>(series.size() - test_length);
    const auto& v = series.vector();
    return {TimeSeries({v.begin(), v.begin() + cut}, series.start()),
            TimeSeries({v.begin() + cut, v.end()}, series.start().advanced(cut))};
}

}  // namespace tsf
