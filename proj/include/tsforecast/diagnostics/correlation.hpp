#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"

namespace tsf {

/// Correlations by lag 0..K with the +/-1.96/sqrt(n) significance band.
struct CorrelationSequence {
    std::vector<double> values;
    std::size_t n = 0;
    double confidence_band = 0.0;

    [[nodiscard]] std::size_t max_lag() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

namespace detail {

inline double band_for(std::size_t n) { return 1.96 / std::sqrt(static_cast<double>(n)); }

}  // namespace detail

/// Sample autocorrelation r(k) = sum_{t>k} (y_t - m)(y_{t-k} - m) / sum_t (y_t - m)^2.
inline CorrelationSequence acf(std::span<const double> y, std::size_t max_lag) {
    const std::size_t n = y.size();
    if (n == 0) throw Error(ErrorCode::degenerate_input, "acf: empty series");
    if (max_lag >= n) {
        throw Error(ErrorCode::bounds, "acf: max_lag " + std::to_string(max_lag) +
                                           " must be below series length " + std::to_string(n));
    }
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> dev(n);
    for (std::size_t t = 0; t < n; ++t) dev[t] = y[t] - mean;
    double denom = 0.0;
    for (double d : dev) denom += d * d;
    if (!(denom > 0.0)) throw Error(ErrorCode::degenerate_input, "acf: zero-variance series");

    CorrelationSequence out;
    out.n = n;
    out.confidence_band = detail::band_for(n);
    out.values.resize(max_lag + 1);
    out.values[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < n; ++t) num += dev[t] * dev[t - k];
        out.values[k] = num / denom;
    }
    return out;
}

inline CorrelationSequence acf(const TimeSeries& s, std::size_t max_lag) { return acf(s.values(), max_lag); }

/// Durbin-Levinson recursion over autocorrelations r[0..K]; returns the PACF with pacf[0] = 1.
inline std::vector<double> durbin_levinson(std::span<const double> r) {
    const std::size_t K = r.empty() ? 0 : r.size() - 1;
    std::vector<double> pacf(K + 1, 0.0);
    if (r.empty()) return pacf;
    pacf[0] = 1.0;
    if (K == 0) return pacf;

    std::vector<double> phi(K + 1, 0.0), prev(K + 1, 0.0);
    phi[1] = r[1];
    pacf[1] = r[1];
    double v = 1.0 - r[1] * r[1];
    for (std::size_t k = 2; k <= K; ++k) {
        prev = phi;
        double num = r[k];
        for (std::size_t j = 1; j < k; ++j) num -= prev[j] * r[k - j];
        const double a = v > 0.0 ? num / v : 0.0;
        phi[k] = a;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - a * prev[k - j];
        v *= (1.0 - a * a);
        pacf[k] = a;
    }
    return pacf;
}

inline CorrelationSequence pacf(std::span<const double> y, std::size_t max_lag) {
    if (y.empty()) throw Error(ErrorCode::degenerate_input, "pacf: empty series");
    if (2 * max_lag >= y.size()) {
        throw Error(ErrorCode::bounds, "pacf: max_lag " + std::to_string(max_lag) +
                                           " must be below n/2 = " + std::to_string(y.size() / 2.0));
    }
    CorrelationSequence r = acf(y, max_lag);
    r.values = durbin_levinson(r.values);
    return r;
}

inline CorrelationSequence pacf(const TimeSeries& s, std::size_t max_lag) { return pacf(s.values(), max_lag); }

}  // namespace tsf
