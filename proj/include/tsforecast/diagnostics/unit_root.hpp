#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsforecast/diagnostics/report.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"

namespace tsf {

inline constexpr std::size_t kMinUnitRootLength = 20;

namespace detail {

/// Piecewise-linear map from statistic to p-value through (stat, p) knots sorted by stat.
/// Outside the knots the p-value is clamped to the end knot and flagged.
struct PValue {
    double value;
    bool clipped;
    std::string display;
};

template <std::size_t N>
PValue interpolate_p(double stat, const std::array<double, N>& stats, const std::array<double, N>& probs) {
    if (stat <= stats.front()) {
        const bool clipped = stat < stats.front();
        const char* rel = probs.front() < probs.back() ? "<= " : ">= ";
        return {probs.front(), clipped, clipped ? rel + format_p(probs.front()) : format_p(probs.front())};
    }
    if (stat >= stats.back()) {
        const bool clipped = stat > stats.back();
        const char* rel = probs.back() > probs.front() ? ">= " : "<= ";
        return {probs.back(), clipped, clipped ? rel + format_p(probs.back()) : format_p(probs.back())};
    }
    std::size_t i = 1;
    while (stats[i] < stat) ++i;
    const double w = (stat - stats[i - 1]) / (stats[i] - stats[i - 1]);
    const double p = probs[i - 1] + w * (probs[i] - probs[i - 1]);
    return {p, false, format_p(p)};
}

// MacKinnon (2010) response surface, constant-only Dickey-Fuller tau, one variable:
// cv(T) = b0 + b1/T + b2/T^2 + b3/T^3.
inline constexpr std::array<std::array<double, 4>, 3> kMacKinnonTauC = {{
    {-3.43035, -6.5393, -16.786, -79.433},  // 1%
    {-2.86154, -2.8903, -4.234, -40.040},   // 5%
    {-2.56677, -1.5384, -2.809, 0.0},       // 10%
}};

inline double mackinnon_cv(std::size_t level_idx, double nobs) {
    const auto& b = kMacKinnonTauC[level_idx];
    return b[0] + b[1] / nobs + b[2] / (nobs * nobs) + b[3] / (nobs * nobs * nobs);
}

// Fuller (1976) Table 8.5.2, tau_mu percentiles 0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99.
inline constexpr std::array<double, 6> kFullerSizes = {25, 50, 100, 250, 500,
                                                       std::numeric_limits<double>::infinity()};
inline constexpr std::array<std::array<double, 8>, 6> kFullerTauMu = {{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};
inline constexpr std::array<double, 8> kFullerProbs = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};

/// Fuller percentiles at sample size `nobs`, linear in 1/n between tabulated sizes.
inline std::array<double, 8> fuller_row(double nobs) {
    const double x = 1.0 / nobs;
    if (nobs <= kFullerSizes.front()) return kFullerTauMu.front();
    for (std::size_t i = 1; i < kFullerSizes.size(); ++i) {
        if (nobs <= kFullerSizes[i]) {
            const double x0 = 1.0 / kFullerSizes[i - 1];
            const double x1 = std::isinf(kFullerSizes[i]) ? 0.0 : 1.0 / kFullerSizes[i];
            const double w = (x - x0) / (x1 - x0);
            std::array<double, 8> row{};
            for (std::size_t j = 0; j < 8; ++j) {
                row[j] = kFullerTauMu[i - 1][j] + w * (kFullerTauMu[i][j] - kFullerTauMu[i - 1][j]);
            }
            return row;
        }
    }
    return kFullerTauMu.back();
}

struct OlsResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
    double ssr = 0.0;
    std::size_t nobs = 0;
};

inline OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) {
        throw Error(ErrorCode::rank_deficiency,
                    "regression design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                        " < " + std::to_string(X.cols()) + ")");
    }
    OlsResult r;
    r.beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * r.beta;
    r.ssr = resid.squaredNorm();
    r.nobs = static_cast<std::size_t>(X.rows());
    const double dof = static_cast<double>(X.rows() - X.cols());
    const double s2 = dof > 0 ? r.ssr / dof : std::numeric_limits<double>::quiet_NaN();
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    r.se = (s2 * xtx_inv.diagonal()).cwiseSqrt();
    return r;
}

/// Dickey-Fuller regression dy_t = a + g*y_{t-1} + sum_{i=1..k} b_i dy_{t-i}, rows t in [first, n).
inline OlsResult adf_regression(std::span<const double> y, std::size_t k, std::size_t first) {
    const std::size_t n = y.size();
    const auto rows = static_cast<Eigen::Index>(n - first);
    const auto cols = static_cast<Eigen::Index>(k + 2);
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd dy(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = first + static_cast<std::size_t>(r);
        dy(r) = y[t] - y[t - 1];
        X(r, 0) = 1.0;
        X(r, 1) = y[t - 1];
        for (std::size_t i = 1; i <= k; ++i) {
            X(r, static_cast<Eigen::Index>(i + 1)) = y[t - i] - y[t - i - 1];
        }
    }
    return ols(X, dy);
}

}  // namespace detail

struct AdfOptions {
    /// Upper bound of the lag search (or the exact lag when `select_by_aic` is false).
    /// Defaults to floor(12 * (n/100)^(1/4)).
    std::optional<std::size_t> max_lag;
    bool select_by_aic = true;
};

/// Schwert upper bound floor(12 * (n/100)^(1/4)), capped so the widest regression keeps residual dof.
inline std::size_t adf_default_max_lag(std::size_t n) {
    const auto schwert = static_cast<std::size_t>(std::floor(12.0 * std::pow(n / 100.0, 0.25)));
    const std::size_t cap = n > 8 ? (n - 8) / 2 : 0;
    return std::min(schwert, cap);
}

/**
 * Augmented Dickey-Fuller test with a constant and no trend.
 *
 * With AIC selection every lag 0..max_lag is fitted on the common sample that the
 * largest lag allows; the chosen lag is then re-estimated on its full sample.
 * Critical values follow MacKinnon's response surface at the regression sample size.
 * The p-value interpolates linearly through the 1/5/10% critical values and Fuller's
 * remaining percentiles, and is clipped to [0.01, 0.99].
 */
inline TestReport adf_test(std::span<const double> y, const AdfOptions& opts = {}) {
    const std::size_t n = y.size();
    if (n < kMinUnitRootLength) {
        throw Error(ErrorCode::degenerate_input, "adf_test: need at least " +
                                                     std::to_string(kMinUnitRootLength) +
                                                     " observations, got " + std::to_string(n));
    }
    const std::size_t max_lag = opts.max_lag.value_or(adf_default_max_lag(n));
    if (max_lag + 1 + max_lag + 3 > n) {
        throw Error(ErrorCode::bounds, "adf_test: max_lag " + std::to_string(max_lag) +
                                           " too large for " + std::to_string(n) + " observations");
    }

    std::size_t lag = max_lag;
    if (opts.select_by_aic) {
        double best_aic = std::numeric_limits<double>::infinity();
        const std::size_t first = max_lag + 1;
        for (std::size_t k = 0; k <= max_lag; ++k) {
            const auto fit = detail::adf_regression(y, k, first);
            const double m = static_cast<double>(fit.nobs);
            const double aic = m * std::log(fit.ssr / m) + 2.0 * static_cast<double>(k + 2);
            if (aic < best_aic - 1e-12) {
                best_aic = aic;
                lag = k;
            }
        }
    }

    const auto fit = detail::adf_regression(y, lag, lag + 1);
    if (!(fit.se(1) > 0.0) || !std::isfinite(fit.se(1))) {
        throw Error(ErrorCode::rank_deficiency, "adf_test: degenerate regression (zero residual variance)");
    }

    TestReport rep;
    rep.test = "adf";
    rep.statistic = fit.beta(1) / fit.se(1);
    rep.tail = Tail::left;
    rep.lags_used = lag;
    rep.nobs = fit.nobs;
    rep.null_hypothesis = "unit root";

    const double m = static_cast<double>(fit.nobs);
    const double cv1 = detail::mackinnon_cv(0, m);
    const double cv5 = detail::mackinnon_cv(1, m);
    const double cv10 = detail::mackinnon_cv(2, m);
    rep.critical_values = {{0.01, cv1}, {0.05, cv5}, {0.10, cv10}};

    auto knots = detail::fuller_row(m);
    knots[0] = cv1;
    knots[2] = cv5;
    knots[3] = cv10;
    const auto p = detail::interpolate_p(rep.statistic, knots, detail::kFullerProbs);
    rep.p_value = p.value;
    rep.p_value_clipped = p.clipped;
    rep.p_value_display = p.display;
    rep.reject_null = rep.statistic < cv5;
    return rep;
}

inline TestReport adf_test(const TimeSeries& s, const AdfOptions& opts = {}) { return adf_test(s.values(), opts); }

struct KpssOptions {
    /// Newey-West truncation lag; defaults to floor(4 * (n/100)^(1/4)).
    std::optional<std::size_t> bandwidth;
};

inline std::size_t kpss_default_bandwidth(std::size_t n) {
    return static_cast<std::size_t>(std::floor(4.0 * std::pow(n / 100.0, 0.25)));
}

/// Bartlett-weighted long-run variance of already-demeaned data.
inline double newey_west_variance(std::span<const double> e, std::size_t bandwidth) {
    const std::size_t n = e.size();
    double s2 = 0.0;
    for (double v : e) s2 += v * v;
    for (std::size_t j = 1; j <= bandwidth && j < n; ++j) {
        double g = 0.0;
        for (std::size_t t = j; t < n; ++t) g += e[t] * e[t - j];
        s2 += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(bandwidth + 1)) * g;
    }
    return s2 / static_cast<double>(n);
}

/// KPSS level-stationarity test. Right-tailed; p-values interpolate the tabulated critical
/// values and are reported as ">= 0.10" / "<= 0.01" beyond the table.
inline TestReport kpss_test(std::span<const double> y, const KpssOptions& opts = {}) {
    const std::size_t n = y.size();
    if (n < kMinUnitRootLength) {
        throw Error(ErrorCode::degenerate_input, "kpss_test: need at least " +
                                                     std::to_string(kMinUnitRootLength) +
                                                     " observations, got " + std::to_string(n));
    }
    const std::size_t bw = opts.bandwidth.value_or(kpss_default_bandwidth(n));
    if (bw >= n) {
        throw Error(ErrorCode::bounds, "kpss_test: bandwidth must be below the series length");
    }
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> e(n);
    for (std::size_t t = 0; t < n; ++t) e[t] = y[t] - mean;

    double partial = 0.0, eta = 0.0;
    for (double v : e) {
        partial += v;
        eta += partial * partial;
    }
    const double lrv = newey_west_variance(e, bw);
    if (!(lrv > 0.0)) {
        throw Error(ErrorCode::rank_deficiency, "kpss_test: zero long-run variance (constant series)");
    }
    const double nn = static_cast<double>(n);

    TestReport rep;
    rep.test = "kpss";
    rep.statistic = eta / (nn * nn * lrv);
    rep.tail = Tail::right;
    rep.lags_used = bw;
    rep.nobs = n;
    rep.null_hypothesis = "level stationarity";

    static constexpr std::array<double, 4> cvs = {0.347, 0.463, 0.574, 0.739};
    static constexpr std::array<double, 4> probs = {0.10, 0.05, 0.025, 0.01};
    rep.critical_values = {{0.10, cvs[0]}, {0.05, cvs[1]}, {0.025, cvs[2]}, {0.01, cvs[3]}};
    const auto p = detail::interpolate_p(rep.statistic, cvs, probs);
    rep.p_value = p.value;
    rep.p_value_clipped = p.clipped;
    rep.p_value_display = p.display;
    rep.reject_null = rep.statistic > cvs[1];
    return rep;
}

inline TestReport kpss_test(const TimeSeries& s, const KpssOptions& opts = {}) {
    return kpss_test(s.values(), opts);
}

}  // namespace tsf
