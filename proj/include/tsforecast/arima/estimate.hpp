#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsforecast/arima/polynomial.hpp"
#include "tsforecast/arima/state_space.hpp"
#include "tsforecast/arima/types.hpp"
#include "tsforecast/diagnostics/correlation.hpp"
#include "tsforecast/diagnostics/ljung_box.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/optim/nelder_mead.hpp"
#include "tsforecast/series.hpp"
#include "tsforecast/transforms.hpp"

namespace tsf::arima {

struct FitOptions {
    int max_iterations = 1000;
    double rel_tol = 1e-8;
    /// Root moduli must exceed 1 + root_margin.
    double root_margin = 1e-6;
};

namespace detail {

/// Unpacks [u_ar(p), u_ma(q), mu?] into constrained ARMA coefficients.
struct Packing {
    int p = 0;
    int q = 0;
    bool intercept = true;
    double fixed_mu = 0.0;  // used when the intercept is not estimated

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(p + q) + (intercept ? 1 : 0);
    }
    [[nodiscard]] std::vector<double> phi(const std::vector<double>& x) const {
        return unconstrained_to_ar(std::span<const double>(x).subspan(0, static_cast<std::size_t>(p)));
    }
    [[nodiscard]] std::vector<double> theta(const std::vector<double>& x) const {
        return unconstrained_to_ma(
            std::span<const double>(x).subspan(static_cast<std::size_t>(p), static_cast<std::size_t>(q)));
    }
    [[nodiscard]] double mu(const std::vector<double>& x) const { return intercept ? x.back() : fixed_mu; }
};

/// Conditional sum of squares, conditioning on the first p observations and zero pre-sample shocks.
inline double css(std::span<const double> z, std::span<const double> phi, std::span<const double> theta,
                  double mu) {
    const std::size_t n = z.size(), p = phi.size(), q = theta.size();
    std::vector<double> e(n, 0.0);
    double ssq = 0.0;
    for (std::size_t t = p; t < n; ++t) {
        double v = z[t] - mu;
        for (std::size_t i = 0; i < p; ++i) v -= phi[i] * (z[t - 1 - i] - mu);
        for (std::size_t j = 0; j < q && j + 1 + p <= t; ++j) v -= theta[j] * e[t - 1 - j];
        e[t] = v;
        ssq += v * v;
    }
    return ssq;
}

inline ArimaFit assemble(const TimeSeries& series, const std::vector<double>& w, ArimaOrder order, bool intercept,
                         const std::vector<double>& phi, const std::vector<double>& theta, double mu,
                         std::optional<double> sigma2_fixed) {
    const auto ss = make_state_space(phi, theta);
    const auto run = kalman_filter(w, mu, ss);
    if (!run.ok) {
        throw Error(ErrorCode::convergence, "ARIMA" + order.to_string() + ": Kalman filter breakdown at solution");
    }
    ArimaFit fit;
    fit.order = order;
    fit.with_intercept = intercept;
    fit.ar_coeffs = phi;
    fit.ma_coeffs = theta;
    fit.intercept = intercept ? mu : 0.0;
    fit.n_obs = w.size();
    const double n = static_cast<double>(w.size());
    if (sigma2_fixed) {
        fit.sigma2 = *sigma2_fixed;
        fit.log_likelihood =
            -0.5 * (n * std::log(2.0 * std::numbers::pi * fit.sigma2) + run.sum_log_F + run.sum_sq / fit.sigma2);
    } else {
        const auto cl = concentrated_log_likelihood(run, w.size());
        fit.sigma2 = cl.sigma2;
        fit.log_likelihood = cl.log_likelihood;
    }
    if (!(fit.sigma2 > 0.0) || !std::isfinite(fit.log_likelihood)) {
        throw Error(ErrorCode::convergence, "ARIMA" + order.to_string() + ": degenerate likelihood at solution");
    }
    const double k = static_cast<double>(fit.parameter_count());
    fit.aic = -2.0 * fit.log_likelihood + 2.0 * k;
    fit.bic = -2.0 * fit.log_likelihood + k * std::log(n);
    fit.residuals.resize(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) fit.residuals[t] = run.v[t] / std::sqrt(fit.sigma2 * run.F[t]);
    fit.history = series;
    return fit;
}

inline std::vector<double> differenced_values(const TimeSeries& series, int d) {
    return difference(series, d).first.vector();
}

}  // namespace detail

/**
 * Exact Gaussian maximum likelihood for ARIMA(p, d, q).
 *
 * The series is differenced d times and standardized; AR and MA coefficients are
 * optimized through the bounded partial-autocorrelation transform (so every
 * candidate is stationary and invertible) by Nelder-Mead, first on the conditional
 * sum of squares and then on the Kalman-filter likelihood with sigma2 concentrated out.
 */
inline ArimaFit fit(const TimeSeries& series, ArimaOrder order, bool with_intercept = true,
                    const FitOptions& opts = {}) {
    if (order.p < 0 || order.d < 0 || order.q < 0) {
        throw Error(ErrorCode::bounds, "fit: negative ARIMA order " + order.to_string());
    }
    const std::size_t needed = static_cast<std::size_t>(order.d + order.p + order.q + 10);
    if (series.size() < needed) {
        throw Error(ErrorCode::degenerate_input, "fit: ARIMA" + order.to_string() + " needs at least " +
                                                     std::to_string(needed) + " observations, got " +
                                                     std::to_string(series.size()));
    }
    const std::vector<double> w = detail::differenced_values(series, order.d);
    const double n = static_cast<double>(w.size());
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    const double scale = std::sqrt(var / n);
    if (!(scale > 0.0)) {
        throw Error(ErrorCode::degenerate_input, "fit: series is constant after differencing");
    }
    std::vector<double> z(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) z[t] = (w[t] - mean) / scale;

    detail::Packing pack{order.p, order.q, with_intercept, -mean / scale};
    std::vector<double> x0(pack.size(), 0.0);

    optim::NelderMeadOptions nm;
    nm.rel_tol = opts.rel_tol;
    nm.max_iterations = opts.max_iterations;

    auto css_objective = [&](const std::vector<double>& x) {
        return detail::css(z, pack.phi(x), pack.theta(x), pack.mu(x));
    };
    auto ml_objective = [&](const std::vector<double>& x) {
        const auto phi = pack.phi(x);
        const auto theta = pack.theta(x);
        return -concentrated_log_likelihood(z, phi, theta, pack.mu(x)).log_likelihood;
    };

    int iterations = 0;
    std::vector<double> start = x0;
    if (order.p + order.q > 0) {
        const auto warm = optim::nelder_mead(css_objective, x0, nm);
        if (std::isfinite(warm.value)) start = warm.x;
    }
    auto best = optim::nelder_mead(ml_objective, start, nm);
    iterations += best.iterations;
    const bool converged = best.converged;
    if (converged && pack.size() > 0 && iterations < opts.max_iterations) {
        // Restart from the solution with a fresh simplex to guard against early collapse.
        nm.max_iterations = opts.max_iterations - iterations;
        nm.initial_step = 0.05;
        const auto again = optim::nelder_mead(ml_objective, best.x, nm);
        iterations += again.iterations;
        if (again.value < best.value) best = again;
    }

    const auto phi = pack.phi(best.x);
    const auto theta = pack.theta(best.x);
    const double mu = with_intercept ? mean + scale * pack.mu(best.x) : 0.0;

    if (!std::isfinite(best.value)) {
        throw Error(ErrorCode::convergence, "fit: ARIMA" + order.to_string() + " likelihood is not finite");
    }
    ArimaFit result = detail::assemble(series, w, order, with_intercept, phi, theta, mu, std::nullopt);
    result.iterations = iterations;
    result.converged = converged;
    if (!converged) {
        throw ConvergenceError("fit: ARIMA" + order.to_string() + " did not converge within " +
                                   std::to_string(opts.max_iterations) + " iterations",
                               result);
    }
    if (min_ar_root_modulus(phi) <= 1.0 + opts.root_margin || min_ma_root_modulus(theta) <= 1.0 + opts.root_margin) {
        throw Error(ErrorCode::convergence,
                    "fit: ARIMA" + order.to_string() + " estimate lies on the stationarity/invertibility boundary");
    }
    return result;
}

/// Builds a fit record for known parameters (no estimation); the likelihood is evaluated at params.sigma2.
inline ArimaFit fixed_fit(const TimeSeries& series, ArimaOrder order, bool with_intercept, const ArmaParams& params) {
    if (params.phi.size() != static_cast<std::size_t>(order.p) ||
        params.theta.size() != static_cast<std::size_t>(order.q)) {
        throw Error(ErrorCode::structural, "fixed_fit: coefficient counts do not match order " + order.to_string());
    }
    if (!(params.sigma2 > 0.0)) throw Error(ErrorCode::invalid_value, "fixed_fit: sigma2 must be positive");
    if (series.size() <= static_cast<std::size_t>(order.d)) {
        throw Error(ErrorCode::degenerate_input, "fixed_fit: series too short for d = " + std::to_string(order.d));
    }
    const std::vector<double> w = detail::differenced_values(series, order.d);
    auto f = detail::assemble(series, w, order, with_intercept, params.phi, params.theta,
                              with_intercept ? params.mu : 0.0, params.sigma2);
    f.converged = true;
    return f;
}

struct ResidualDiagnostics {
    TestReport ljung_box;
    CorrelationSequence residual_acf;
};

/// Ljung-Box on the standardized residuals with p + q fitted parameters, plus the residual ACF.
inline ResidualDiagnostics diagnose(const ArimaFit& fit, std::size_t lags) {
    const auto fitted = static_cast<std::size_t>(fit.order.p + fit.order.q);
    ResidualDiagnostics out;
    out.ljung_box = tsf::ljung_box(fit.residuals, lags, fitted);
    out.residual_acf = acf(fit.residuals, std::min(lags, fit.residuals.size() - 1));
    return out;
}

}  // namespace tsf::arima
