#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "tsforecast/arima/polynomial.hpp"
#include "tsforecast/arima/state_space.hpp"
#include "tsforecast/arima/types.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/transforms.hpp"

namespace tsf::arima {

/// Two-sided standard normal quantile z_{(1+level)/2}.
inline double normal_quantile(double level) {
    return boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + level));
}

/**
 * H-step forecast on the original scale.
 *
 * Points come from iterating the Kalman prediction past the sample end and integrating
 * back through d differences. Interval half-widths use sigma2 * sum_{j<h} psi_j^2 with
 * psi-weights of phi(B)(1 - B)^d, so they account for the integration.
 */
inline Forecast forecast(const ArimaFit& fit, std::size_t horizon, double level = 0.95) {
    if (horizon == 0) throw Error(ErrorCode::bounds, "forecast: horizon must be positive");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::bounds, "forecast: level must be in (0, 1)");
    if (!fit.converged) throw Error(ErrorCode::convergence, "forecast: model did not converge");
    if (fit.history.empty()) throw Error(ErrorCode::structural, "forecast: fit carries no history");

    const int d = fit.order.d;
    auto [diffed, dstate] = difference(fit.history, d);
    const auto& w = diffed.vector();
    const double mu = fit.with_intercept ? fit.intercept : 0.0;

    const auto ss = make_state_space(fit.ar_coeffs, fit.ma_coeffs);
    const auto run = kalman_filter(w, mu, ss);
    if (!run.ok) throw Error(ErrorCode::convergence, "forecast: Kalman filter breakdown");

    std::vector<double> ahead(horizon);
    Eigen::VectorXd a = run.a_next;
    for (std::size_t h = 0; h < horizon; ++h) {
        ahead[h] = mu + a(0);
        a = ss.T * a;
    }

    Forecast out;
    out.horizon = horizon;
    out.level = level;
    out.start = fit.history.end().advanced(1);
    if (d == 0) {
        out.point = ahead;
    } else {
        std::vector<double> extended = w;
        extended.insert(extended.end(), ahead.begin(), ahead.end());
        const auto full = undifference(TimeSeries(std::move(extended), diffed.start()), dstate);
        out.point.assign(full.vector().end() - static_cast<std::ptrdiff_t>(horizon), full.vector().end());
    }

    const auto phi_star = integrate_ar(fit.ar_coeffs, d);
    const auto psi = psi_weights(phi_star, fit.ma_coeffs, horizon);
    const double z = normal_quantile(level);
    double cum = 0.0;
    out.lower.resize(horizon);
    out.upper.resize(horizon);
    out.std_error.resize(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        cum += psi[h] * psi[h];
        const double se = std::sqrt(fit.sigma2 * cum);
        out.std_error[h] = se;
        out.lower[h] = out.point[h] - z * se;
        out.upper[h] = out.point[h] + z * se;
    }
    return out;
}

}  // namespace tsf::arima
