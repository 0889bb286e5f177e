#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "tsforecast/diagnostics/correlation.hpp"
#include "tsforecast/diagnostics/report.hpp"
#include "tsforecast/error.hpp"

namespace tsf {

/**
 * Ljung-Box portmanteau test.
 *
 * Q = n(n+2) * sum_{k=1..h} r(k)^2 / (n-k), compared against a chi-square with
 * h - fitted_params degrees of freedom (upper tail). A residual vector with zero
 * variance has no autocorrelation to measure and yields Q = 0.
 */
inline TestReport ljung_box(std::span<const double> residuals, std::size_t lags,
                            std::size_t fitted_params = 0) {
    if (lags == 0) throw Error(ErrorCode::bounds, "ljung_box: lags must be positive");
    if (lags <= fitted_params) {
        throw Error(ErrorCode::invalid_dof, "ljung_box: lags (" + std::to_string(lags) +
                                                ") must exceed fitted parameters (" +
                                                std::to_string(fitted_params) + ")");
    }
    const std::size_t n = residuals.size();
    if (n <= lags) {
        throw Error(ErrorCode::degenerate_input, "ljung_box: need more than " + std::to_string(lags) +
                                                     " residuals, got " + std::to_string(n));
    }

    double q = 0.0;
    bool constant = true;
    for (std::size_t i = 1; i < n && constant; ++i) constant = residuals[i] == residuals[0];
    if (!constant) {
        const auto r = acf(residuals, lags);
        const double nn = static_cast<double>(n);
        for (std::size_t k = 1; k <= lags; ++k) {
            q += r.values[k] * r.values[k] / (nn - static_cast<double>(k));
        }
        q *= nn * (nn + 2.0);
    }

    const auto dof = static_cast<double>(lags - fitted_params);
    boost::math::chi_squared dist(dof);

    TestReport rep;
    rep.test = "ljung_box";
    rep.statistic = q;
    rep.p_value = q > 0.0 ? boost::math::cdf(boost::math::complement(dist, q)) : 1.0;
    rep.p_value_display = detail::format_p(rep.p_value);
    rep.tail = Tail::right;
    for (double level : {0.01, 0.05, 0.10}) {
        rep.critical_values[level] = boost::math::quantile(boost::math::complement(dist, level));
    }
    rep.reject_null = q > rep.critical_values.at(kDecisionLevel);
    rep.lags_used = lags;
    rep.nobs = n;
    rep.null_hypothesis = "no autocorrelation up to lag " + std::to_string(lags);
    return rep;
}

}  // namespace tsf
