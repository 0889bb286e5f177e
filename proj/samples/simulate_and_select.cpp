// Simulates an ARMA(1,1) process, recovers its parameters and runs the residual checks.

#include <cstdio>

#include "tsforecast/tsforecast.hpp"

int main() {
    tsf::Rng rng(2024);
    const std::vector<double> phi{0.6}, theta{0.3};
    const tsf::TimeSeries y(tsf::simulate_arma(phi, theta, 5.0, 1.0, 500, rng), {1990, 1});

    const auto fit = tsf::arima::fit(y, {1, 0, 1});
    std::printf("phi %.3f  theta %.3f  mu %.3f  sigma2 %.3f  loglik %.2f\n", fit.ar_coeffs[0], fit.ma_coeffs[0],
                fit.intercept, fit.sigma2, fit.log_likelihood);

    const auto diag = tsf::arima::diagnose(fit, 12);
    std::printf("Ljung-Box Q(12) = %.2f, p = %s\n", diag.ljung_box.statistic, diag.ljung_box.p_value_display.c_str());

    const auto [best, trace] = tsf::arima::stepwise_search(y);
    std::printf("stepwise choice: ARIMA%s (%zu fits)\n", best.order.to_string().c_str(), trace.evaluated.size());
}
