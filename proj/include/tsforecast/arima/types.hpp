#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"

namespace tsf::arima {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    friend constexpr auto operator<=>(const ArimaOrder&, const ArimaOrder&) = default;

    [[nodiscard]] std::string to_string() const {
        return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
    }
};

/// ARMA coefficients on the differenced scale.
/// y_t - mu = sum phi_i (y_{t-i} - mu) + e_t + sum theta_j e_{t-j}, Var(e_t) = sigma2.
struct ArmaParams {
    std::vector<double> phi;
    std::vector<double> theta;
    double mu = 0.0;
    double sigma2 = 1.0;
};

struct ArimaFit {
    ArimaOrder order;
    bool with_intercept = true;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    /// Mean of the differenced series (0 when fitted without intercept).
    double intercept = 0.0;
    double sigma2 = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    /// One-step-ahead innovations divided by their predicted standard deviation.
    std::vector<double> residuals;
    std::size_t n_obs = 0;
    bool converged = false;
    int iterations = 0;
    /// Series the model was fitted on (original, undifferenced scale).
    TimeSeries history;

    /// Number of estimated parameters, counting the innovation variance.
    [[nodiscard]] int parameter_count() const noexcept {
        return order.p + order.q + (with_intercept ? 1 : 0) + 1;
    }

    [[nodiscard]] ArmaParams params() const { return {ar_coeffs, ma_coeffs, intercept, sigma2}; }
};

/// Estimation did not converge; carries the best parameters found.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, ArimaFit best)
        : Error(ErrorCode::convergence, message), best_so_far_(std::move(best)) {}

    [[nodiscard]] const ArimaFit& best_so_far() const noexcept { return best_so_far_; }

private:
    ArimaFit best_so_far_;
};

struct Forecast {
    std::size_t horizon = 0;
    double level = 0.95;
    Period start{};
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;
    /// Forecast standard error per step, sqrt(sigma2 * sum psi_j^2).
    std::vector<double> std_error;
};

}  // namespace tsf::arima
