#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tsforecast/error.hpp"

namespace tsf::arima {

/// Partial autocorrelations are scaled into (-kPartialBound, kPartialBound) so that
/// saturated parameters still give roots strictly outside the unit circle.
inline constexpr double kPartialBound = 1.0 - 1e-5;

/// Maps partial autocorrelations r_1..r_p (|r_k| < 1) to the coefficients of a
/// stationary polynomial 1 - phi_1 z - ... - phi_p z^p.
inline std::vector<double> partials_to_coeffs(std::span<const double> r) {
    const std::size_t p = r.size();
    std::vector<double> phi(p, 0.0), prev(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        prev = phi;
        phi[k] = r[k];
        for (std::size_t j = 0; j < k; ++j) phi[j] = prev[j] - r[k] * prev[k - 1 - j];
    }
    return phi;
}

/// Inverse of partials_to_coeffs (step-down recursion).
inline std::vector<double> coeffs_to_partials(std::span<const double> coeffs) {
    const std::size_t p = coeffs.size();
    std::vector<double> phi(coeffs.begin(), coeffs.end()), r(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        const double a = phi[k];
        if (std::abs(a) >= 1.0) {
            throw Error(ErrorCode::invalid_value, "coefficients are not stationary (|partial| >= 1)");
        }
        r[k] = a;
        std::vector<double> next(k);
        for (std::size_t j = 0; j < k; ++j) next[j] = (phi[j] + a * phi[k - 1 - j]) / (1.0 - a * a);
        phi.assign(next.begin(), next.end());
    }
    return r;
}

/// Unconstrained reals -> stationary AR coefficients.
inline std::vector<double> unconstrained_to_ar(std::span<const double> u) {
    std::vector<double> r(u.size());
    std::transform(u.begin(), u.end(), r.begin(), [](double x) { return kPartialBound * std::tanh(x); });
    return partials_to_coeffs(r);
}

/// Unconstrained reals -> invertible MA coefficients for 1 + theta_1 z + ... + theta_q z^q.
inline std::vector<double> unconstrained_to_ma(std::span<const double> u) {
    auto theta = unconstrained_to_ar(u);
    for (double& t : theta) t = -t;
    return theta;
}

inline std::vector<double> ar_to_unconstrained(std::span<const double> phi) {
    auto r = coeffs_to_partials(phi);
    for (double& x : r) x = std::atanh(std::clamp(x / kPartialBound, -1.0 + 1e-15, 1.0 - 1e-15));
    return r;
}

/// psi_0..psi_{count-1} of the MA(infinity) form: psi_0 = 1, psi_j = theta_j + sum_i phi_i psi_{j-i}.
inline std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta,
                                       std::size_t count) {
    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        double v = j <= theta.size() ? theta[j - 1] : 0.0;
        for (std::size_t i = 1; i <= phi.size() && i <= j; ++i) v += phi[i - 1] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

/// AR coefficients of phi(B) (1 - B)^d, written as 1 - sum phi*_i B^i.
inline std::vector<double> integrate_ar(std::span<const double> phi, int d) {
    // Work with the full polynomial c(B) = 1 - sum phi_i B^i.
    std::vector<double> c(phi.size() + 1);
    c[0] = 1.0;
    for (std::size_t i = 0; i < phi.size(); ++i) c[i + 1] = -phi[i];
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i];
        }
        c = std::move(next);
    }
    std::vector<double> out(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = -c[i];
    return out;
}

/// Smallest root modulus of 1 - a_1 z - ... - a_k z^k (infinity for an empty or zero polynomial).
inline double min_root_modulus(std::span<const double> a) {
    std::size_t k = a.size();
    while (k > 0 && a[k - 1] == 0.0) --k;
    if (k == 0) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) companion(0, static_cast<Eigen::Index>(i)) = a[i];
    for (std::size_t i = 1; i < k; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    // Roots of the polynomial are reciprocals of the companion eigenvalues.
    const double spectral = companion.eigenvalues().cwiseAbs().maxCoeff();
    return spectral > 0.0 ? 1.0 / spectral : std::numeric_limits<double>::infinity();
}

inline double min_ar_root_modulus(std::span<const double> phi) { return min_root_modulus(phi); }

inline double min_ma_root_modulus(std::span<const double> theta) {
    std::vector<double> neg(theta.begin(), theta.end());
    for (double& t : neg) t = -t;
    return min_root_modulus(neg);
}

}  // namespace tsf::arima
