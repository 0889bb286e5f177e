#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tsforecast/error.hpp"

namespace tsf::arima {

/**
 * Harvey state-space form of a zero-mean ARMA(p, q):
 *
 *   x_t = Z a_t,       Z = (1, 0, ..., 0)
 *   a_{t+1} = T a_t + R e_t,
 *
 * with r = max(p, q + 1), T the companion matrix whose first column holds phi
 * (zero padded) and R = (1, theta_1, ..., theta_{r-1})'.
 */
struct ArmaStateSpace {
    Eigen::Index r = 1;
    Eigen::VectorXd phi;    // length r
    Eigen::VectorXd R;      // length r
    Eigen::MatrixXd T;      // r x r
    Eigen::MatrixXd RRt;    // r x r
    Eigen::MatrixXd P0;     // stationary state covariance for unit innovation variance
};

/// Solves P = T P T' + Q through the vectorized form (I - T (x) T) vec(P) = vec(Q).
inline Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& T, const Eigen::MatrixXd& Q) {
    const Eigen::Index r = T.rows();
    const Eigen::Index r2 = r * r;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(r2, r2);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index k = 0; k < r; ++k)
                for (Eigen::Index l = 0; l < r; ++l)
                    // Column-major vec: row index i + r*k, column index j + r*l for T(i,j) T(k,l).
                    A(i + r * k, j + r * l) -= T(i, j) * T(k, l);
    const Eigen::Map<const Eigen::VectorXd> q(Q.data(), r2);
    Eigen::VectorXd p = A.partialPivLu().solve(q);
    Eigen::MatrixXd P = Eigen::Map<Eigen::MatrixXd>(p.data(), r, r);
    return 0.5 * (P + P.transpose());
}

inline ArmaStateSpace make_state_space(std::span<const double> phi, std::span<const double> theta) {
    ArmaStateSpace ss;
    ss.r = static_cast<Eigen::Index>(std::max(phi.size(), theta.size() + 1));
    ss.phi = Eigen::VectorXd::Zero(ss.r);
    ss.R = Eigen::VectorXd::Zero(ss.r);
    for (std::size_t i = 0; i < phi.size(); ++i) ss.phi(static_cast<Eigen::Index>(i)) = phi[i];
    ss.R(0) = 1.0;
    for (std::size_t j = 0; j < theta.size(); ++j) ss.R(static_cast<Eigen::Index>(j + 1)) = theta[j];
    ss.T = Eigen::MatrixXd::Zero(ss.r, ss.r);
    ss.T.col(0) = ss.phi;
    for (Eigen::Index i = 0; i + 1 < ss.r; ++i) ss.T(i, i + 1) = 1.0;
    ss.RRt = ss.R * ss.R.transpose();
    ss.P0 = solve_lyapunov(ss.T, ss.RRt);
    return ss;
}

/// Kalman filter run with unit innovation variance. Innovations v_t and their
/// variances F_t scale to the real model by sigma2 (F_t -> sigma2 * F_t).
struct KalmanRun {
    std::vector<double> v;
    std::vector<double> F;
    double sum_log_F = 0.0;
    double sum_sq = 0.0;  // sum v_t^2 / F_t
    Eigen::VectorXd a_next;  // predicted state for t = n + 1
    Eigen::MatrixXd P_next;
    bool ok = true;
};

inline KalmanRun kalman_filter(std::span<const double> y, double mu, const ArmaStateSpace& ss) {
    const Eigen::Index r = ss.r;
    KalmanRun run;
    run.v.reserve(y.size());
    run.F.reserve(y.size());
    Eigen::VectorXd a = Eigen::VectorXd::Zero(r), af(r);
    Eigen::MatrixXd P = ss.P0, Pf(r, r), TP(r, r);
    Eigen::VectorXd Pz(r);
    for (double yt : y) {
        const double v = yt - mu - a(0);
        const double F = P(0, 0);
        if (!(F > 0.0) || !std::isfinite(F)) {
            run.ok = false;
            return run;
        }
        Pz = P.col(0);
        af.noalias() = a + Pz * (v / F);
        Pf.noalias() = P - Pz * Pz.transpose() / F;
        a.noalias() = ss.T * af;
        TP.noalias() = ss.T * Pf;
        P.noalias() = TP * ss.T.transpose();
        P += ss.RRt;
        run.v.push_back(v);
        run.F.push_back(F);
        run.sum_log_F += std::log(F);
        run.sum_sq += v * v / F;
    }
    run.a_next = std::move(a);
    run.P_next = std::move(P);
    return run;
}

/// Exact Gaussian log-likelihood of y under ARMA(phi, theta) with mean mu and variance sigma2.
inline double arma_log_likelihood(std::span<const double> y, std::span<const double> phi,
                                  std::span<const double> theta, double mu, double sigma2) {
    const auto ss = make_state_space(phi, theta);
    const auto run = kalman_filter(y, mu, ss);
    if (!run.ok) return -std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(y.size());
    return -0.5 * (n * std::log(2.0 * std::numbers::pi * sigma2) + run.sum_log_F + run.sum_sq / sigma2);
}

/// Log-likelihood maximized over sigma2, with the maximizing sigma2.
struct ConcentratedLikelihood {
    double log_likelihood = -std::numeric_limits<double>::infinity();
    double sigma2 = 0.0;
};

inline ConcentratedLikelihood concentrated_log_likelihood(const KalmanRun& run, std::size_t n_obs) {
    ConcentratedLikelihood out;
    if (!run.ok || n_obs == 0) return out;
    const double n = static_cast<double>(n_obs);
    out.sigma2 = run.sum_sq / n;
    if (!(out.sigma2 > 0.0)) return out;
    out.log_likelihood = -0.5 * (n * (std::log(2.0 * std::numbers::pi * out.sigma2) + 1.0) + run.sum_log_F);
    return out;
}

inline ConcentratedLikelihood concentrated_log_likelihood(std::span<const double> y, std::span<const double> phi,
                                                          std::span<const double> theta, double mu) {
    const auto ss = make_state_space(phi, theta);
    return concentrated_log_likelihood(kalman_filter(y, mu, ss), y.size());
}

}  // namespace tsf::arima
