#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <numbers>

#include "support.hpp"
#include "tsforecast/arima/estimate.hpp"
#include "tsforecast/arima/forecast.hpp"
#include "tsforecast/arima/polynomial.hpp"
#include "tsforecast/arima/search.hpp"
#include "tsforecast/arima/state_space.hpp"

using namespace tsf;
using namespace tsf::arima;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TimeSeries simulate(std::vector<double> phi, std::vector<double> theta, double mu, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return TimeSeries(simulate_arma(phi, theta, mu, 1.0, n, rng), {2000, 1});
}

/// AR(p) autocovariances gamma_0..gamma_{n-1} from the Yule-Walker equations.
std::vector<double> ar_autocovariance(const std::vector<double>& phi, double sigma2, std::size_t n) {
    const std::size_t p = phi.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p + 1), static_cast<Eigen::Index>(p + 1));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + 1));
    b(0) = sigma2;
    for (std::size_t k = 0; k <= p; ++k) {
        for (std::size_t i = 1; i <= p; ++i) {
            const std::size_t lag = k > i ? k - i : i - k;
            A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(lag)) -= phi[i - 1];
        }
    }
    const Eigen::VectorXd g0 = A.fullPivLu().solve(b);
    std::vector<double> g(std::max(n, p + 1));
    for (std::size_t k = 0; k <= p; ++k) g[k] = g0(static_cast<Eigen::Index>(k));
    for (std::size_t k = p + 1; k < g.size(); ++k) {
        g[k] = 0.0;
        for (std::size_t i = 1; i <= p; ++i) g[k] += phi[i - 1] * g[k - i];
    }
    g.resize(n);
    return g;
}

/// Gaussian log-density of y under a stationary process with autocovariance gamma, via Cholesky.
double cholesky_log_likelihood(const std::vector<double>& y, double mu, const std::vector<double>& gamma) {
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) G(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
    const Eigen::LLT<Eigen::MatrixXd> llt(G);
    REQUIRE(llt.info() == Eigen::Success);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = y[static_cast<std::size_t>(i)] - mu;
    const Eigen::VectorXd w = llt.matrixL().solve(z);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
    return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + log_det + w.squaredNorm());
}

double iid_log_likelihood(const std::vector<double>& y, double mu, double s2) {
    double ss = 0.0;
    for (double v : y) ss += (v - mu) * (v - mu);
    const double n = static_cast<double>(y.size());
    return -0.5 * n * std::log(2.0 * std::numbers::pi * s2) - 0.5 * ss / s2;
}

/// Impulse response of the ARMA filter.
std::vector<double> impulse_response(const std::vector<double>& phi, const std::vector<double>& theta, std::size_t n) {
    std::vector<double> e(n, 0.0), y(n, 0.0);
    e[0] = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
        double v = e[t];
        for (std::size_t i = 0; i < phi.size(); ++i)
            if (t > i) v += phi[i] * y[t - 1 - i];
        for (std::size_t j = 0; j < theta.size(); ++j)
            if (t > j) v += theta[j] * e[t - 1 - j];
        y[t] = v;
    }
    return y;
}

double mean_of(std::span<const double> y) {
    double m = 0.0;
    for (double v : y) m += v;
    return m / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("Kalman AR likelihood equals the Cholesky oracle", "[arima][likelihood]") {
    const std::vector<std::vector<double>> models{{0.5}, {-0.8}, {0.5, 0.3}, {1.2, -0.5}, {0.3, -0.2, 0.4}, {0.9, -0.3, 0.1}};
    std::uint64_t seed = 100;
    for (const auto& phi : models) {
        for (std::size_t n : {5u, 20u, 50u}) {
            Rng rng(seed++);
            const double mu = rng.uniform(-3.0, 3.0), sigma2 = rng.uniform(0.2, 4.0);
            const auto y = simulate_arma(phi, {}, mu, std::sqrt(sigma2), n, rng);
            const double oracle = cholesky_log_likelihood(y, mu, ar_autocovariance(phi, sigma2, n));
            CHECK_THAT(arma_log_likelihood(y, phi, {}, mu, sigma2), WithinAbs(oracle, 1e-6));
        }
    }
}

TEST_CASE("Kalman MA and ARMA likelihoods equal the Cholesky oracle", "[arima][likelihood]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const double phi = rng.uniform(-0.9, 0.9), theta = rng.uniform(-0.9, 0.9), s2 = rng.uniform(0.5, 2.0);
        const std::vector<double> p{phi}, q{theta};
        const auto y = simulate_arma(p, q, 1.0, std::sqrt(s2), 40, rng);

        std::vector<double> g_ma(40, 0.0);
        g_ma[0] = s2 * (1 + theta * theta);
        g_ma[1] = s2 * theta;
        CHECK_THAT(arma_log_likelihood(y, {}, q, 1.0, s2), WithinAbs(cholesky_log_likelihood(y, 1.0, g_ma), 1e-6));

        std::vector<double> g(40);
        g[0] = s2 * (1 + 2 * phi * theta + theta * theta) / (1 - phi * phi);
        g[1] = s2 * (1 + phi * theta) * (phi + theta) / (1 - phi * phi);
        for (std::size_t k = 2; k < 40; ++k) g[k] = phi * g[k - 1];
        CHECK_THAT(arma_log_likelihood(y, p, q, 1.0, s2), WithinAbs(cholesky_log_likelihood(y, 1.0, g), 1e-6));
    }
}

TEST_CASE("white-noise likelihood equals the closed form", "[arima][likelihood]") {
    Rng rng(42);
    const auto y = simulate_white_noise(120, rng, 3.0, 2.0);
    CHECK_THAT(arma_log_likelihood(y, {}, {}, 3.0, 4.0), WithinAbs(iid_log_likelihood(y, 3.0, 4.0), 1e-8));

    const auto f = fit(TimeSeries(y), {0, 0, 0});
    const double mean = mean_of(y);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    CHECK_THAT(f.intercept, WithinAbs(mean, 1e-6));
    CHECK_THAT(f.sigma2, WithinRel(var, 1e-6));
    CHECK_THAT(f.log_likelihood, WithinAbs(-0.5 * 120.0 * (std::log(2.0 * std::numbers::pi * var) + 1.0), 1e-6));
}

TEST_CASE("stationary covariance solves the Lyapunov equation", "[arima][state_space]") {
    const std::vector<double> phi{0.5, -0.2, 0.1}, theta{0.4, 0.3};
    const auto ss = make_state_space(phi, theta);
    CHECK(ss.r == 3);
    const Eigen::MatrixXd resid = ss.P0 - (ss.T * ss.P0 * ss.T.transpose() + ss.RRt);
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parameter transforms", "[arima][transform]") {
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = 1 + static_cast<std::size_t>(trial % 5);
        std::vector<double> u(p);
        for (auto& x : u) x = rng.uniform(-3.0, 3.0);
        const auto phi = unconstrained_to_ar(u);
        REQUIRE(min_ar_root_modulus(phi) > 1.0);
        const auto theta = unconstrained_to_ma(u);
        REQUIRE(min_ma_root_modulus(theta) > 1.0);
        const auto back = unconstrained_to_ar(ar_to_unconstrained(phi));
        REQUIRE(test_support::max_abs_diff(back, phi) < 1e-8);
        // saturated partials stay on the stationary side up to root-finder precision
        for (auto& x : u) x = x > 0 ? 40.0 : -40.0;
        REQUIRE(min_ar_root_modulus(unconstrained_to_ar(u)) > 1.0 - 1e-6);
    }
}

TEST_CASE("psi weights equal the impulse response", "[arima][psi]") {
    const std::vector<std::pair<std::vector<double>, std::vector<double>>> models{
        {{0.6}, {0.3}}, {{0.5, -0.3}, {}}, {{}, {0.4, 0.2}}, {{1.1, -0.4, 0.1}, {-0.5, 0.2}}};
    for (const auto& [phi, theta] : models) {
        const auto psi = psi_weights(phi, theta, 30);
        const auto oracle = impulse_response(phi, theta, 30);
        CHECK(test_support::max_abs_diff(psi, oracle) < 1e-12);
    }
    // ARMA(1,1): psi_j = phi^{j-1} (phi + theta).
    const std::vector<double> p{0.6}, q{0.3};
    const auto psi = psi_weights(p, q, 10);
    for (std::size_t j = 1; j < 10; ++j) {
        CHECK_THAT(psi[j], WithinAbs(std::pow(0.6, static_cast<double>(j - 1)) * 0.9, 1e-14));
    }
}

TEST_CASE("integrated AR polynomial", "[arima][psi]") {
    const std::vector<double> phi{0.5};
    // (1 - 0.5B)(1 - B) = 1 - 1.5B + 0.5B^2
    CHECK(integrate_ar(phi, 1) == std::vector<double>{1.5, -0.5});
    // (1 - B)^2 = 1 - 2B + B^2
    CHECK(integrate_ar({}, 2) == std::vector<double>{2.0, -1.0});
}

TEST_CASE("ARMA(1,1) parameter recovery", "[arima][fit]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto y = simulate({0.6}, {0.3}, 0.0, 2000, 500 + seed);
        const auto f = fit(y, {1, 0, 1});
        CHECK_THAT(f.ar_coeffs[0], WithinAbs(0.6, 0.1));
        CHECK_THAT(f.ma_coeffs[0], WithinAbs(0.3, 0.1));
        CHECK_THAT(f.sigma2, WithinAbs(1.0, 0.15));
        CHECK(f.converged);
        CHECK(f.n_obs == 2000);
    }
}

TEST_CASE("fit record invariants", "[arima][fit]") {
    const auto y = simulate({0.5, 0.2}, {0.4}, 2.0, 300, 3);
    for (bool intercept : {true, false}) {
        for (ArimaOrder order : {ArimaOrder{2, 0, 1}, ArimaOrder{1, 1, 1}, ArimaOrder{0, 1, 2}, ArimaOrder{3, 0, 0}}) {
            const auto f = fit(y, order, intercept);
            const int k = order.p + order.q + (intercept ? 1 : 0) + 1;
            CHECK(f.parameter_count() == k);
            CHECK_THAT(f.aic, WithinAbs(-2.0 * f.log_likelihood + 2.0 * k, 1e-9));
            CHECK_THAT(f.bic, WithinAbs(-2.0 * f.log_likelihood + k * std::log(static_cast<double>(f.n_obs)), 1e-9));
            CHECK(f.sigma2 > 0.0);
            CHECK(min_ar_root_modulus(f.ar_coeffs) > 1.0 + 1e-6);
            CHECK(min_ma_root_modulus(f.ma_coeffs) > 1.0 + 1e-6);
            CHECK(f.n_obs == y.size() - static_cast<std::size_t>(order.d));
            CHECK(f.residuals.size() == f.n_obs);
            if (!intercept) CHECK(f.intercept == 0.0);
        }
    }
}

TEST_CASE("refitting is bitwise deterministic", "[arima][fit]") {
    const auto y = simulate({0.7}, {-0.2}, 1.0, 144, 77);
    for (ArimaOrder order : {ArimaOrder{2, 0, 2}, ArimaOrder{1, 0, 1}, ArimaOrder{0, 0, 2}}) {
        const auto a = fit(y, order), b = fit(y, order);
        CHECK(a.aic == b.aic);
        CHECK(a.ar_coeffs == b.ar_coeffs);
        CHECK(a.ma_coeffs == b.ma_coeffs);
    }
}

TEST_CASE("fit errors", "[arima][fit]") {
    const TimeSeries short_series(std::vector<double>{1, 3, 2, 5, 4, 6, 9, 7, 8, 12, 10, 11});
    CHECK_THROWS_MATCHES(fit(short_series, {1, 1, 1}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::degenerate_input; }));
    CHECK_NOTHROW(fit(short_series, {0, 1, 0}));
}

TEST_CASE("fixed-parameter likelihood", "[arima][fit]") {
    const auto y = simulate({0.5}, {}, 1.0, 60, 12);
    const auto f = fixed_fit(y, {1, 0, 0}, true, {{0.5}, {}, 1.0, 1.3});
    CHECK_THAT(f.log_likelihood,
               WithinAbs(cholesky_log_likelihood(y.vector(), 1.0, ar_autocovariance({0.5}, 1.3, 60)), 1e-6));
}

TEST_CASE("white-noise forecast", "[arima][forecast]") {
    Rng rng(4);
    const TimeSeries y(simulate_white_noise(200, rng, 5.0, 1.5), {2010, 1});
    const auto f = fit(y, {0, 0, 0});
    const auto fc = forecast(f, 12, 0.95);
    CHECK(fc.start == y.end().advanced(1));
    for (std::size_t h = 0; h < 12; ++h) {
        CHECK_THAT(fc.point[h], WithinAbs(f.intercept, 1e-8));
        CHECK_THAT(fc.upper[h] - fc.point[h], WithinAbs(1.959964 * std::sqrt(f.sigma2), 1e-6));
        CHECK_THAT(fc.point[h] - fc.lower[h], WithinAbs(1.959964 * std::sqrt(f.sigma2), 1e-6));
    }
}

TEST_CASE("AR(1) forecast closed form", "[arima][forecast]") {
    const auto y = simulate({0.8}, {}, 3.0, 150, 9);
    for (bool fixed : {true, false}) {
        const auto f = fixed ? fixed_fit(y, {1, 0, 0}, true, {{0.8}, {}, 3.0, 1.0}) : fit(y, {1, 0, 0});
        const auto fc = forecast(f, 24);
        const double phi = f.ar_coeffs[0], mu = f.intercept, last = y[y.size() - 1];
        for (std::size_t h = 1; h <= 24; ++h) {
            CHECK_THAT(fc.point[h - 1], WithinAbs(mu + std::pow(phi, static_cast<double>(h)) * (last - mu), 1e-8));
        }
    }
}

TEST_CASE("ARMA(1,1) forecast equals the conditional-expectation recursion", "[arima][forecast]") {
    const auto y = simulate({0.6}, {0.3}, 2.0, 2000, 31);
    const auto f = fit(y, {1, 0, 1});
    const double phi = f.ar_coeffs[0], theta = f.ma_coeffs[0], mu = f.intercept;
    double e = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double pred = t == 0 ? mu : mu + phi * (y[t - 1] - mu) + theta * e;
        e = y[t] - pred;
    }
    std::vector<double> oracle(12);
    oracle[0] = mu + phi * (y[y.size() - 1] - mu) + theta * e;
    for (std::size_t h = 1; h < 12; ++h) oracle[h] = mu + phi * (oracle[h - 1] - mu);

    const auto fc = forecast(f, 12);
    CHECK(test_support::max_abs_diff(fc.point, oracle) < 1e-6);

    double cum = 0.0;
    for (std::size_t h = 0; h < 12; ++h) {
        const double psi = h == 0 ? 1.0 : std::pow(phi, static_cast<double>(h - 1)) * (phi + theta);
        cum += psi * psi;
        CHECK_THAT(fc.std_error[h] * fc.std_error[h], WithinAbs(f.sigma2 * cum, 1e-6));
    }
}

TEST_CASE("integrated forecasts", "[arima][forecast]") {
    Rng rng(6);
    const TimeSeries rw(simulate_random_walk(200, rng, 10.0));
    const auto f = fixed_fit(rw, {0, 1, 0}, false, {{}, {}, 0.0, 2.0});
    const auto fc = forecast(f, 10);
    for (std::size_t h = 0; h < 10; ++h) {
        CHECK_THAT(fc.point[h], WithinAbs(rw[199], 1e-12));
        CHECK_THAT(fc.std_error[h], WithinAbs(std::sqrt(2.0 * static_cast<double>(h + 1)), 1e-12));
    }
    const auto drift = fixed_fit(rw, {0, 1, 0}, true, {{}, {}, 0.25, 1.0});
    const auto fd = forecast(drift, 5);
    for (std::size_t h = 0; h < 5; ++h) CHECK_THAT(fd.point[h], WithinAbs(rw[199] + 0.25 * static_cast<double>(h + 1), 1e-12));

    // ARIMA(1,1,1): psi weights of the integrated model are cumulative sums.
    const auto g = fixed_fit(rw, {1, 1, 1}, false, {{0.5}, {0.2}, 0.0, 1.0});
    const auto fg = forecast(g, 8);
    double cum = 0.0, psi_sum = 0.0;
    for (std::size_t h = 0; h < 8; ++h) {
        psi_sum += h == 0 ? 1.0 : std::pow(0.5, static_cast<double>(h - 1)) * 0.7;
        cum += psi_sum * psi_sum;
        CHECK_THAT(fg.std_error[h] * fg.std_error[h], WithinAbs(cum, 1e-10));
    }
}

TEST_CASE("forecast interval properties", "[arima][forecast][property]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto y = simulate({0.5}, {0.4}, 1.0, 200, 40 + seed);
        const auto f = fit(y, {1, 0, 1});
        const auto fc = forecast(f, 24, 0.9);
        for (std::size_t h = 0; h < 24; ++h) {
            REQUIRE(fc.lower[h] <= fc.point[h]);
            REQUIRE(fc.point[h] <= fc.upper[h]);
            if (h > 0) REQUIRE(fc.upper[h] - fc.point[h] >= fc.upper[h - 1] - fc.point[h - 1] - 1e-12);
        }
    }
    const auto y = simulate({0.5}, {}, 0.0, 50, 1);
    CHECK_THROWS_AS(forecast(fit(y, {1, 0, 0}), 0), Error);
}

TEST_CASE("one-step interval coverage", "[arima][forecast][montecarlo]") {
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        Rng rng(70000 + seed);
        const std::vector<double> phi{0.6}, theta{0.3};
        const auto y = simulate_arma(phi, theta, 1.0, 1.0, 61, rng, 200);
        const TimeSeries history(std::vector<double>(y.begin(), y.end() - 1));
        const auto f = fixed_fit(history, {1, 0, 1}, true, {phi, theta, 1.0, 1.0});
        const auto fc = forecast(f, 1, 0.95);
        covered += y.back() >= fc.lower[0] && y.back() <= fc.upper[0];
    }
    const double rate = covered / 2000.0;
    CHECK(rate >= 0.92);
    CHECK(rate <= 0.98);
}

TEST_CASE("residual diagnostics", "[arima][diagnose]") {
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto y = simulate({0.6}, {0.3}, 0.0, 300, 800 + seed);
        passes += diagnose(fit(y, {1, 0, 1}), 10).ljung_box.p_value > 0.05;
    }
    CHECK(passes >= 85);

    const auto persistent = simulate({0.9}, {}, 0.0, 300, 5);
    const auto under = diagnose(fit(persistent, {0, 0, 0}), 10);
    CHECK(under.ljung_box.p_value < 0.01);
    CHECK(under.residual_acf.values.size() == 11);
    CHECK_THROWS_AS(diagnose(fit(persistent, {1, 0, 1}), 2), Error);
}

TEST_CASE("search tie-break prefers parsimony", "[arima][search]") {
    CandidateResult a{{1, 0, 1}, true, 100.0, ""}, b{{2, 0, 0}, true, 100.0 + 5e-7, ""}, c{{0, 0, 2}, true, 100.0, ""};
    CHECK_FALSE(arima::detail::better(c, a, 1e-6));
    CHECK(arima::detail::better(a, c, 1e-6));  // equal p + q, smaller q wins
    CandidateResult d{{1, 0, 0}, true, 100.0 + 9e-7, ""};
    CHECK(arima::detail::better(d, b, 1e-6));
    CandidateResult e{{3, 0, 0}, true, 99.0, ""};
    CHECK(arima::detail::better(e, d, 1e-6));
    CandidateResult failed{{0, 0, 0}, true, std::nullopt, "convergence"};
    CHECK_FALSE(arima::detail::better(failed, e, 1e-6));
    CHECK(arima::detail::better(e, failed, 1e-6));
}

struct Ar1SearchOutcome {
    ArimaOrder order;
    double aic_gap;  // AR(1) at d = 0 with the selected intercept choice, minus the selected AIC
};

const std::vector<Ar1SearchOutcome>& ar1_search_outcomes() {
    static const std::vector<Ar1SearchOutcome> outcomes = [] {
        std::vector<Ar1SearchOutcome> out;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto y = simulate({0.7}, {}, 0.0, 1000, 300 + seed);
            const auto [f, trace] = stepwise_search(y);
            out.push_back({f.order, fit(y, {1, 0, 0}, f.with_intercept).aic - f.aic});
        }
        return out;
    }();
    return outcomes;
}

TEST_CASE("stepwise search on AR(1) keeps an AR term", "[arima][search]") {
    int with_ar = 0;
    for (const auto& o : ar1_search_outcomes()) with_ar += o.order.p >= 1;
    CHECK(with_ar >= 45);
}

TEST_CASE("stepwise search on AR(1) stays near the AR(1) family", "[arima][search][!mayfail]") {
    int ok = 0;
    for (const auto& o : ar1_search_outcomes()) ok += o.order.p >= 1 && o.order.d == 0 && o.aic_gap <= 2.0;
    CHECK(ok >= 45);
}

TEST_CASE("search trace invariants and determinism", "[arima][search]") {
    const auto y = simulate({0.5}, {0.3}, 4.0, 200, 19);
    const auto [f1, t1] = stepwise_search(y);
    const auto [f2, t2] = stepwise_search(y);
    REQUIRE(t1.evaluated.size() == t2.evaluated.size());
    for (std::size_t i = 0; i < t1.evaluated.size(); ++i) {
        CHECK(t1.evaluated[i].order.to_string() == t2.evaluated[i].order.to_string());
        CHECK(t1.evaluated[i].aic == t2.evaluated[i].aic);
    }
    CHECK(f1.aic == f2.aic);

    double min_aic = std::numeric_limits<double>::infinity();
    for (const auto& c : t1.evaluated)
        if (c.aic) min_aic = std::min(min_aic, *c.aic);
    CHECK(f1.aic == min_aic);
    CHECK(f1.order.to_string() == t1.best.to_string());
    CHECK(t1.evaluated.size() <= 94);

    REQUIRE(t1.evaluated.size() >= 4);
    CHECK(t1.evaluated[0].order.p == 2);
    CHECK(t1.evaluated[0].order.q == 2);
    CHECK(t1.evaluated[3].order.p == 0);
    CHECK(t1.evaluated[3].order.q == 0);
}

TEST_CASE("search honours the step budget and fixed d", "[arima][search]") {
    const auto y = simulate({0.5, 0.2}, {0.3}, 0.0, 300, 2);
    SearchConfig cfg;
    cfg.d = 0;
    cfg.max_steps = 5;
    const auto [f, trace] = stepwise_search(y, cfg);
    CHECK(trace.evaluated.size() <= 5);
    CHECK(f.order.d == 0);
    CHECK(trace.d_selection.empty());
}

TEST_CASE("kpss chooses d", "[arima][search]") {
    Rng rng(10);
    const TimeSeries rw(simulate_random_walk(400, rng));
    CHECK(select_d_by_kpss(rw, 2, {}) == 1);
    const TimeSeries wn(simulate_white_noise(400, rng));
    CHECK(select_d_by_kpss(wn, 2, {}) == 0);
}

TEST_CASE("search failure carries the trace", "[arima][search]") {
    const TimeSeries tiny(std::vector<double>{1, 3, 2, 5, 4, 6, 5, 8, 7});
    SearchConfig cfg;
    cfg.d = 0;
    try {
        (void)stepwise_search(tiny, cfg);
        FAIL("expected search failure");
    } catch (const SearchError& e) {
        CHECK(e.code() == ErrorCode::search_failure);
        CHECK(e.trace().evaluated.size() >= 4);
        for (const auto& c : e.trace().evaluated) CHECK_FALSE(c.failure.empty());
    }
}
