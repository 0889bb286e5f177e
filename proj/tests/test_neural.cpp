#include <catch_amalgamated.hpp>

#include <numbers>

#include "support.hpp"
#include "tsforecast/neural/model.hpp"
#include "tsforecast/neural/recurrent.hpp"
#include "tsforecast/neural/train.hpp"

using namespace tsf;
using namespace tsf::neural;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> random_window(Rng& rng, std::size_t L) {
    std::vector<double> w(L);
    for (auto& x : w) x = rng.uniform(0.0, 1.0);
    return w;
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Straight transcription of the recurrences, independent of the library's cache layout.
double reference_forward(const RecurrentModel& m, const std::vector<double>& x, double* max_abs_c = nullptr) {
    const std::size_t H = m.hidden_size();
    std::vector<double> h(H, 0.0), c(H, 0.0);
    auto W = [&](const char* name, std::size_t r, std::size_t col) { return m.array(name).at(r, col); };
    for (std::size_t t = 0; t < x.size(); ++t) {
        std::vector<double> hn(H), cn(H);
        for (std::size_t r = 0; r < H; ++r) {
            if (m.kind() == RecurrentKind::simple_rnn) {
                double a = W("W_xh", r, 0) * x[t] + W("b_h", r, 0);
                for (std::size_t k = 0; k < H; ++k) a += W("W_hh", r, k) * h[k];
                hn[r] = std::tanh(a);
            } else {
                double ai = W("W_xi", r, 0) * x[t] + W("b_i", r, 0), af = W("W_xf", r, 0) * x[t] + W("b_f", r, 0);
                double ag = W("W_xg", r, 0) * x[t] + W("b_g", r, 0), ao = W("W_xo", r, 0) * x[t] + W("b_o", r, 0);
                for (std::size_t k = 0; k < H; ++k) {
                    ai += W("W_hi", r, k) * h[k];
                    af += W("W_hf", r, k) * h[k];
                    ag += W("W_hg", r, k) * h[k];
                    ao += W("W_ho", r, k) * h[k];
                }
                cn[r] = sig(af) * c[r] + sig(ai) * std::tanh(ag);
                hn[r] = sig(ao) * std::tanh(cn[r]);
                if (max_abs_c) *max_abs_c = std::max(*max_abs_c, std::abs(cn[r]) / static_cast<double>(t + 1));
            }
        }
        h = hn;
        c = cn;
    }
    double y = W("b_y", 0, 0);
    for (std::size_t k = 0; k < H; ++k) y += W("W_hy", 0, k) * h[k];
    return y;
}

double loss(const RecurrentModel& m, const std::vector<double>& x, double target) {
    const double e = predict_one(m, x) - target;
    return 0.5 * e * e;
}

double relative_error(double a, double n) {
    return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6});
}

double worst_gradient_error(RecurrentKind kind, std::uint64_t seed) {
    auto model = RecurrentModel::initialized(kind, 8, seed);
    Rng rng(seed + 1000);
    const auto x = random_window(rng, 12);
    const double target = rng.uniform(0.0, 1.0);
    const auto grads = backward(model, forward(model, x), target);
    double worst = 0.0;
    const double h = 1e-5;
    for (std::size_t a = 0; a < grads.size(); ++a) {
        for (std::size_t i = 0; i < grads[a].values.size(); ++i) {
            auto plus = model, minus = model;
            plus.mutable_arrays()[a].values[i] += h;
            minus.mutable_arrays()[a].values[i] -= h;
            const double numeric = (loss(plus, x, target) - loss(minus, x, target)) / (2.0 * h);
            worst = std::max(worst, relative_error(grads[a].values[i], numeric));
        }
    }
    return worst;
}

TimeSeries sine(std::size_t n, double period) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) v[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period);
    return TimeSeries(std::move(v));
}

}  // namespace

TEST_CASE("array layout", "[neural][model]") {
    const auto rnn = RecurrentModel::zeros(RecurrentKind::simple_rnn, 4);
    CHECK(rnn.arrays().size() == 5);
    CHECK(rnn.array("W_hh").rows == 4);
    CHECK(rnn.array("W_hh").cols == 4);
    CHECK(rnn.parameter_count() == 4 + 16 + 4 + 4 + 1);
    const auto lstm = RecurrentModel::zeros(RecurrentKind::lstm, 3);
    CHECK(lstm.arrays().size() == 14);
    CHECK(lstm.parameter_count() == 4 * (3 + 9 + 3) + 3 + 1);
    CHECK(RecurrentModel::input_size() == 1);
}

TEST_CASE("initialization bounds", "[neural][model]") {
    const auto m = RecurrentModel::initialized(RecurrentKind::lstm, 16, 3);
    for (const auto& a : m.arrays()) {
        const double bound = a.name.starts_with("W_x") ? 1.0 : 0.25;
        for (double v : a.values) {
            if (a.name == "b_f") {
                REQUIRE(v == 1.0);
            } else {
                REQUIRE(std::abs(v) <= bound);
            }
        }
    }
    CHECK(RecurrentModel::initialized(RecurrentKind::lstm, 16, 3) == m);
    CHECK_FALSE(RecurrentModel::initialized(RecurrentKind::lstm, 16, 4) == m);
}

TEST_CASE("forward matches the reference recurrences", "[neural][forward]") {
    for (auto kind : {RecurrentKind::simple_rnn, RecurrentKind::lstm}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto m = RecurrentModel::initialized(kind, 6, seed);
            Rng rng(seed);
            const auto x = random_window(rng, 12);
            CHECK_THAT(forward(m, x).prediction, WithinAbs(reference_forward(m, x), 1e-12));
        }
    }
}

TEST_CASE("trivial networks", "[neural][forward]") {
    auto lstm = RecurrentModel::zeros(RecurrentKind::lstm, 5);
    for (double& v : lstm.array("b_f").values) v = 20.0;
    lstm.array("b_y").values[0] = 0.37;
    Rng rng(1);
    for (int i = 0; i < 5; ++i) {
        const auto cache = forward(lstm, random_window(rng, 12));
        CHECK(cache.prediction == 0.37);
        for (const auto& c : cache.c)
            for (double v : c) CHECK(v == 0.0);
    }
    const auto rnn = RecurrentModel::zeros(RecurrentKind::simple_rnn, 5);
    CHECK(forward(rnn, random_window(rng, 7)).prediction == 0.0);

    const auto m = RecurrentModel::initialized(RecurrentKind::lstm, 8, 9);
    const std::vector<double> zeros(12, 0.0);
    CHECK(forward(m, zeros).prediction == forward(m, zeros).prediction);
}

TEST_CASE("forward rejects malformed input", "[neural][forward]") {
    auto m = RecurrentModel::zeros(RecurrentKind::simple_rnn, 3);
    CHECK_THROWS_AS(forward(m, std::vector<double>{}), Error);
    m.mutable_arrays()[1].values.pop_back();
    try {
        (void)forward(m, std::vector<double>{0.1, 0.2});
        FAIL("expected structural error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::structural);
    }
}

TEST_CASE("gradients match central differences", "[neural][backward]") {
    for (auto kind : {RecurrentKind::simple_rnn, RecurrentKind::lstm}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            CAPTURE(to_string(kind), seed);
            CHECK(worst_gradient_error(kind, seed) < 1e-4);
        }
    }
}

TEST_CASE("zero error gives zero gradients", "[neural][backward]") {
    for (auto kind : {RecurrentKind::simple_rnn, RecurrentKind::lstm}) {
        const auto m = RecurrentModel::initialized(kind, 5, 2);
        Rng rng(2);
        const auto cache = forward(m, random_window(rng, 12));
        const auto g = backward(m, cache, cache.prediction);
        for (const auto& a : g)
            for (double v : a.values) REQUIRE(v == 0.0);
    }
}

TEST_CASE("single-step head gradient", "[neural][backward]") {
    const auto m = RecurrentModel::initialized(RecurrentKind::simple_rnn, 4, 6);
    const std::vector<double> x{0.4};
    const auto cache = forward(m, x);
    const double target = 0.9;
    const auto g = backward(m, cache, target);
    const auto& gw = g[3];
    REQUIRE(gw.name == "W_hy");
    for (std::size_t r = 0; r < 4; ++r) {
        double a = m.array("W_xh").values[r] * 0.4 + m.array("b_h").values[r];
        CHECK_THAT(gw.values[r], WithinAbs((cache.prediction - target) * std::tanh(a), 1e-15));
    }
}

TEST_CASE("stale cache is rejected", "[neural][backward]") {
    auto m = RecurrentModel::initialized(RecurrentKind::lstm, 4, 1);
    const auto cache = forward(m, std::vector<double>{0.1, 0.2, 0.3});
    m.array("W_hy").values[0] += 0.1;
    try {
        (void)backward(m, cache, 0.5);
        FAIL("expected structural error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::structural);
    }
    const auto other = RecurrentModel::initialized(RecurrentKind::simple_rnn, 4, 1);
    CHECK_THROWS_AS(backward(other, cache, 0.5), Error);
}

TEST_CASE("LSTM state bounds", "[neural][property]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto m = RecurrentModel::initialized(RecurrentKind::lstm, 6, seed);
        for (auto& a : m.mutable_arrays())
            for (double& v : a.values) v *= 8.0;
        Rng rng(seed);
        std::vector<double> x(30);
        for (auto& v : x) v = rng.uniform(-5.0, 5.0);
        const auto cache = forward(m, x);
        for (std::size_t t = 1; t < cache.c.size(); ++t) {
            for (std::size_t r = 0; r < 6; ++r) {
                REQUIRE(std::abs(cache.c[t][r]) <= static_cast<double>(t));
                REQUIRE(std::abs(cache.h[t][r]) <= 1.0);
            }
        }
    }
}

TEST_CASE("gradient clipping", "[neural][property]") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = zero_gradients(RecurrentModel::zeros(RecurrentKind::lstm, 4));
        const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
        for (auto& a : g)
            for (double& v : a.values) v = scale * rng.normal();
        const double clip = rng.uniform(0.1, 10.0);
        const double before = clip_global_norm(g, clip);
        const double after = global_norm(g);
        REQUIRE(after <= clip * (1.0 + 1e-12));
        if (before <= clip) REQUIRE(after == before);
    }
}

TEST_CASE("sine wave is learnable", "[neural][train]") {
    TrainConfig cfg;
    cfg.look_back = 12;
    cfg.hidden_size = 16;
    cfg.epochs = 200;
    cfg.learning_rate = 0.005;
    cfg.seed = 1;
    const auto s = sine(480, 24.0);
    const auto t = train(s, cfg, RecurrentKind::lstm);
    REQUIRE(t.report.epochs_run == 200);
    REQUIRE(t.report.loss_history.size() == 200);
    for (double l : t.report.loss_history) REQUIRE((std::isfinite(l) && l >= 0.0));
    CHECK(t.report.final_loss < t.report.loss_history.front());
    const auto windows = make_windows(apply_scaler(s.values(), t.scaler), 12);
    CHECK(window_rmse(t.model, windows) < 0.02);
}

TEST_CASE("training is deterministic", "[neural][train]") {
    TrainConfig cfg;
    cfg.hidden_size = 6;
    cfg.epochs = 15;
    cfg.seed = 123;
    const auto s = sine(120, 12.0);
    for (auto kind : {RecurrentKind::simple_rnn, RecurrentKind::lstm}) {
        const auto a = train(s, cfg, kind), b = train(s, cfg, kind);
        CHECK(a.model == b.model);
        CHECK(a.report.loss_history == b.report.loss_history);
        CHECK(predict_series(a, s.values(), 10, PredictMode::recursive) ==
              predict_series(b, s.values(), 10, PredictMode::recursive));
    }
    cfg.optimizer = OptimizerKind::sgd;
    cfg.learning_rate = 0.05;
    const auto c = train(s, cfg, RecurrentKind::lstm), d = train(s, cfg, RecurrentKind::lstm);
    CHECK(c.model == d.model);
}

TEST_CASE("training errors", "[neural][train]") {
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.hidden_size = 3;
    try {
        (void)train(TimeSeries(std::vector<double>(40, 7.0)), cfg, RecurrentKind::lstm);
        FAIL("expected zero-range error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::zero_range);
    }
    CHECK_THROWS_AS(train(sine(13, 12.0), cfg, RecurrentKind::lstm), Error);

    cfg.optimizer = OptimizerKind::sgd;
    cfg.learning_rate = 1e300;
    cfg.gradient_clip = 5.0;
    try {
        (void)train(sine(100, 12.0), cfg, RecurrentKind::simple_rnn);
        FAIL("expected divergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::divergence);
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }

    TrainConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("prediction modes", "[neural][predict]") {
    auto lstm = RecurrentModel::zeros(RecurrentKind::lstm, 4);
    for (double& v : lstm.array("b_f").values) v = 20.0;
    lstm.array("b_y").values[0] = 0.25;
    const ScalerState scaler{2.0, 10.0};
    const std::vector<double> history{3, 4, 5, 6, 7, 8};
    CHECK(predict_series(lstm, scaler, history, 3, 0, PredictMode::recursive).empty());
    for (double v : predict_series(lstm, scaler, history, 3, 6, PredictMode::recursive)) CHECK(v == scaler.invert(0.25));
    CHECK_THROWS_AS(predict_series(lstm, scaler, history, 7, 1, PredictMode::recursive), Error);
    CHECK_THROWS_AS(predict_series(lstm, scaler, history, 3, 4, PredictMode::teacher_forced), Error);

    TrainConfig cfg;
    cfg.hidden_size = 5;
    cfg.epochs = 5;
    cfg.look_back = 6;
    const auto s = sine(60, 12.0);
    const auto t = train(s, cfg, RecurrentKind::simple_rnn);
    const auto tf = predict_series(t, s.values(), s.size() - 6, PredictMode::teacher_forced);
    const auto windows = make_windows(apply_scaler(s.values(), t.scaler), 6);
    REQUIRE(tf.size() == windows.size());
    for (std::size_t i = 0; i < tf.size(); ++i) {
        CHECK(tf[i] == t.scaler.invert(forward(t.model, windows.inputs[i]).prediction));
    }
}
