#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/neural/model.hpp"

namespace tsf::neural {

/// Per-step activations kept by `forward` for backpropagation through time.
struct ForwardCache {
    RecurrentKind kind = RecurrentKind::lstm;
    std::size_t hidden_size = 0;
    std::uint64_t model_revision = 0;
    std::vector<double> inputs;
    /// h[0] = 0, h[t] after step t (t = 1..L); each of length H.
    std::vector<std::vector<double>> h;
    /// LSTM only: c[0] = 0, c[t] after step t, and gate activations per step (index t-1).
    std::vector<std::vector<double>> c, gate_i, gate_f, gate_g, gate_o;
    double prediction = 0.0;
};

namespace detail {

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// out += W (rows x cols, row-major) * x
inline void matvec_add(const WeightArray& W, std::span<const double> x, std::vector<double>& out) {
    for (std::size_t r = 0; r < W.rows; ++r) {
        double s = 0.0;
        const double* row = W.values.data() + r * W.cols;
        for (std::size_t c = 0; c < W.cols; ++c) s += row[c] * x[c];
        out[r] += s;
    }
}

/// out += W^T * v
inline void matvec_t_add(const WeightArray& W, std::span<const double> v, std::vector<double>& out) {
    for (std::size_t r = 0; r < W.rows; ++r) {
        const double* row = W.values.data() + r * W.cols;
        for (std::size_t c = 0; c < W.cols; ++c) out[c] += row[c] * v[r];
    }
}

/// G += u v^T
inline void outer_add(WeightArray& G, std::span<const double> u, std::span<const double> v) {
    for (std::size_t r = 0; r < G.rows; ++r) {
        double* row = G.values.data() + r * G.cols;
        for (std::size_t c = 0; c < G.cols; ++c) row[c] += u[r] * v[c];
    }
}

inline void add_to(WeightArray& G, std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) G.values[i] += v[i];
}

inline WeightArray& grad(Gradients& g, std::string_view name) {
    for (auto& a : g) if (a.name == name) return a;
    throw Error(ErrorCode::structural, "gradient array '" + std::string(name) + "' missing");
}

}  // namespace detail

/**
 * Runs the network over the window and returns the cache; `cache.prediction` is the
 * linear head applied to the final hidden state.
 */
inline ForwardCache forward(const RecurrentModel& model, std::span<const double> window) {
    if (window.empty()) throw Error(ErrorCode::structural, "forward: empty window");
    for (double x : window) {
        if (!std::isfinite(x)) throw Error(ErrorCode::invalid_value, "forward: non-finite input");
    }
    model.validate();
    const std::size_t H = model.hidden_size(), L = window.size();

    ForwardCache cache;
    cache.kind = model.kind();
    cache.hidden_size = H;
    cache.model_revision = model.revision();
    cache.inputs.assign(window.begin(), window.end());
    cache.h.assign(L + 1, std::vector<double>(H, 0.0));

    if (model.kind() == RecurrentKind::simple_rnn) {
        const auto& Wx = model.array("W_xh");
        const auto& Wh = model.array("W_hh");
        const auto& b = model.array("b_h");
        for (std::size_t t = 1; t <= L; ++t) {
            std::vector<double> a = b.values;
            for (std::size_t r = 0; r < H; ++r) a[r] += Wx.values[r] * window[t - 1];
            detail::matvec_add(Wh, cache.h[t - 1], a);
            for (std::size_t r = 0; r < H; ++r) cache.h[t][r] = std::tanh(a[r]);
        }
    } else {
        cache.c.assign(L + 1, std::vector<double>(H, 0.0));
        cache.gate_i.assign(L, {});
        cache.gate_f.assign(L, {});
        cache.gate_g.assign(L, {});
        cache.gate_o.assign(L, {});
        const WeightArray* Wx[4] = {&model.array("W_xi"), &model.array("W_xf"), &model.array("W_xg"), &model.array("W_xo")};
        const WeightArray* Wh[4] = {&model.array("W_hi"), &model.array("W_hf"), &model.array("W_hg"), &model.array("W_ho")};
        const WeightArray* b[4] = {&model.array("b_i"), &model.array("b_f"), &model.array("b_g"), &model.array("b_o")};
        std::vector<std::vector<double>>* gates[4] = {&cache.gate_i, &cache.gate_f, &cache.gate_g, &cache.gate_o};
        for (std::size_t t = 1; t <= L; ++t) {
            const double x = window[t - 1];
            for (int k = 0; k < 4; ++k) {
                std::vector<double> a = b[k]->values;
                for (std::size_t r = 0; r < H; ++r) a[r] += Wx[k]->values[r] * x;
                detail::matvec_add(*Wh[k], cache.h[t - 1], a);
                for (double& v : a) v = (k == 2) ? std::tanh(v) : detail::sigmoid(v);
                (*gates[k])[t - 1] = std::move(a);
            }
            const auto& i = cache.gate_i[t - 1];
            const auto& f = cache.gate_f[t - 1];
            const auto& g = cache.gate_g[t - 1];
            const auto& o = cache.gate_o[t - 1];
            for (std::size_t r = 0; r < H; ++r) {
                cache.c[t][r] = f[r] * cache.c[t - 1][r] + i[r] * g[r];
                cache.h[t][r] = o[r] * std::tanh(cache.c[t][r]);
            }
        }
    }

    const auto& Why = model.array("W_hy");
    double y = model.array("b_y").values[0];
    for (std::size_t r = 0; r < H; ++r) y += Why.values[r] * cache.h[L][r];
    cache.prediction = y;
    return cache;
}

/// Prediction only.
inline double predict_one(const RecurrentModel& model, std::span<const double> window) {
    return forward(model, window).prediction;
}

/**
 * Exact gradients of 0.5 * (prediction - target)^2 with respect to every weight,
 * by backpropagation through all steps of the cached forward pass.
 */
inline Gradients backward(const RecurrentModel& model, const ForwardCache& cache, double target) {
    if (cache.model_revision != model.revision() || cache.kind != model.kind() ||
        cache.hidden_size != model.hidden_size() || cache.h.size() != cache.inputs.size() + 1) {
        throw Error(ErrorCode::structural, "backward: cache does not belong to the current model state");
    }
    const std::size_t H = model.hidden_size(), L = cache.inputs.size();
    Gradients g = zero_gradients(model);
    const double delta = cache.prediction - target;

    const auto& Why = model.array("W_hy");
    detail::grad(g, "b_y").values[0] = delta;
    auto& gWhy = detail::grad(g, "W_hy");
    std::vector<double> dh(H);
    for (std::size_t r = 0; r < H; ++r) {
        gWhy.values[r] = delta * cache.h[L][r];
        dh[r] = delta * Why.values[r];
    }

    if (model.kind() == RecurrentKind::simple_rnn) {
        const auto& Wh = model.array("W_hh");
        auto& gWx = detail::grad(g, "W_xh");
        auto& gWh = detail::grad(g, "W_hh");
        auto& gb = detail::grad(g, "b_h");
        std::vector<double> da(H);
        for (std::size_t t = L; t >= 1; --t) {
            for (std::size_t r = 0; r < H; ++r) da[r] = dh[r] * (1.0 - cache.h[t][r] * cache.h[t][r]);
            for (std::size_t r = 0; r < H; ++r) gWx.values[r] += da[r] * cache.inputs[t - 1];
            detail::outer_add(gWh, da, cache.h[t - 1]);
            detail::add_to(gb, da);
            std::fill(dh.begin(), dh.end(), 0.0);
            detail::matvec_t_add(Wh, da, dh);
        }
        return g;
    }

    static constexpr const char* kGates[4] = {"i", "f", "g", "o"};
    const WeightArray* Wh[4];
    WeightArray* gWx[4];
    WeightArray* gWh[4];
    WeightArray* gb[4];
    for (int k = 0; k < 4; ++k) {
        Wh[k] = &model.array(std::string("W_h") + kGates[k]);
        gWx[k] = &detail::grad(g, std::string("W_x") + kGates[k]);
        gWh[k] = &detail::grad(g, std::string("W_h") + kGates[k]);
        gb[k] = &detail::grad(g, std::string("b_") + kGates[k]);
    }

    std::vector<double> dc(H, 0.0);
    std::vector<std::vector<double>> da(4, std::vector<double>(H));
    for (std::size_t t = L; t >= 1; --t) {
        const auto& i = cache.gate_i[t - 1];
        const auto& f = cache.gate_f[t - 1];
        const auto& gg = cache.gate_g[t - 1];
        const auto& o = cache.gate_o[t - 1];
        const auto& c_prev = cache.c[t - 1];
        for (std::size_t r = 0; r < H; ++r) {
            const double tc = std::tanh(cache.c[t][r]);
            const double d_o = dh[r] * tc;
            dc[r] += dh[r] * o[r] * (1.0 - tc * tc);
            const double d_i = dc[r] * gg[r];
            const double d_g = dc[r] * i[r];
            const double d_f = dc[r] * c_prev[r];
            da[0][r] = d_i * i[r] * (1.0 - i[r]);
            da[1][r] = d_f * f[r] * (1.0 - f[r]);
            da[2][r] = d_g * (1.0 - gg[r] * gg[r]);
            da[3][r] = d_o * o[r] * (1.0 - o[r]);
            dc[r] *= f[r];
        }
        std::fill(dh.begin(), dh.end(), 0.0);
        for (int k = 0; k < 4; ++k) {
            for (std::size_t r = 0; r < H; ++r) gWx[k]->values[r] += da[k][r] * cache.inputs[t - 1];
            detail::outer_add(*gWh[k], da[k], cache.h[t - 1]);
            detail::add_to(*gb[k], da[k]);
            detail::matvec_t_add(*Wh[k], da[k], dh);
        }
    }
    return g;
}

}  // namespace tsf::neural
