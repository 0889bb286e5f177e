#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/random.hpp"

namespace tsf::neural {

enum class RecurrentKind { simple_rnn, lstm };
enum class OptimizerKind { sgd, adam };

constexpr std::string_view to_string(RecurrentKind k) noexcept {
    return k == RecurrentKind::lstm ? "LSTM" : "SimpleRNN";
}

constexpr std::string_view to_string(OptimizerKind k) noexcept { return k == OptimizerKind::adam ? "Adam" : "SGD"; }

inline RecurrentKind parse_kind(std::string_view s) {
    if (s == "LSTM" || s == "lstm") return RecurrentKind::lstm;
    if (s == "SimpleRNN" || s == "rnn" || s == "RNN" || s == "simple_rnn") return RecurrentKind::simple_rnn;
    throw Error(ErrorCode::config, "unknown recurrent kind '" + std::string(s) + "'");
}

inline OptimizerKind parse_optimizer(std::string_view s) {
    if (s == "Adam" || s == "adam") return OptimizerKind::adam;
    if (s == "SGD" || s == "sgd") return OptimizerKind::sgd;
    throw Error(ErrorCode::config, "unknown optimizer '" + std::string(s) + "'");
}

struct TrainConfig {
    std::size_t look_back = 12;
    std::size_t hidden_size = 32;
    std::size_t epochs = 300;
    double learning_rate = 0.001;
    std::uint64_t seed = 42;
    /// Global-norm clipping threshold.
    double gradient_clip = 5.0;
    OptimizerKind optimizer = OptimizerKind::adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    /// One update per window per epoch, windows in chronological order.
    static constexpr std::string_view batch_mode = "per_window_sequential";

    void validate() const {
        if (look_back == 0 || hidden_size == 0 || epochs == 0) {
            throw Error(ErrorCode::config, "TrainConfig: look_back, hidden_size and epochs must be positive");
        }
        if (!(learning_rate > 0.0) || !(gradient_clip > 0.0)) {
            throw Error(ErrorCode::config, "TrainConfig: learning_rate and gradient_clip must be positive");
        }
    }
};

/// A named, row-major weight array.
struct WeightArray {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    [[nodiscard]] double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/**
 * Single-layer recurrent network with scalar input and a linear dense head.
 *
 * SimpleRNN arrays: W_xh (H x 1), W_hh (H x H), b_h (H), W_hy (1 x H), b_y (1).
 * LSTM arrays, per gate k in {i, f, g, o}: W_xk (H x 1), W_hk (H x H), b_k (H);
 * then W_hy and b_y.
 */
class RecurrentModel {
public:
    RecurrentModel() = default;

    /// All-zero model with the array layout for `kind`.
    static RecurrentModel zeros(RecurrentKind kind, std::size_t hidden_size) {
        if (hidden_size == 0) throw Error(ErrorCode::structural, "RecurrentModel: hidden_size must be positive");
        RecurrentModel m;
        m.kind_ = kind;
        m.hidden_ = hidden_size;
        const std::size_t H = hidden_size;
        auto add = [&](std::string name, std::size_t r, std::size_t c) {
            m.arrays_.push_back({std::move(name), r, c, std::vector<double>(r * c, 0.0)});
        };
        if (kind == RecurrentKind::simple_rnn) {
            add("W_xh", H, 1);
            add("W_hh", H, H);
            add("b_h", H, 1);
        } else {
            for (const char* gate : {"i", "f", "g", "o"}) {
                add(std::string("W_x") + gate, H, 1);
                add(std::string("W_h") + gate, H, H);
                add(std::string("b_") + gate, H, 1);
            }
        }
        add("W_hy", 1, H);
        add("b_y", 1, 1);
        return m;
    }

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights; input weights have fan_in 1, every
    /// other array fan_in H. LSTM forget-gate biases start at +1.
    static RecurrentModel initialized(RecurrentKind kind, std::size_t hidden_size, std::uint64_t seed) {
        RecurrentModel m = zeros(kind, hidden_size);
        Rng rng(seed);
        const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
        for (auto& a : m.arrays_) {
            const double bound = a.name.starts_with("W_x") ? 1.0 : hidden_bound;
            for (double& v : a.values) v = rng.uniform(-bound, bound);
        }
        if (kind == RecurrentKind::lstm) {
            for (double& v : m.array("b_f").values) v = 1.0;
        }
        return m;
    }

    [[nodiscard]] RecurrentKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t hidden_size() const noexcept { return hidden_; }
    [[nodiscard]] static constexpr std::size_t input_size() noexcept { return 1; }
    [[nodiscard]] std::uint64_t revision() const noexcept { return revision_; }

    [[nodiscard]] const std::vector<WeightArray>& arrays() const noexcept { return arrays_; }
    [[nodiscard]] std::vector<WeightArray>& mutable_arrays() noexcept {
        ++revision_;
        return arrays_;
    }

    [[nodiscard]] const WeightArray& array(std::string_view name) const {
        for (const auto& a : arrays_) if (a.name == name) return a;
        throw Error(ErrorCode::structural, "RecurrentModel: no weight array named '" + std::string(name) + "'");
    }
    [[nodiscard]] WeightArray& array(std::string_view name) {
        for (auto& a : arrays_) {
            if (a.name == name) {
                ++revision_;
                return a;
            }
        }
        throw Error(ErrorCode::structural, "RecurrentModel: no weight array named '" + std::string(name) + "'");
    }

    [[nodiscard]] std::size_t parameter_count() const noexcept {
        std::size_t n = 0;
        for (const auto& a : arrays_) n += a.values.size();
        return n;
    }

    /// Checks array names and shapes against the layout for kind/hidden_size.
    void validate() const {
        const RecurrentModel ref = zeros(kind_, hidden_);
        if (ref.arrays_.size() != arrays_.size()) {
            throw Error(ErrorCode::structural, "RecurrentModel: wrong number of weight arrays");
        }
        for (std::size_t i = 0; i < arrays_.size(); ++i) {
            const auto& a = arrays_[i];
            const auto& r = ref.arrays_[i];
            if (a.name != r.name || a.rows != r.rows || a.cols != r.cols || a.values.size() != r.values.size()) {
                throw Error(ErrorCode::structural, "RecurrentModel: array '" + a.name + "' has inconsistent shape");
            }
        }
    }

    [[nodiscard]] bool all_finite() const noexcept {
        for (const auto& a : arrays_)
            for (double v : a.values)
                if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const RecurrentModel& a, const RecurrentModel& b) {
        if (a.kind_ != b.kind_ || a.hidden_ != b.hidden_ || a.arrays_.size() != b.arrays_.size()) return false;
        for (std::size_t i = 0; i < a.arrays_.size(); ++i) {
            if (a.arrays_[i].name != b.arrays_[i].name || a.arrays_[i].values != b.arrays_[i].values) return false;
        }
        return true;
    }

private:
    RecurrentKind kind_ = RecurrentKind::lstm;
    std::size_t hidden_ = 0;
    std::vector<WeightArray> arrays_;
    std::uint64_t revision_ = 0;
};

/// Gradients share the model's array layout.
using Gradients = std::vector<WeightArray>;

inline Gradients zero_gradients(const RecurrentModel& m) {
    Gradients g = m.arrays();
    for (auto& a : g) std::fill(a.values.begin(), a.values.end(), 0.0);
    return g;
}

inline double global_norm(const Gradients& g) {
    double s = 0.0;
    for (const auto& a : g)
        for (double v : a.values) s += v * v;
    return std::sqrt(s);
}

/// Rescales g so its global norm is at most `threshold`; returns the norm before clipping.
inline double clip_global_norm(Gradients& g, double threshold) {
    const double norm = global_norm(g);
    if (norm > threshold) {
        const double scale = threshold / norm;
        for (auto& a : g)
            for (double& v : a.values) v *= scale;
    }
    return norm;
}

}  // namespace tsf::neural
