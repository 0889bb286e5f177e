#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace tsf {

/// Seeded generator with distribution code that does not depend on the standard
/// library implementation, so sequences are identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal (Box-Muller, cached pair).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Simulates y_t = mu + sum phi_i (y_{t-i} - mu) + e_t + sum theta_j e_{t-j}, discarding `burn_in` values.
inline std::vector<double> simulate_arma(std::span<const double> phi, std::span<const double> theta,
                                         double mu, double sigma, std::size_t n, Rng& rng,
                                         std::size_t burn_in = 500) {
    const std::size_t total = n + burn_in;
    std::vector<double> x(total, 0.0), e(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        e[t] = sigma * rng.normal();
        double v = e[t];
        for (std::size_t i = 0; i < phi.size() && i < t; ++i) v += phi[i] * x[t - 1 - i];
        for (std::size_t j = 0; j < theta.size() && j < t; ++j) v += theta[j] * e[t - 1 - j];
        x[t] = v;
    }
    std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(burn_in), x.end());
    for (double& v : out) v += mu;
    return out;
}

inline std::vector<double> simulate_random_walk(std::size_t n, Rng& rng, double start = 0.0) {
    std::vector<double> out(n);
    double level = start;
    for (auto& v : out) {
        level += rng.normal();
        v = level;
    }
    return out;
}

inline std::vector<double> simulate_white_noise(std::size_t n, Rng& rng, double mu = 0.0,
                                                double sigma = 1.0) {
    std::vector<double> out(n);
    for (auto& v : out) v = mu + sigma * rng.normal();
    return out;
}

}  // namespace tsf
