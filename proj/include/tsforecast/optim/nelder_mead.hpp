#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace tsf::optim {

struct NelderMeadOptions {
    /// Converged when (f_worst - f_best) <= rel_tol * (|f_best| + rel_tol).
    double rel_tol = 1e-8;
    int max_iterations = 1000;
    /// Initial simplex edge per coordinate (scalar applied to every coordinate).
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization (standard reflection/expansion/contraction/shrink
/// coefficients 1, 2, 0.5, 0.5). Non-finite objective values are treated as +inf.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const NelderMeadOptions& opts = {}) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    if (n == 0) {
        res.x = std::move(x0);
        res.value = eval(res.x);
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    for (;;) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        const double spread = fv[worst] - fv[best];
        if (std::isfinite(fv[best]) && spread <= opts.rel_tol * (std::abs(fv[best]) + opts.rel_tol)) {
            res.converged = true;
            break;
        }
        if (res.iterations >= opts.max_iterations) break;
        ++res.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
        const double fr = eval(xr);

        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }

        const bool outside = fr < fv[worst];
        for (std::size_t j = 0; j < n; ++j) {
            xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j])
                            : centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
        }
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }

        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            fv[i] = eval(pts[i]);
        }
    }

    const auto best_it = std::min_element(fv.begin(), fv.end());
    res.value = *best_it;
    res.x = pts[static_cast<std::size_t>(best_it - fv.begin())];
    return res;
}

}  // namespace tsf::optim
