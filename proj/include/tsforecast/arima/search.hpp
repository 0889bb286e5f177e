#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tsforecast/arima/estimate.hpp"
#include "tsforecast/arima/types.hpp"
#include "tsforecast/diagnostics/unit_root.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/transforms.hpp"

namespace tsf::arima {

struct SearchConfig {
    int max_p = 5;
    int max_q = 5;
    int max_d = 2;
    /// Fixed differencing order; when unset d is chosen by repeated KPSS tests.
    std::optional<int> d;
    /// Upper bound on the number of candidate fits, including the starting set.
    int max_steps = 94;
    /// Minimum AIC improvement required to move.
    double improvement = 1e-6;
    /// Candidates with an AR or MA root of modulus below this are rejected as near-unit-root.
    double min_root_modulus = 1.01;
    FitOptions fit;
    KpssOptions kpss;
};

struct CandidateResult {
    ArimaOrder order;
    bool with_intercept = true;
    std::optional<double> aic;  // empty when the fit failed
    std::string failure;
};

struct SearchMove {
    std::string phase;  // "start" or "neighbor"
    ArimaOrder order;
    bool with_intercept = true;
    double aic = 0.0;
};

struct SearchTrace {
    std::vector<CandidateResult> evaluated;
    ArimaOrder best;
    bool best_with_intercept = true;
    std::vector<SearchMove> step_log;
    /// KPSS reports behind the choice of d, one per level tried.
    std::vector<TestReport> d_selection;
    bool hit_step_limit = false;
};

class SearchError : public Error {
public:
    SearchError(const std::string& message, SearchTrace trace)
        : Error(ErrorCode::search_failure, message), trace_(std::move(trace)) {}

    [[nodiscard]] const SearchTrace& trace() const noexcept { return trace_; }

private:
    SearchTrace trace_;
};

/// Difference until KPSS no longer rejects level stationarity, at most max_d times.
inline int select_d_by_kpss(const TimeSeries& series, int max_d, const KpssOptions& opts,
                            std::vector<TestReport>* reports = nullptr) {
    int d = 0;
    while (d < max_d) {
        const auto w = difference(series, d).first;
        if (w.size() < kMinUnitRootLength) break;
        const auto rep = kpss_test(w, opts);
        if (reports) reports->push_back(rep);
        if (!rep.reject_null) break;
        ++d;
    }
    return d;
}

namespace detail {

/// AIC comparison with parsimony tie-break (smaller p + q, then smaller q).
inline bool better(const CandidateResult& a, const CandidateResult& b, double tol) {
    if (!a.aic) return false;
    if (!b.aic) return true;
    if (*a.aic < *b.aic - tol) return true;
    if (*a.aic > *b.aic + tol) return false;
    const int ka = a.order.p + a.order.q, kb = b.order.p + b.order.q;
    if (ka != kb) return ka < kb;
    return a.order.q < b.order.q;
}

}  // namespace detail

/**
 * Stepwise AIC search over ARIMA(p, d, q).
 *
 * Starts from (2,d,2), (1,d,0), (0,d,1), (0,d,0) with intercept, then scans the
 * neighbors p-1, p+1, q-1, q+1 and the intercept toggle of the current best in that
 * order, moving to the first neighbor that beats it. Failed candidates stay in the
 * trace with their failure reason.
 */
inline std::pair<ArimaFit, SearchTrace> stepwise_search(const TimeSeries& series, const SearchConfig& cfg = {}) {
    SearchTrace trace;
    const int d = cfg.d ? *cfg.d : select_d_by_kpss(series, cfg.max_d, cfg.kpss, &trace.d_selection);

    using Key = std::tuple<int, int, bool>;
    std::map<Key, std::size_t> index;  // key -> position in trace.evaluated
    std::map<Key, ArimaFit> fits;
    int budget = cfg.max_steps;

    auto evaluate = [&](int p, int q, bool c) -> std::optional<std::size_t> {
        const Key key{p, q, c};
        if (auto it = index.find(key); it != index.end()) return it->second;
        if (p < 0 || q < 0 || p > cfg.max_p || q > cfg.max_q) return std::nullopt;
        if (budget <= 0) {
            trace.hit_step_limit = true;
            return std::nullopt;
        }
        --budget;
        CandidateResult cand{{p, d, q}, c, std::nullopt, {}};
        try {
            auto f = fit(series, cand.order, c, cfg.fit);
            const double ar_root = min_ar_root_modulus(f.ar_coeffs);
            const double ma_root = min_ma_root_modulus(f.ma_coeffs);
            if (ar_root < cfg.min_root_modulus || ma_root < cfg.min_root_modulus) {
                throw Error(ErrorCode::convergence, "near-unit root (AR " + std::to_string(ar_root) + ", MA " +
                                                        std::to_string(ma_root) + ")");
            }
            cand.aic = f.aic;
            fits.emplace(key, std::move(f));
        } catch (const Error& e) {
            cand.failure = std::string(to_string(e.code())) + ": " + e.what();
        }
        trace.evaluated.push_back(std::move(cand));
        index.emplace(key, trace.evaluated.size() - 1);
        return trace.evaluated.size() - 1;
    };

    std::optional<std::size_t> current;
    for (auto [p, q] : {std::pair{2, 2}, std::pair{1, 0}, std::pair{0, 1}, std::pair{0, 0}}) {
        const auto idx = evaluate(std::min(p, cfg.max_p), std::min(q, cfg.max_q), true);
        if (idx && (!current || detail::better(trace.evaluated[*idx], trace.evaluated[*current], cfg.improvement))) {
            current = idx;
        }
    }
    if (!current || !trace.evaluated[*current].aic) {
        throw SearchError("stepwise_search: every starting candidate failed", std::move(trace));
    }
    {
        const auto& c = trace.evaluated[*current];
        trace.step_log.push_back({"start", c.order, c.with_intercept, *c.aic});
    }

    bool moved = true;
    while (moved) {
        moved = false;
        const CandidateResult here = trace.evaluated[*current];
        const int p = here.order.p, q = here.order.q;
        const bool c = here.with_intercept;
        const std::tuple<int, int, bool> neighbors[] = {
            {p - 1, q, c}, {p + 1, q, c}, {p, q - 1, c}, {p, q + 1, c}, {p, q, !c}};
        for (const auto& [np, nq, nc] : neighbors) {
            const auto idx = evaluate(np, nq, nc);
            if (!idx) continue;
            if (detail::better(trace.evaluated[*idx], trace.evaluated[*current], cfg.improvement)) {
                current = idx;
                const auto& b = trace.evaluated[*idx];
                trace.step_log.push_back({"neighbor", b.order, b.with_intercept, *b.aic});
                moved = true;
                break;
            }
        }
    }

    const auto& best = trace.evaluated[*current];
    trace.best = best.order;
    trace.best_with_intercept = best.with_intercept;
    ArimaFit result = fits.at(Key{best.order.p, best.order.q, best.with_intercept});
    return {std::move(result), std::move(trace)};
}

}  // namespace tsf::arima
