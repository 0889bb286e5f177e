#pragma once

#include <cstddef>
#include <cstdio>
#include <map>
#include <string>

namespace tsf {

enum class Tail { left, right };

/// Outcome of a hypothesis test (ADF, KPSS, Ljung-Box).
struct TestReport {
    std::string test;
    double statistic = 0.0;
    double p_value = 1.0;
    /// True when the statistic fell outside the tabulated range and the p-value is a bound.
    bool p_value_clipped = false;
    /// Human-readable p-value, e.g. "0.4615", ">= 0.10", "<= 0.01".
    std::string p_value_display;
    /// Significance level -> critical value.
    std::map<double, double> critical_values;
    bool reject_null = false;
    std::size_t lags_used = 0;
    std::size_t nobs = 0;
    Tail tail = Tail::left;
    std::string null_hypothesis;
};

/// Significance level used for `reject_null`.
inline constexpr double kDecisionLevel = 0.05;

namespace detail {

inline std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", p);
    return buf;
}

}  // namespace detail

}  // namespace tsf
