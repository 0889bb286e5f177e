#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsf {

/// Stable error identifiers. The names are part of the CLI/JSON contract.
enum class ErrorCode {
    degenerate_input,
    invalid_value,
    bounds,
    state_corruption,
    zero_range,
    rank_deficiency,
    invalid_dof,
    convergence,
    search_failure,
    structural,
    divergence,
    mape_undefined,
    ingestion,
    config,
    comparison_failure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::invalid_value: return "invalid_value";
    case ErrorCode::bounds: return "bounds";
    case ErrorCode::state_corruption: return "state_corruption";
    case ErrorCode::zero_range: return "zero_range";
    case ErrorCode::rank_deficiency: return "rank_deficiency";
    case ErrorCode::invalid_dof: return "invalid_dof";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::search_failure: return "search_failure";
    case ErrorCode::structural: return "structural";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::mape_undefined: return "mape_undefined";
    case ErrorCode::ingestion: return "ingestion";
    case ErrorCode::config: return "config";
    case ErrorCode::comparison_failure: return "comparison_failure";
    }
    return "unknown";
}

/// Numerical failures (as opposed to bad input data) map to CLI exit code 2.
constexpr bool is_numerical(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::rank_deficiency:
    case ErrorCode::convergence:
    case ErrorCode::search_failure:
    case ErrorCode::divergence:
    case ErrorCode::comparison_failure:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tsf
