#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsforecast/error.hpp"

namespace tsf {

/// A calendar month. Only monthly data is supported.
struct Period {
    int year = 2000;
    int month = 1;  // 1..12

    friend constexpr auto operator<=>(const Period&, const Period&) = default;

    [[nodiscard]] constexpr long index() const noexcept {
        return static_cast<long>(year) * 12 + (month - 1);
    }

    [[nodiscard]] static constexpr Period from_index(long idx) noexcept {
        long y = idx >= 0 ? idx / 12 : -((-idx + 11) / 12);
        return Period{static_cast<int>(y), static_cast<int>(idx - y * 12) + 1};
    }

    [[nodiscard]] constexpr Period advanced(long months) const noexcept {
        return from_index(index() + months);
    }

    [[nodiscard]] std::string to_string() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
        return buf;
    }
};

/// Ordered monthly observations. Immutable after construction.
class TimeSeries {
public:
    static constexpr int kFrequency = 12;

    TimeSeries() = default;

    explicit TimeSeries(std::vector<double> values, Period start = {})
        : values_(std::move(values)), start_(start) {
        if (start_.month < 1 || start_.month > 12) {
            throw Error(ErrorCode::invalid_value,
                        "start month must be in 1..12, got " + std::to_string(start_.month));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw Error(ErrorCode::invalid_value,
                            "non-finite observation at index " + std::to_string(i));
            }
        }
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& vector() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] Period start() const noexcept { return start_; }
    [[nodiscard]] Period end() const noexcept {
        return start_.advanced(static_cast<long>(values_.size()) - 1);
    }
    [[nodiscard]] Period period_at(std::size_t i) const noexcept {
        return start_.advanced(static_cast<long>(i));
    }
    [[nodiscard]] constexpr int frequency() const noexcept { return kFrequency; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    Period start_{};
};

inline void require_nonempty(const TimeSeries& s, const char* what) {
    if (s.empty()) {
        throw Error(ErrorCode::degenerate_input, std::string(what) + ": empty series");
    }
}

}  // namespace tsf
