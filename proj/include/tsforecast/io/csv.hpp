#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"

namespace tsf::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

inline Error ingestion_error(std::size_t row, const std::string& what) {
    return Error(ErrorCode::ingestion, "row " + std::to_string(row) + ": " + what);
}

}  // namespace detail

/// Parses "YYYY-MM".
inline std::optional<Period> parse_period(std::string_view s) {
    s = detail::trim(s);
    if (s.size() != 7 || s[4] != '-') return std::nullopt;
    int year = 0, month = 0;
    auto [p1, e1] = std::from_chars(s.data(), s.data() + 4, year);
    auto [p2, e2] = std::from_chars(s.data() + 5, s.data() + 7, month);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != s.data() + 4 || p2 != s.data() + 7) return std::nullopt;
    if (month < 1 || month > 12) return std::nullopt;
    return Period{year, month};
}

/**
 * Reads the two-column CSV schema `period,value` (header required, periods "YYYY-MM",
 * consecutive months). Row numbers in errors count the header as row 1.
 */
inline TimeSeries read_series(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    bool have_header = false;
    std::optional<Period> start, last;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view text = detail::trim(line);
        if (text.empty()) continue;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw detail::ingestion_error(row, "expected exactly two comma-separated columns");
        }
        const auto first = detail::trim(text.substr(0, comma));
        const auto second = detail::trim(text.substr(comma + 1));
        if (!have_header) {
            if (detail::lower(first) != "period" || detail::lower(second) != "value") {
                throw detail::ingestion_error(row, "header must be 'period,value'");
            }
            have_header = true;
            continue;
        }
        const auto period = parse_period(first);
        if (!period) throw detail::ingestion_error(row, "period '" + std::string(first) + "' is not YYYY-MM");
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(second.data(), second.data() + second.size(), value);
        if (ec != std::errc{} || ptr != second.data() + second.size() || !std::isfinite(value)) {
            throw detail::ingestion_error(row, "value '" + std::string(second) + "' is not a finite decimal");
        }
        if (last) {
            if (*period == *last) throw detail::ingestion_error(row, "duplicate period " + period->to_string());
            if (*period < *last) throw detail::ingestion_error(row, "period " + period->to_string() + " out of order");
            if (*period != last->advanced(1)) {
                throw detail::ingestion_error(row, "gap: expected " + last->advanced(1).to_string() + ", found " +
                                                       period->to_string());
            }
        } else {
            start = period;
        }
        last = period;
        values.push_back(value);
    }
    if (!have_header) throw Error(ErrorCode::ingestion, "empty file: header row 'period,value' required");
    if (values.empty()) throw Error(ErrorCode::ingestion, "no data rows after header");
    return TimeSeries(std::move(values), *start);
}

inline TimeSeries read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ingestion, "cannot open '" + path + "'");
    return read_series(in);
}

inline void write_series(std::ostream& out, const TimeSeries& series) {
    out << "period,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, series[i]);
        out << series.period_at(i).to_string() << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf))
            << '\n';
    }
}

}  // namespace tsf::io
