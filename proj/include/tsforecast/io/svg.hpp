#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tsforecast/arima/types.hpp"
#include "tsforecast/diagnostics/correlation.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"

// Static SVG charts: line plots of monthly series, forecast fans, prediction
// overlays and correlograms.
namespace tsf::io::svg {

struct Line {
    std::string label;
    Period start;
    std::vector<double> values;
    std::string color;
    bool dashed = false;
};

namespace detail {

constexpr double kWidth = 800, kHeight = 420;
constexpr double kLeft = 64, kRight = 24, kTop = 40, kBottom = 48;

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// "Nice" tick step covering `span` in about `target` intervals.
inline double tick_step(double span, int target = 6) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

class Frame {
public:
    Frame(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
        if (!(y1_ > y0_)) {
            y0_ -= 1.0;
            y1_ += 1.0;
        }
        const double pad = 0.05 * (y1_ - y0_);
        y0_ -= pad;
        y1_ += pad;
    }
    [[nodiscard]] double x(double v) const { return kLeft + (v - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
    [[nodiscard]] double y(double v) const { return kTop + (y1_ - v) / (y1_ - y0_) * (kHeight - kTop - kBottom); }
    [[nodiscard]] double y_min() const { return y0_; }
    [[nodiscard]] double y_max() const { return y1_; }
    [[nodiscard]] double x_min() const { return x0_; }
    [[nodiscard]] double x_max() const { return x1_; }

private:
    double x0_, x1_, y0_, y1_;
};

inline void open(std::ostringstream& o, const std::string& title) {
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text class=\"title\" x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
}

inline void y_axis(std::ostringstream& o, const Frame& f, const std::string& label) {
    const double step = tick_step(f.y_max() - f.y_min());
    for (double v = std::ceil(f.y_min() / step) * step; v <= f.y_max() + 1e-12; v += step) {
        const double y = f.y(v);
        o << "<line class=\"grid\" x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
          << num(kWidth - kRight) << "\" y2=\"" << num(y) << "\" stroke=\"#e5e5e5\"/>\n"
          << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
          << num(std::abs(v) < 1e-12 ? 0.0 : v) << "</text>\n";
    }
    o << "<text x=\"16\" y=\"" << num(kHeight / 2) << "\" transform=\"rotate(-90 16 " << num(kHeight / 2)
      << ")\" text-anchor=\"middle\">" << escape(label) << "</text>\n";
}

/// Year ticks for a month-index axis.
inline void time_axis(std::ostringstream& o, const Frame& f) {
    const int first_year = Period::from_index(static_cast<long>(std::ceil(f.x_min()))).year;
    const int last_year = Period::from_index(static_cast<long>(std::floor(f.x_max()))).year;
    const int span = last_year - first_year + 1;
    const int every = span > 16 ? 2 : 1;
    for (int year = first_year; year <= last_year; year += every) {
        const double idx = static_cast<double>(Period{year, 1}.index());
        if (idx < f.x_min() || idx > f.x_max()) continue;
        const double x = f.x(idx);
        o << "<line class=\"tick\" x1=\"" << num(x) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(x)
          << "\" y2=\"" << num(kHeight - kBottom + 5) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(x) << "\" y=\"" << num(kHeight - kBottom + 18) << "\" text-anchor=\"middle\">"
          << year << "</text>\n";
    }
    o << "<line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\""
      << num(kWidth - kRight) << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"black\"/>\n";
}

inline void polyline(std::ostringstream& o, const Frame& f, const Line& line, const std::string& cls) {
    o << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << line.color << "\" stroke-width=\"1.5\"";
    if (line.dashed) o << " stroke-dasharray=\"6 3\"";
    o << " points=\"";
    const double base = static_cast<double>(line.start.index());
    for (std::size_t i = 0; i < line.values.size(); ++i) {
        if (i) o << ' ';
        o << num(f.x(base + static_cast<double>(i))) << ',' << num(f.y(line.values[i]));
    }
    o << "\"/>\n";
}

inline void legend(std::ostringstream& o, const std::vector<Line>& lines) {
    double y = kTop + 8;
    for (const auto& l : lines) {
        const double x = kWidth - kRight - 150;
        o << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 24) << "\" y2=\"" << num(y)
          << "\" stroke=\"" << l.color << "\" stroke-width=\"2\"" << (l.dashed ? " stroke-dasharray=\"6 3\"" : "")
          << "/>\n<text x=\"" << num(x + 30) << "\" y=\"" << num(y + 4) << "\">" << escape(l.label) << "</text>\n";
        y += 16;
    }
}

inline Frame frame_for(const std::vector<Line>& lines, double extra_lo = std::numeric_limits<double>::infinity(),
                       double extra_hi = -std::numeric_limits<double>::infinity()) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = extra_lo, y1 = extra_hi;
    for (const auto& l : lines) {
        if (l.values.empty()) continue;
        x0 = std::min(x0, static_cast<double>(l.start.index()));
        x1 = std::max(x1, static_cast<double>(l.start.index() + static_cast<long>(l.values.size()) - 1));
        for (double v : l.values) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (!std::isfinite(x0)) throw Error(ErrorCode::degenerate_input, "svg: nothing to plot");
    return Frame(x0, x1, y0, y1);
}

}  // namespace detail

/// Multi-line time plot.
inline std::string lines_chart(const std::vector<Line>& lines, const std::string& title,
                               const std::string& y_label = "Inflation rate (%)") {
    const auto f = detail::frame_for(lines);
    std::ostringstream o;
    detail::open(o, title);
    detail::y_axis(o, f, y_label);
    detail::time_axis(o, f);
    for (const auto& l : lines) detail::polyline(o, f, l, "series");
    if (lines.size() > 1) detail::legend(o, lines);
    o << "</svg>\n";
    return o.str();
}

inline std::string series_chart(const TimeSeries& s, const std::string& title,
                                const std::string& y_label = "Inflation rate (%)") {
    return lines_chart({Line{"series", s.start(), s.vector(), "#1f77b4"}}, title, y_label);
}

/**
 * History plus forecast. Each horizon step gets one vertical
 * `<line class="interval-band">` spanning its prediction interval.
 * `actual` (optional, may be empty) is drawn over the forecast span.
 */
inline std::string forecast_chart(const TimeSeries& history, const arima::Forecast& fc, const std::string& title,
                                  const std::vector<double>& actual = {}) {
    std::vector<Line> lines{{"history", history.start(), history.vector(), "#1f77b4"},
                            {"forecast", fc.start, fc.point, "#d62728", true}};
    if (!actual.empty()) lines.push_back({"actual", fc.start, actual, "#2ca02c"});
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t h = 0; h < fc.horizon; ++h) {
        lo = std::min(lo, fc.lower[h]);
        hi = std::max(hi, fc.upper[h]);
    }
    const auto f = detail::frame_for(lines, lo, hi);
    std::ostringstream o;
    detail::open(o, title);
    detail::y_axis(o, f, "Inflation rate (%)");
    detail::time_axis(o, f);
    const double base = static_cast<double>(fc.start.index());
    for (std::size_t h = 0; h < fc.horizon; ++h) {
        const double x = f.x(base + static_cast<double>(h));
        o << "<line class=\"interval-band\" x1=\"" << detail::num(x) << "\" y1=\"" << detail::num(f.y(fc.lower[h]))
          << "\" x2=\"" << detail::num(x) << "\" y2=\"" << detail::num(f.y(fc.upper[h]))
          << "\" stroke=\"#f4a6a6\" stroke-width=\"4\"/>\n";
    }
    for (const auto& l : lines) detail::polyline(o, f, l, l.label);
    detail::legend(o, lines);
    char lvl[32];
    std::snprintf(lvl, sizeof lvl, "%g%% interval", 100.0 * fc.level);
    o << "<text x=\"" << detail::num(detail::kLeft + 8) << "\" y=\"" << detail::num(detail::kTop + 12) << "\">"
      << lvl << "</text>\n</svg>\n";
    return o.str();
}

/// Actual values against one model's predictions over the same periods.
inline std::string overlay_chart(Period start, const std::vector<double>& actual, const std::string& model,
                                 const std::vector<double>& predicted, const std::string& title) {
    return lines_chart({{"actual", start, actual, "#1f77b4"}, {model, start, predicted, "#ff7f0e", true}}, title);
}

/// Bar correlogram with the white-noise band.
inline std::string correlogram_chart(const CorrelationSequence& c, const std::string& title, std::size_t first_lag = 0) {
    const std::size_t max_lag = c.values.size() - 1;
    double lo = -c.confidence_band, hi = c.confidence_band;
    for (std::size_t k = first_lag; k <= max_lag; ++k) {
        lo = std::min(lo, c.values[k]);
        hi = std::max(hi, c.values[k]);
    }
    const detail::Frame f(static_cast<double>(first_lag) - 0.5, static_cast<double>(max_lag) + 0.5, std::min(lo, 0.0),
                          std::max(hi, 0.0));
    std::ostringstream o;
    detail::open(o, title);
    detail::y_axis(o, f, "correlation");
    using detail::num;
    for (double b : {c.confidence_band, -c.confidence_band}) {
        o << "<line class=\"band\" x1=\"" << num(detail::kLeft) << "\" y1=\"" << num(f.y(b)) << "\" x2=\""
          << num(detail::kWidth - detail::kRight) << "\" y2=\"" << num(f.y(b))
          << "\" stroke=\"#1f77b4\" stroke-dasharray=\"4 3\"/>\n";
    }
    o << "<line class=\"axis\" x1=\"" << num(detail::kLeft) << "\" y1=\"" << num(f.y(0)) << "\" x2=\""
      << num(detail::kWidth - detail::kRight) << "\" y2=\"" << num(f.y(0)) << "\" stroke=\"black\"/>\n";
    for (std::size_t k = first_lag; k <= max_lag; ++k) {
        const double x = f.x(static_cast<double>(k));
        o << "<line class=\"lag\" x1=\"" << num(x) << "\" y1=\"" << num(f.y(0)) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(f.y(c.values[k])) << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
        if (k % 4 == 0) {
            o << "<text x=\"" << num(x) << "\" y=\"" << num(detail::kHeight - detail::kBottom + 18)
              << "\" text-anchor=\"middle\">" << k << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

inline void write_file(const std::string& path, const std::string& svg) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ingestion, "cannot write '" + path + "'");
    out << svg;
}

}  // namespace tsf::io::svg
