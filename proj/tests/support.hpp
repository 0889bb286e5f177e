#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tsforecast/random.hpp"
#include "tsforecast/series.hpp"

namespace test_support {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<double> random_vector(tsf::Rng& rng, std::size_t n, double lo = -50.0, double hi = 50.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

/// Scratch directory under the test's working directory, emptied on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::current_path() / ("scratch_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string monthly_csv(const std::vector<double>& values, tsf::Period start = {2010, 1}) {
    std::string s = "period,value\n";
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s,%.6f\n", start.advanced(static_cast<long>(i)).to_string().c_str(),
                      values[i]);
        s += buf;
    }
    return s;
}

}  // namespace test_support
