// Writes the synthetic monthly inflation series shipped in data/.
// Usage: sample_make_synthetic_data [output.csv]

#include <cmath>
#include <cstdio>
#include <fstream>

#include "tsforecast/io/csv.hpp"
#include "tsforecast/tsforecast.hpp"

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : "synthetic_monthly_inflation.csv";
    tsf::Rng rng(20100101);
    const std::vector<double> phi{0.9}, theta{0.3};
    auto v = tsf::simulate_arma(phi, theta, 0.0, 0.7, 156, rng);
    for (std::size_t t = 0; t < v.size(); ++t) {
        const double month = static_cast<double>(t);
        // slow swell around 2015-2016, then a surge through 2022
        double level = 11.0 + 5.0 * std::exp(-std::pow((month - 75.0) / 14.0, 2.0));
        if (t >= 144) level += 1.1 * (month - 143.0);
        v[t] = std::round((level + v[t]) * 10.0) / 10.0;
    }
    const tsf::TimeSeries series(v, {2010, 1});
    std::ofstream out(path);
    tsf::io::write_series(out, series);
    std::printf("wrote %zu months (%s to %s) to %s\n", series.size(), series.start().to_string().c_str(),
                series.end().to_string().c_str(), path);
}
