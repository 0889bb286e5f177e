// Fits an ARIMA model chosen by stepwise AIC search to a monthly CSV and prints
// a 12-month forecast with 95% intervals.
//
//   sample_forecast_from_csv data/synthetic_monthly_inflation.csv

#include <cstdio>
#include <iostream>

#include "tsforecast/io/csv.hpp"
#include "tsforecast/tsforecast.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: " << argv[0] << " series.csv\n";
        return 1;
    }
    try {
        const auto series = tsf::io::read_series(argv[1]);
        const auto [fit, trace] = tsf::arima::stepwise_search(series);
        std::printf("selected ARIMA%s, AIC %.3f after %zu candidates\n", fit.order.to_string().c_str(), fit.aic,
                    trace.evaluated.size());

        const auto fc = tsf::arima::forecast(fit, 12, 0.95);
        for (std::size_t h = 0; h < fc.horizon; ++h) {
            std::printf("%s  %8.3f  [%8.3f, %8.3f]\n", fc.start.advanced(static_cast<long>(h)).to_string().c_str(),
                        fc.point[h], fc.lower[h], fc.upper[h]);
        }
    } catch (const tsf::Error& e) {
        std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
        return tsf::is_numerical(e.code()) ? 2 : 1;
    }
}
