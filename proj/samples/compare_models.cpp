// Holds out the last year of a monthly CSV and ranks ARIMA, SimpleRNN and LSTM on it.
//
//   sample_compare_models data/synthetic_monthly_inflation.csv

#include <cstdio>
#include <iostream>

#include "tsforecast/io/csv.hpp"
#include "tsforecast/tsforecast.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: " << argv[0] << " series.csv\n";
        return 1;
    }
    using namespace tsf::evaluation;
    try {
        const auto series = tsf::io::read_series(argv[1]);
        tsf::neural::TrainConfig cfg;
        cfg.hidden_size = 16;
        cfg.epochs = 100;

        const std::vector<ModelSpec> specs{
            {"arima(1,0,1)", ArimaSpec{{1, 0, 1}}},
            {"auto-arima", AutoArimaSpec{}},
            {"rnn", NeuralSpec{tsf::neural::RecurrentKind::simple_rnn, cfg}},
            {"lstm", NeuralSpec{tsf::neural::RecurrentKind::lstm, cfg}},
        };
        const auto cmp = compare(series, 12, specs);
        std::printf("%-14s %-15s %8s %8s %8s\n", "model", "mode", "RMSE", "MAE", "MAPE%");
        for (const auto& r : cmp.ranking) {
            std::printf("%-14s %-15s %8.3f %8.3f %8.2f\n", r.id.c_str(), r.prediction_mode.c_str(), r.metrics->rmse,
                        r.metrics->mae, r.metrics->mape);
        }
        for (const auto& r : cmp.failures) std::printf("%-14s failed: %s\n", r.id.c_str(), r.failure.c_str());
    } catch (const tsf::Error& e) {
        std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
        return tsf::is_numerical(e.code()) ? 2 : 1;
    }
}
