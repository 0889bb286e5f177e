#pragma once

#include <fstream>
#include <string>

#include "tsforecast/error.hpp"
#include "tsforecast/io/json.hpp"
#include "tsforecast/neural/train.hpp"

namespace tsf::io {

inline constexpr const char* kModelFormat = "tsforecast.recurrent/1";

/**
 * Weight file layout:
 *   format      "tsforecast.recurrent/1"
 *   kind        "SimpleRNN" | "LSTM"
 *   input_size  1
 *   hidden_size H
 *   config      TrainConfig record
 *   scaler      {min, max} of the training span
 *   arrays      [{name, shape: [rows, cols], data: row-major values}]
 *   report      TrainReport (optional on read)
 */
inline Json model_to_json(const neural::TrainedModel& t) {
    Json arrays = Json::array();
    for (const auto& a : t.model.arrays()) {
        arrays.push_back(Json{{"name", a.name}, {"shape", {a.rows, a.cols}}, {"data", a.values}});
    }
    return Json{{"format", kModelFormat},
                {"kind", std::string(neural::to_string(t.model.kind()))},
                {"input_size", neural::RecurrentModel::input_size()},
                {"hidden_size", t.model.hidden_size()},
                {"config", to_json(t.config)},
                {"scaler", Json{{"min", t.scaler.min}, {"max", t.scaler.max}}},
                {"arrays", arrays},
                {"report", to_json(t.report)}};
}

inline neural::TrainedModel model_from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != kModelFormat) {
            throw Error(ErrorCode::structural, "model file: unsupported format '" + j.at("format").get<std::string>() + "'");
        }
        if (j.at("input_size").get<std::size_t>() != 1) throw Error(ErrorCode::structural, "model file: input_size must be 1");
        neural::TrainedModel t;
        const auto kind = neural::parse_kind(j.at("kind").get<std::string>());
        const auto hidden = j.at("hidden_size").get<std::size_t>();
        t.model = neural::RecurrentModel::zeros(kind, hidden);
        const auto& arrays = j.at("arrays");
        if (arrays.size() != t.model.arrays().size()) {
            throw Error(ErrorCode::structural, "model file: expected " + std::to_string(t.model.arrays().size()) +
                                                   " arrays, found " + std::to_string(arrays.size()));
        }
        for (const auto& a : arrays) {
            auto& dst = t.model.array(a.at("name").get<std::string>());
            const auto shape = a.at("shape").get<std::vector<std::size_t>>();
            auto data = a.at("data").get<std::vector<double>>();
            if (shape.size() != 2 || shape[0] != dst.rows || shape[1] != dst.cols || data.size() != dst.values.size()) {
                throw Error(ErrorCode::structural, "model file: shape mismatch for " + dst.name);
            }
            dst.values = std::move(data);
        }
        t.model.validate();
        t.config = train_config_from_json(j.at("config"));
        t.scaler.min = j.at("scaler").at("min").get<double>();
        t.scaler.max = j.at("scaler").at("max").get<double>();
        if (j.contains("report")) {
            const auto& r = j.at("report");
            t.report.loss_history = r.at("loss_history").get<std::vector<double>>();
            t.report.final_loss = r.at("final_loss").get<double>();
            t.report.epochs_run = r.at("epochs_run").get<std::size_t>();
        }
        return t;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::structural, std::string("model file: ") + e.what());
    }
}

inline void save_model(const std::string& path, const neural::TrainedModel& t) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ingestion, "cannot write '" + path + "'");
    out << model_to_json(t).dump(2) << '\n';
}

inline neural::TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ingestion, "cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ingestion, "model file '" + path + "': " + e.what());
    }
    return model_from_json(j);
}

}  // namespace tsf::io
