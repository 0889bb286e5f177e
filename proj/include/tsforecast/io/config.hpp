#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include "tsforecast/arima/search.hpp"
#include "tsforecast/diagnostics/unit_root.hpp"
#include "tsforecast/error.hpp"
#include "tsforecast/io/json.hpp"
#include "tsforecast/neural/model.hpp"

namespace tsf::io {

/// Every tunable of a CLI run. Serialized in full into each report.
struct RunConfig {
    std::size_t test_length = 12;
    std::size_t horizon = 12;
    double level = 0.95;
    std::uint64_t seed = 42;
    std::string output_dir = ".";
    std::size_t acf_lags = 24;
    std::size_t ljung_box_lags = 12;
    AdfOptions adf;
    KpssOptions kpss;
    arima::SearchConfig search;
    neural::TrainConfig neural;
    neural::RecurrentKind neural_kind = neural::RecurrentKind::lstm;

    /// Training config with the run seed applied.
    [[nodiscard]] neural::TrainConfig train_config() const {
        auto c = neural;
        c.seed = seed;
        return c;
    }

    void validate() const {
        if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::config, "level must lie in (0, 1)");
        if (test_length == 0) throw Error(ErrorCode::config, "test_length must be positive");
        if (horizon == 0) throw Error(ErrorCode::config, "horizon must be positive");
        if (acf_lags == 0 || ljung_box_lags == 0) throw Error(ErrorCode::config, "lag counts must be positive");
        if (search.max_p < 0 || search.max_q < 0 || search.max_d < 0 || search.max_steps <= 0) {
            throw Error(ErrorCode::config, "search limits must be non-negative (max_steps positive)");
        }
        if (search.d && (*search.d < 0 || *search.d > search.max_d)) {
            throw Error(ErrorCode::config, "search.d must lie in [0, max_d]");
        }
        train_config().validate();
    }
};

namespace config_detail {

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <class T>
void read_optional(const Json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        out.reset();
    } else {
        out = j.at(key).get<T>();
    }
}

}  // namespace config_detail

inline Json to_json(const RunConfig& c) {
    using config_detail::optional_json;
    auto neural = to_json(c.train_config());
    return Json{
        {"test_length", c.test_length},
        {"horizon", c.horizon},
        {"level", c.level},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"acf_lags", c.acf_lags},
        {"ljung_box_lags", c.ljung_box_lags},
        {"adf", Json{{"max_lag", optional_json(c.adf.max_lag)}, {"select_by_aic", c.adf.select_by_aic}}},
        {"kpss", Json{{"bandwidth", optional_json(c.kpss.bandwidth)}}},
        {"search",
         Json{{"max_p", c.search.max_p},
              {"max_q", c.search.max_q},
              {"max_d", c.search.max_d},
              {"d", optional_json(c.search.d)},
              {"max_steps", c.search.max_steps},
              {"improvement", c.search.improvement},
              {"min_root_modulus", c.search.min_root_modulus},
              {"fit",
               Json{{"max_iterations", c.search.fit.max_iterations},
                    {"rel_tol", c.search.fit.rel_tol},
                    {"root_margin", c.search.fit.root_margin}}}}},
        {"neural_kind", std::string(neural::to_string(c.neural_kind))},
        {"neural", neural},
    };
}

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
inline RunConfig config_from_json(const Json& j, RunConfig c = {}) {
    using config_detail::read_optional;
    static const char* const known[] = {"test_length", "horizon", "level",  "seed",        "output_dir", "acf_lags",
                                        "ljung_box_lags", "adf",  "kpss",   "search",      "neural_kind", "neural"};
    try {
        if (!j.is_object()) throw Error(ErrorCode::config, "config must be a JSON object");
        for (const auto& [key, _] : j.items()) {
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) throw Error(ErrorCode::config, "unknown config key '" + key + "'");
        }
        c.test_length = j.value("test_length", c.test_length);
        c.horizon = j.value("horizon", c.horizon);
        c.level = j.value("level", c.level);
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.acf_lags = j.value("acf_lags", c.acf_lags);
        c.ljung_box_lags = j.value("ljung_box_lags", c.ljung_box_lags);
        if (j.contains("adf")) {
            const auto& a = j.at("adf");
            read_optional(a, "max_lag", c.adf.max_lag);
            c.adf.select_by_aic = a.value("select_by_aic", c.adf.select_by_aic);
        }
        if (j.contains("kpss")) read_optional(j.at("kpss"), "bandwidth", c.kpss.bandwidth);
        if (j.contains("search")) {
            const auto& s = j.at("search");
            c.search.max_p = s.value("max_p", c.search.max_p);
            c.search.max_q = s.value("max_q", c.search.max_q);
            c.search.max_d = s.value("max_d", c.search.max_d);
            read_optional(s, "d", c.search.d);
            c.search.max_steps = s.value("max_steps", c.search.max_steps);
            c.search.improvement = s.value("improvement", c.search.improvement);
            c.search.min_root_modulus = s.value("min_root_modulus", c.search.min_root_modulus);
            if (s.contains("fit")) {
                const auto& f = s.at("fit");
                c.search.fit.max_iterations = f.value("max_iterations", c.search.fit.max_iterations);
                c.search.fit.rel_tol = f.value("rel_tol", c.search.fit.rel_tol);
                c.search.fit.root_margin = f.value("root_margin", c.search.fit.root_margin);
            }
        }
        if (j.contains("neural_kind")) c.neural_kind = neural::parse_kind(j.at("neural_kind").get<std::string>());
        if (j.contains("neural")) {
            const auto& n = j.at("neural");
            c.neural = train_config_from_json(n, c.neural);
            if (n.contains("seed") && !j.contains("seed")) c.seed = c.neural.seed;
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::config, std::string("config: ") + e.what());
    }
    c.search.kpss = c.kpss;
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config, "cannot open config '" + path + "'");
    try {
        return config_from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::config, "config '" + path + "': " + e.what());
    }
}

}  // namespace tsf::io
