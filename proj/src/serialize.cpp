#include "xgram/serialize.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "xgram/error.hpp"

namespace xgram {

nlohmann::json model_to_json(const ModelSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["df"] = spec.df;
    j["phi"] = spec.phi;
    j["theta_ma"] = spec.theta_ma;
    j["omega"] = spec.omega;
    j["alpha1"] = spec.alpha1;
    j["beta1"] = spec.beta1;
    j["ar_vol"] = spec.ar_vol;
    j["vol_sd"] = spec.vol_sd;
    j["burn_in"] = spec.burn_in;
    j["unit_variance_noise"] = spec.unit_variance_noise;
    j["tail_index_alpha"] = spec.tail_index_alpha ? nlohmann::json(*spec.tail_index_alpha) : nlohmann::json(nullptr);
    return j;
}

ModelSpec model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("model spec must be a JSON object");
    }
    static const std::set<std::string> known = {"kind",   "df",     "phi",    "theta_ma", "omega",
                                                "alpha1", "beta1",  "ar_vol", "vol_sd",   "burn_in",
                                                "unit_variance_noise", "tail_index_alpha"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("model spec: unknown field '" + key + "'");
        }
    }
    if (!j.contains("kind")) {
        throw std::invalid_argument("model spec: missing field 'kind'");
    }
    try {
        ModelSpec s;
        s.kind = model_kind_from_string(j.at("kind").get<std::string>());
        auto read = [&](const char* key, auto& field) {
            if (j.contains(key)) {
                field = j.at(key).get<std::decay_t<decltype(field)>>();
            }
        };
        read("df", s.df);
        read("phi", s.phi);
        read("theta_ma", s.theta_ma);
        read("omega", s.omega);
        read("alpha1", s.alpha1);
        read("beta1", s.beta1);
        read("ar_vol", s.ar_vol);
        read("vol_sd", s.vol_sd);
        read("burn_in", s.burn_in);
        read("unit_variance_noise", s.unit_variance_noise);
        if (j.contains("tail_index_alpha") && !j.at("tail_index_alpha").is_null()) {
            s.tail_index_alpha = j.at("tail_index_alpha").get<double>();
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("model spec: ") + e.what());
    }
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("'" + path + "' is not valid JSON: " + e.what());
    }
}

ModelSpec parse_model_argument(const std::string& text) {
    if (auto preset = preset_by_name(text)) {
        return *preset;
    }
    if (!text.empty() && text.front() == '{') {
        try {
            return model_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(std::string("model: invalid inline JSON: ") + e.what());
        }
    }
    std::ifstream probe(text);
    if (!probe) {
        throw std::invalid_argument("model '" + text + "' is neither a preset, inline JSON, nor a readable file");
    }
    return model_from_json(read_json_file(text));
}

}  // namespace xgram
