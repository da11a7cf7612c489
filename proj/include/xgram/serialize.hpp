#pragma once

#include <string>

#include "json.hpp"
#include "xgram/models.hpp"

namespace xgram {

/// Field names follow ModelSpec; tail_index_alpha is null when absent.
nlohmann::json model_to_json(const ModelSpec& spec);

/// Missing fields take ModelSpec defaults; unknown fields are rejected.
ModelSpec model_from_json(const nlohmann::json& j);

/// Preset name, inline JSON object, or path to a JSON file.
ModelSpec parse_model_argument(const std::string& text);

/// Reads a whole JSON document; DataError on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);

}  // namespace xgram
