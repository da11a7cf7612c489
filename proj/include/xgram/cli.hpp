#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xgram/models.hpp"

namespace xgram::cli {

/// Resolved parameters of one run: config-file fields overridden by flags.
struct RunConfig {
    std::string command;
    std::optional<std::string> input;
    std::optional<ModelSpec> model;       // data-generating model (instead of input)
    std::optional<ModelSpec> null_model;  // null for Monte Carlo centering; defaults to model
    std::size_t n = 10000;
    double p0 = 0.05;
    std::string set = "upper";
    std::string g = "one";
    std::string variant = "discretized";
    std::string centering = "theoretical";
    std::size_t grid_size = 0;  // 0: Fourier grid of the sample; K: pi k / K, k = 0..K
    std::optional<std::size_t> eta;
    bool self_center = false;
    std::optional<std::size_t> max_lag;
    double theta = 1.0 / 50.0;
    std::size_t reps = 4000;
    std::size_t centering_reps = 2000;
    std::size_t limit_reps = 20000;
    std::size_t H = 0;  // 0: default truncation per use
    double level = 0.05;
    double sigma = 1.0;
    std::string kind = "gr";
    std::vector<std::string> quantiles;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string out;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// Every result-affecting field. workers and out are omitted: they never
/// change an artifact's content.
nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

/**
 * Entry point of the command-line tool: args exclude the program name.
 * Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xgram::cli
