#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hfm/estimators.hpp"
#include "hfm/ingest.hpp"
#include "hfm/simulate.hpp"

namespace hfm {

enum class OosScheme { fixed, recursive };

struct OosSplit {
    std::size_t train_len = 200;
    std::size_t test_len = 40;
    OosScheme scheme = OosScheme::fixed;
};

/// Everything the command-line pipeline needs.
struct PipelineConfig {
    CleanConfig clean;
    PreAvgConfig preavg;
    double naive_delta = 300.0;   ///< 5-minute grid for the naive estimator
    double preavg_delta = 60.0;   ///< 1-minute grid for pre-averaging
    double bipower_delta = 300.0;
    EstimatorKind estimator = EstimatorKind::preavg;
    SimConfig sim;
    OosSplit oos;
    std::vector<std::string> models = {"19", "20", "21", "22", "23", "24", "25", "26", "27", "34", "35"};
    std::vector<int> horizons = {1};
    bool standardize_tvol = false;
    std::string symbol = "SIM";
};

/**
 * Reads a JSON document with optional sections "clean", "preavg", "grid", "simulate",
 * "oos" and top-level keys "estimator", "models", "horizons", "standardize_tvol", "symbol".
 * Unknown keys are rejected so typos do not silently fall back to defaults.
 */
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PipelineConfig& cfg);

}  // namespace hfm
