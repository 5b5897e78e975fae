// Run configuration: one JSON document describing the chain, motion,
// noise, filter, and bus timing for a run. Configs round-trip through
// load/save and hash stably, so every experiment is archivable and
// reproducible from (config, seed).

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "chaintrack/bus.hpp"
#include "chaintrack/chain.hpp"
#include "chaintrack/estimator.hpp"
#include "chaintrack/synth.hpp"
#include "chaintrack/trajectory.hpp"

namespace chaintrack {

struct RunConfig {
    std::string name = "run";
    ChainSpec chain;
    TrajectorySpec trajectory;
    NoiseSpec noise;
    FilterParams filter;
    ScheduleModel schedule;
    QuantSpec quant;
    double correction_rate_hz = 30.0;  // ideal-pipeline correction cadence
    std::uint64_t seed = 0;
    std::string output_dir = "out";
};

nlohmann::json to_json(const RunConfig& config);

/// Parses and validates; ConfigError messages name the offending field.
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

/// FNV-1a over the canonical (key-sorted) serialization.
std::string config_hash(const RunConfig& config);

}  // namespace chaintrack
