// Experiment harness: ideal-pipeline chain tracking plus the standard
// evaluations (yaw recovery, acceleration-prediction accuracy, dead-
// reckoning drift characterization, correction accuracy). Every report is
// reproducible bit-for-bit from (config, seed).

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaintrack/config.hpp"
#include "chaintrack/metrics.hpp"

namespace chaintrack {

/// Sample-synchronous tracking with corrections at a fixed cadence and
/// fresh, unquantized parent data: the no-bus baseline pipeline.
struct TrackedRunOptions {
    double correction_rate_hz = 30.0;
    bool enable_corrections = true;
    std::vector<Quat> initial_estimates;  // per limb; empty = identity
    FilterParams params;
};

struct TrackedCorrection {
    int limb_id = 0;
    int sample_index = 0;
    CorrectionResult corr;
};

struct TrackedRunResult {
    std::vector<std::vector<Quat>> estimates;  // [limb][sample]
    std::vector<TrackedCorrection> corrections;
};

TrackedRunResult run_tracked_chain(const ChainSpec& chain,
                                   const std::vector<std::vector<ImuSample>>& streams,
                                   const TrackedRunOptions& options);

struct ScenarioReport {
    std::string scenario;
    double rmse = 0.0;
    double mae = 0.0;
    int n = 0;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> extra;  // named extra metrics

    double extra_value(const std::string& key) const;
};

struct ExperimentOutput {
    ScenarioReport report;
    std::vector<ErrorSeries> series;
};

/// Child starts with a 90 degree yaw error; a lateral root excitation
/// corrects it within the run. Reports the final yaw error over seeded
/// repetitions (rmse/mae in degrees); series hold the last repetition's
/// per-correction yaw trace and lateral-acceleration magnitude.
ExperimentOutput experiment_yaw_recovery(const RunConfig& config, int n_repetitions = 20);

/// World-frame joint-acceleration estimation error with and without
/// rotation-induced-acceleration removal (removal at full weight).
/// rmse/mae cover the prediction-enabled arm; extras carry the disabled arm.
ExperimentOutput experiment_accel_prediction(const RunConfig& config);

/// Dead-reckoning drift on a still chain over seeded repetitions:
/// time-to-{0.25, 0.5, 1.0} degrees and drift after {5, 20, 60} s.
/// rmse/mae cover the drift-after-60s values.
ExperimentOutput experiment_drift_characterization(const RunConfig& config,
                                                   int n_repetitions = 50);

/// Correction angles on a drift-free run: rmse/mae of the filtered angle
/// phi (degrees, target zero); extras carry the raw angle theta.
ExperimentOutput experiment_correction_accuracy(const RunConfig& config);

/// Dispatch by name: yaw_recovery, accel_prediction, drift_characterization,
/// correction_accuracy. n_repetitions <= 0 uses each experiment's default.
ExperimentOutput run_experiment(const std::string& name, const RunConfig& config,
                                int n_repetitions = 0);

std::vector<std::string> experiment_names();

nlohmann::json report_to_json(const ScenarioReport& report);

/// CSV rows: scenario,metric,value,n,seed
void write_report_csv(const ScenarioReport& report, const std::string& path);
void write_report_json(const ScenarioReport& report, const std::string& path);

/// Gnuplot-style columns: index then one column per series.
void write_series_data(const std::vector<ErrorSeries>& series, const std::string& path);

}  // namespace chaintrack
