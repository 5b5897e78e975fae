// Named, reproducible run configurations for the desk-scale experiments.
// All scenarios use a two-limb serial boom (0.5 m per limb) unless noted.

#pragma once

#include <string>
#include <vector>

#include "chaintrack/config.hpp"

namespace chaintrack {

// Sensor noise calibrated so a static run reproduces the reference
// magnitude errors: per-axis sigma = magnitude RMSE / sqrt(3).
inline constexpr double kAccelSigma = 0.043 / 1.7320508075688772;   // m/s^2
inline constexpr double kGyroSigma = 0.0027 / 1.7320508075688772;   // rad/s

// Constant gyro bias magnitude calibrated by sweep so the mean time for
// dead reckoning to drift 1 degree lands at ~29.7 s under the noise above.
inline constexpr double kGyroBiasMag = 5.877e-4;  // rad/s

// Ambient specific force a static sensor reads on the ground.
inline constexpr double kEarthField = 9.81;  // m/s^2

/// Build one of the named scenarios:
///   yaw_recovery          4 s free-fall run, still boom, ~7 m/s^2 mean
///                         lateral sinusoid at the root
///   drift_static          65 s still free-fall run (dead reckoning only)
///   accel_stationary      12 s still free-fall run
///   accel_slow            12 s free-fall run, avg |omega| 0.72 rad/s
///   accel_fast            12 s free-fall run, avg |omega| 2.13 rad/s
///   correction_stationary 12 s still run under Earth field
///   correction_moving     12 s run under Earth field, avg |omega| 1.0 rad/s
///   bus_moving            16 s free-fall run at 200 Hz, avg |omega| 1.0 rad/s
/// Throws ConfigError for unknown names.
RunConfig make_scenario(const std::string& name);

std::vector<std::string> scenario_names();

/// Rescale all limb angular-rate amplitudes so the time-average of
/// |omega(t)| pooled over limbs equals target_avg.
void scale_limb_rates(TrajectorySpec& traj, double target_avg);

/// Time-average of |omega(t)| pooled over all limbs.
double average_limb_rate(const TrajectorySpec& traj);

/// Deterministic unit vector for per-repetition gyro bias directions.
Vec3 seeded_unit_vector(std::uint64_t seed);

}  // namespace chaintrack
