// Ground-truth integration and IMU measurement synthesis.
//
// The truth side runs forward kinematics with analytic rigid-body
// acceleration (a_tip = a_base + R(dw x p + w x (w x p))), deliberately a
// different route from the estimator's velocity-differencing equations.
// The sensor model: the accelerometer reports specific force at the limb
// tip in the body frame (zero for a static chain in free fall; the ambient
// field appears additively), the gyro reports body angular rate plus a
// constant per-run bias plus white noise.

#pragma once

#include <cstdint>
#include <vector>

#include "chaintrack/chain.hpp"
#include "chaintrack/rotmath.hpp"
#include "chaintrack/trajectory.hpp"

namespace chaintrack {

struct NoiseSpec {
    double accel_sigma = 0.0;  // m/s^2 per axis
    double gyro_sigma = 0.0;   // rad/s per axis
    Vec3 gyro_bias;            // rad/s, constant over a run
    std::uint64_t seed = 0;
};

struct ImuSample {
    double t = 0.0;  // seconds
    Vec3 gyro;       // rad/s, body frame
    Vec3 accel;      // m/s^2, body frame (specific force)
};

/// Per-limb truth series, one entry per sample instant.
struct LimbTruth {
    std::vector<Quat> q;             // body -> world
    std::vector<Vec3> omega_body;    // rad/s
    std::vector<Vec3> tip_accel_w;   // m/s^2, world, ambient field included
    std::vector<Vec3> base_accel_w;  // m/s^2, world, ambient field included
    std::vector<Vec3> tip_pos_w;     // m, world (kinematic, no field)
};

struct GroundTruth {
    double dt = 0.0;
    std::vector<double> t;
    std::vector<LimbTruth> limbs;  // indexed by limb id
    Vec3 ambient_field;

    int sample_count() const { return static_cast<int>(t.size()); }
};

/// Forward kinematics over the whole trajectory. Orientation is integrated
/// on a 10x oversampled grid (midpoint rotation increments); accelerations
/// come from the analytic rigid-body formula, so a joined child's base
/// acceleration equals its parent's tip acceleration by construction.
GroundTruth integrate_truth(const ChainSpec& chain, const TrajectorySpec& traj);

/// One sample stream per limb id. Deterministic: each sensor's generator is
/// seeded from (spec.seed, limb id), so streams are reproducible bit-for-bit
/// and independent of generation order.
std::vector<std::vector<ImuSample>> synthesize_imu(const GroundTruth& truth,
                                                   const ChainSpec& chain,
                                                   const NoiseSpec& noise);

/// Stable per-sensor substream seed (splitmix64 mix of master seed and id).
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id);

}  // namespace chaintrack
