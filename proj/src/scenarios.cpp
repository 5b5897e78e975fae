#include "chaintrack/scenarios.hpp"

#include <cmath>
#include <random>

#include "chaintrack/errors.hpp"

namespace chaintrack {

namespace {

constexpr double kPi = 3.14159265358979323846;

ChainSpec boom_chain() { return make_serial_chain({0.5, 0.5}); }

// Multi-sine angular-rate shapes with incommensurate frequencies; the
// amplitudes get rescaled to the scenario's target average rate.
std::vector<MotionProgram> limb_rate_shapes() {
    MotionProgram limb0;
    limb0.sinusoids = {
        {0, 0.60, 0.21, 0.0},
        {1, 0.35, 0.13, 1.0},
        {2, 0.80, 0.17, 2.1},
    };
    MotionProgram limb1;
    limb1.sinusoids = {
        {0, 0.70, 0.19, 0.7},
        {1, 0.30, 0.11, 2.4},
        {2, 0.75, 0.23, 4.0},
    };
    return {limb0, limb1};
}

RunConfig base_config(const std::string& name) {
    RunConfig config;
    config.name = name;
    config.chain = boom_chain();
    config.trajectory.sample_rate_hz = 100.0;
    config.trajectory.limb_omega.assign(2, MotionProgram{});
    config.noise.accel_sigma = kAccelSigma;
    config.noise.gyro_sigma = kGyroSigma;
    config.noise.gyro_bias = kGyroBiasMag * seeded_unit_vector(0);
    config.noise.seed = 42;
    config.correction_rate_hz = 30.0;
    return config;
}

}  // namespace

double average_limb_rate(const TrajectorySpec& traj) {
    double total = 0.0;
    long count = 0;
    const double step = traj.duration_s / 4096.0;
    for (const MotionProgram& prog : traj.limb_omega) {
        if (prog.is_zero()) continue;
        for (int k = 0; k < 4096; ++k) {
            total += norm(prog.value(k * step));
            ++count;
        }
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

void scale_limb_rates(TrajectorySpec& traj, double target_avg) {
    const double avg = average_limb_rate(traj);
    if (avg == 0.0) return;
    const double k = target_avg / avg;
    for (MotionProgram& prog : traj.limb_omega) {
        prog.constant = k * prog.constant;
        for (Sinusoid& s : prog.sinusoids) s.amplitude *= k;
    }
}

Vec3 seeded_unit_vector(std::uint64_t seed) {
    std::mt19937_64 rng(derive_stream_seed(seed, 0xB1A5));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    while (norm(v) < 1e-6) v = Vec3{gauss(rng), gauss(rng), gauss(rng)};
    return normalized(v);
}

RunConfig make_scenario(const std::string& name) {
    if (name == "yaw_recovery") {
        RunConfig config = base_config(name);
        config.trajectory.duration_s = 4.0;
        // Lateral shake along world x; |A sin| averages 2A/pi, so this
        // amplitude gives a 7 m/s^2 mean excitation.
        config.trajectory.root_accel.sinusoids = {{0, 7.0 * kPi / 2.0, 1.25, 0.0}};
        return config;
    }
    if (name == "drift_static") {
        RunConfig config = base_config(name);
        config.trajectory.duration_s = 65.0;
        return config;
    }
    if (name == "accel_stationary" || name == "accel_slow" || name == "accel_fast") {
        RunConfig config = base_config(name);
        config.trajectory.duration_s = 12.0;
        if (name != "accel_stationary") {
            config.trajectory.limb_omega = limb_rate_shapes();
            scale_limb_rates(config.trajectory, name == "accel_slow" ? 0.72 : 2.13);
        }
        return config;
    }
    if (name == "correction_stationary" || name == "correction_moving") {
        RunConfig config = base_config(name);
        config.trajectory.duration_s = 12.0;
        config.trajectory.ambient_field = {0.0, 0.0, kEarthField};
        if (name == "correction_moving") {
            config.trajectory.limb_omega = limb_rate_shapes();
            scale_limb_rates(config.trajectory, 1.0);
        }
        return config;
    }
    if (name == "bus_moving") {
        RunConfig config = base_config(name);
        config.trajectory.duration_s = 16.0;
        config.trajectory.sample_rate_hz = 200.0;
        config.trajectory.limb_omega = limb_rate_shapes();
        scale_limb_rates(config.trajectory, 1.0);
        return config;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::string> scenario_names() {
    return {"yaw_recovery",        "drift_static",       "accel_stationary",
            "accel_slow",          "accel_fast",         "correction_stationary",
            "correction_moving",   "bus_moving"};
}

}  // namespace chaintrack
