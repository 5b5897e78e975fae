// Motion programs: closed-form angular-rate and linear-acceleration
// profiles (constant term plus sinusoids), differentiable and integrable
// analytically so ground truth never depends on the estimator's equations.

#pragma once

#include <vector>

#include "chaintrack/rotmath.hpp"

namespace chaintrack {

struct Sinusoid {
    int axis = 0;        // 0=x, 1=y, 2=z
    double amplitude = 0.0;
    double freq_hz = 0.0;  // must be > 0
    double phase = 0.0;    // radians
};

/// f(t) = constant + sum of per-axis sinusoids.
struct MotionProgram {
    Vec3 constant;
    std::vector<Sinusoid> sinusoids;

    Vec3 value(double t) const;
    Vec3 derivative(double t) const;
    /// Integral from 0 to t (zero initial condition).
    Vec3 integral(double t) const;
    /// Double integral from 0 to t (zero initial value and slope).
    Vec3 double_integral(double t) const;

    bool is_zero() const { return sinusoids.empty() && norm(constant) == 0.0; }
};

/// Full motion description for a chain run.
struct TrajectorySpec {
    double duration_s = 1.0;
    double sample_rate_hz = 100.0;
    Vec3 ambient_field;                    // uniform specific force; zero in free fall
    MotionProgram root_accel;              // world-frame root linear acceleration
    std::vector<MotionProgram> limb_omega; // body-frame angular rate, indexed by limb id

    int sample_count() const;
    double dt() const { return 1.0 / sample_rate_hz; }
};

}  // namespace chaintrack
