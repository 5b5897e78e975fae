#include "chaintrack/trajectory.hpp"

#include <cmath>

namespace chaintrack {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double& axis_ref(Vec3& v, int axis) { return axis == 0 ? v.x : (axis == 1 ? v.y : v.z); }
}  // namespace

Vec3 MotionProgram::value(double t) const {
    Vec3 out = constant;
    for (const Sinusoid& s : sinusoids)
        axis_ref(out, s.axis) += s.amplitude * std::sin(kTwoPi * s.freq_hz * t + s.phase);
    return out;
}

Vec3 MotionProgram::derivative(double t) const {
    Vec3 out;
    for (const Sinusoid& s : sinusoids) {
        const double w = kTwoPi * s.freq_hz;
        axis_ref(out, s.axis) += s.amplitude * w * std::cos(w * t + s.phase);
    }
    return out;
}

Vec3 MotionProgram::integral(double t) const {
    Vec3 out = t * constant;
    for (const Sinusoid& s : sinusoids) {
        const double w = kTwoPi * s.freq_hz;
        axis_ref(out, s.axis) += s.amplitude / w * (std::cos(s.phase) - std::cos(w * t + s.phase));
    }
    return out;
}

Vec3 MotionProgram::double_integral(double t) const {
    Vec3 out = 0.5 * t * t * constant;
    for (const Sinusoid& s : sinusoids) {
        const double w = kTwoPi * s.freq_hz;
        axis_ref(out, s.axis) += s.amplitude / w * std::cos(s.phase) * t -
                                 s.amplitude / (w * w) *
                                     (std::sin(w * t + s.phase) - std::sin(s.phase));
    }
    return out;
}

int TrajectorySpec::sample_count() const {
    return static_cast<int>(std::floor(duration_s * sample_rate_hz + 0.5)) + 1;
}

}  // namespace chaintrack
