// Error metrics and orientation-error decomposition helpers.

#pragma once

#include <string>
#include <vector>

#include "chaintrack/rotmath.hpp"

namespace chaintrack {

struct ErrorSeries {
    std::string label;
    std::vector<double> values;
};

/// Root-mean-square of a non-empty series. Throws std::invalid_argument on
/// an empty one.
double rmse(const std::vector<double>& values);

/// Mean absolute value of a non-empty series. Always <= rmse.
double mae(const std::vector<double>& values);

inline double rmse(const ErrorSeries& s) { return rmse(s.values); }
inline double mae(const ErrorSeries& s) { return mae(s.values); }

/// World-frame error rotation e with q_est = e * q_true.
inline Quat error_rotation(const Quat& q_est, const Quat& q_true) {
    return compose(q_est, q_true.inverse());
}

/// Signed twist angle of q about the given unit axis, in (-pi, pi]. The
/// twist/swing split projects the rotation onto the axis; the swing part is
/// discarded.
double twist_angle_about(const Quat& q, const Vec3& axis_unit);

inline double degrees(double radians) { return radians * 57.295779513082320877; }
inline double radians(double degrees) { return degrees / 57.295779513082320877; }

}  // namespace chaintrack
