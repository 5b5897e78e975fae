#include "chaintrack/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace chaintrack {

double rmse(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("rmse: empty series");
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return std::sqrt(acc / static_cast<double>(values.size()));
}

double mae(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mae: empty series");
    double acc = 0.0;
    for (double v : values) acc += std::abs(v);
    return acc / static_cast<double>(values.size());
}

double twist_angle_about(const Quat& q, const Vec3& axis_unit) {
    const double p = dot(q.vector_part(), axis_unit);
    double angle = 2.0 * std::atan2(p, q.w);
    // atan2 leaves us in (-2pi, 2pi]; fold into (-pi, pi].
    if (angle > M_PI) angle -= 2.0 * M_PI;
    if (angle <= -M_PI) angle += 2.0 * M_PI;
    return angle;
}

}  // namespace chaintrack
