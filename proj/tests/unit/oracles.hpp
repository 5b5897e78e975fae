// Independent reference implementations used only by tests. The rotation
// oracle goes through an explicitly constructed 3x3 matrix (Rodrigues form)
// and never touches the quaternion code paths it checks.

#pragma once

#include <array>
#include <cmath>
#include <random>

#include "chaintrack/rotmath.hpp"

namespace oracles {

using chaintrack::Quat;
using chaintrack::Vec3;

struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};
};

/// Rodrigues rotation matrix for `angle` about the unit vector `axis`.
inline Mat3 rodrigues_matrix(double angle, const Vec3& axis) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    const double x = axis.x, y = axis.y, z = axis.z;
    Mat3 r;
    r.m = {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
            {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
            {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
    return r;
}

inline Vec3 apply(const Mat3& r, const Vec3& v) {
    return {r.m[0][0] * v.x + r.m[0][1] * v.y + r.m[0][2] * v.z,
            r.m[1][0] * v.x + r.m[1][1] * v.y + r.m[1][2] * v.z,
            r.m[2][0] * v.x + r.m[2][1] * v.y + r.m[2][2] * v.z};
}

/// Axis/angle extracted from quaternion components (scalar-first Hamilton),
/// feeding the matrix oracle.
inline Mat3 matrix_of_quat(const Quat& q) {
    const double vn = chaintrack::norm(q.vector_part());
    if (vn < 1e-15) return rodrigues_matrix(0.0, {1.0, 0.0, 0.0});
    const double angle = 2.0 * std::atan2(vn, q.w);
    return rodrigues_matrix(angle, q.vector_part() / vn);
}

struct Rng {
    std::mt19937_64 engine;
    std::uniform_real_distribution<double> unit{-1.0, 1.0};
    std::normal_distribution<double> gauss{0.0, 1.0};

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }

    Vec3 vec(double scale = 1.0) {
        return {scale * unit(engine), scale * unit(engine), scale * unit(engine)};
    }

    Vec3 unit_vec() {
        Vec3 v{gauss(engine), gauss(engine), gauss(engine)};
        while (chaintrack::norm(v) < 1e-9) v = {gauss(engine), gauss(engine), gauss(engine)};
        return chaintrack::normalized(v);
    }

    Quat unit_quat() {
        Quat q{gauss(engine), gauss(engine), gauss(engine), gauss(engine)};
        while (q.norm() < 1e-9) q = {gauss(engine), gauss(engine), gauss(engine), gauss(engine)};
        return q.normalized();
    }
};

}  // namespace oracles
