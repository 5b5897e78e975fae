// Quaternion and 3-vector math used throughout chaintrack.
//
// Conventions (fixed project-wide):
//   - Hamilton quaternion product, scalar-first storage (w, x, y, z),
//     right-handed coordinate frames.
//   - An orientation quaternion q maps body-frame vectors to world frame:
//     v_world = q * v_body * q^-1 (rotate_vector).
//   - Unit norm is re-enforced after every composing operation.
//   - q and -q represent the same rotation; comparisons go through
//     rotation_angle_between, never component equality.

#pragma once

#include <cmath>
#include <stdexcept>

namespace chaintrack {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Vec3 zero() { return {}; }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator*(const Vec3& v, double s) { return s * v; }
inline Vec3 operator/(const Vec3& v, double s) { return {v.x / s, v.y / s, v.z / s}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a.x += b.x; a.y += b.y; a.z += b.z; return a; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { a.x -= b.x; a.y -= b.y; a.z -= b.z; return a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Unit vector along v; zero-length input yields the zero vector.
inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n < 1e-300) return Vec3::zero();
    return v / n;
}

/// Unit quaternion, scalar-first. Kept normalized by every factory and
/// composing operation (norm drift bounded well below 1e-9).
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quat identity() { return {}; }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        const double n = norm();
        if (n < 1e-300) return identity();
        return {w / n, x / n, y / n, z / n};
    }

    Quat conjugate() const { return {w, -x, -y, -z}; }

    /// Inverse rotation; equals the conjugate for unit quaternions.
    Quat inverse() const { return conjugate(); }

    Vec3 vector_part() const { return {x, y, z}; }
};

inline double dot(const Quat& a, const Quat& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Rotation of `angle` radians about `axis` (need not be unit length).
/// A zero axis is only legal together with a zero angle (identity).
inline Quat from_axis_angle(double angle, const Vec3& axis) {
    const double n = norm(axis);
    if (n < 1e-300) {
        if (angle == 0.0) return Quat::identity();
        throw std::invalid_argument("from_axis_angle: zero axis with nonzero angle");
    }
    const double half = 0.5 * angle;
    const double s = std::sin(half) / n;
    return Quat{std::cos(half), s * axis.x, s * axis.y, s * axis.z}.normalized();
}

/// Hamilton product a*b, renormalized.
inline Quat compose(const Quat& a, const Quat& b) {
    return Quat{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w}
        .normalized();
}

/// v rotated by q: q * v * q^-1. Norm-preserving.
inline Vec3 rotate_vector(const Quat& q, const Vec3& v) {
    // v' = v + 2 w (u x v) + 2 (u x (u x v)), u = vector part of q
    const Vec3 u = q.vector_part();
    const Vec3 uv = cross(u, v);
    const Vec3 uuv = cross(u, uv);
    return v + 2.0 * (q.w * uv + uuv);
}

/// v rotated by q^-1 (world -> body for a body->world q).
inline Vec3 rotate_vector_inverse(const Quat& q, const Vec3& v) {
    return rotate_vector(q.conjugate(), v);
}

/// Angle in [0, pi] of the relative rotation between a and b.
/// Invariant under sign flips of either operand. The atan2 form resolves
/// tiny angles that acos of the dot product cannot.
inline double rotation_angle_between(const Quat& a, const Quat& b) {
    const Quat rel = compose(a.conjugate(), b);
    return 2.0 * std::atan2(norm(rel.vector_part()), std::abs(rel.w));
}

/// Rotation angle of q itself, in [0, pi].
inline double rotation_angle(const Quat& q) {
    return rotation_angle_between(q, Quat::identity());
}

/// Shortest-arc spherical interpolation, t in [0, 1].
inline Quat slerp(const Quat& a, const Quat& b, double t) {
    Quat bb = b;
    double cosang = dot(a, bb);
    if (cosang < 0.0) {  // take the short way around
        bb = {-bb.w, -bb.x, -bb.y, -bb.z};
        cosang = -cosang;
    }
    if (cosang > 1.0 - 1e-12) {
        // nearly parallel: linear blend, renormalized
        return Quat{a.w + t * (bb.w - a.w), a.x + t * (bb.x - a.x),
                    a.y + t * (bb.y - a.y), a.z + t * (bb.z - a.z)}
            .normalized();
    }
    const double ang = std::acos(std::min(1.0, cosang));
    const double sa = std::sin(ang);
    const double ka = std::sin((1.0 - t) * ang) / sa;
    const double kb = std::sin(t * ang) / sa;
    return Quat{ka * a.w + kb * bb.w, ka * a.x + kb * bb.x,
                ka * a.y + kb * bb.y, ka * a.z + kb * bb.z}
        .normalized();
}

/// Integrate a constant body-frame angular rate over dt: the local
/// rotation increment exp(dt*omega) as a quaternion.
inline Quat rotation_increment(const Vec3& omega, double dt) {
    const double w = norm(omega);
    if (std::abs(w * dt) < 1e-300) return Quat::identity();
    return from_axis_angle(dt * w, omega / w);
}

}  // namespace chaintrack
