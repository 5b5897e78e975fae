#include "chaintrack/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace chaintrack {

namespace {
constexpr double kTinyMagnitude = 1e-12;
}

EstimatorState dead_reckon_step(const EstimatorState& state, const Vec3& gyro, double dt) {
    EstimatorState next = state;
    next.q_prev = state.q;
    next.q = compose(state.q, rotation_increment(gyro, dt));
    next.omega_prev = gyro;
    return next;
}

Vec3 predict_tip_velocity(const Vec3& gyro, double r) {
    // omega x (0, r, 0)
    return {-r * gyro.z, 0.0, r * gyro.x};
}

Vec3 predict_base_accel(const EstimatorState& state, const Vec3& gyro, const Vec3& accel,
                        double dt, const FilterParams& params) {
    const double b = beta(gyro, state.omega_prev, dt, params);
    if (b == 0.0) return accel;

    const Vec3 v_prev_w =
        rotate_vector(state.q_prev, predict_tip_velocity(state.omega_prev, state.limb_length_r));
    const Vec3 v_w = rotate_vector(state.q, predict_tip_velocity(gyro, state.limb_length_r));
    const Vec3 a_circ_w = (v_w - v_prev_w) / dt;

    const Quat q_mid = slerp(state.q_prev, state.q, 0.5);
    return accel - b * rotate_vector_inverse(q_mid, a_circ_w);
}

CorrectionResult compute_correction_world(const Quat& q_child, const Vec3& a_base_child,
                                          const Vec3& a_parent_world,
                                          const FilterParams& params) {
    CorrectionResult result;
    const Vec3 a_child_w = rotate_vector(q_child, a_base_child);

    const double mag_parent = norm(a_parent_world);
    const double mag_child = norm(a_child_w);
    if (mag_parent < kTinyMagnitude || mag_child < kTinyMagnitude) return result;

    // Axis that carries the child's predicted joint acceleration onto the
    // parent's. The atan2 form of the angle stays accurate where acos of
    // the normalized dot product loses precision (near 0 and pi).
    const Vec3 axis = cross(a_child_w, a_parent_world);
    const double axis_mag = norm(axis);
    result.theta_raw = std::atan2(axis_mag, dot(a_parent_world, a_child_w));
    result.snr = mag_parent * mag_child /
                 (params.noise_floor_mu * params.noise_floor_mu);

    // Collinear vectors leave no usable axis.
    if (axis_mag < kTinyMagnitude * mag_parent * mag_child) return result;

    result.axis_world = axis / axis_mag;
    result.phi = result.theta_raw * gamma(result.snr, params);
    result.applied = true;
    return result;
}

CorrectionResult compute_correction(const Quat& q_child, const Vec3& a_base_child,
                                    const Quat& q_parent, const Vec3& a_tip_parent,
                                    const FilterParams& params) {
    return compute_correction_world(q_child, a_base_child,
                                    rotate_vector(q_parent, a_tip_parent), params);
}

EstimatorState apply_correction(const EstimatorState& state, const CorrectionResult& corr) {
    if (!corr.applied || corr.phi == 0.0) return state;
    EstimatorState next = state;
    next.q = compose(from_axis_angle(corr.phi, corr.axis_world), state.q);
    return next;
}

double gamma(double snr, const FilterParams& params) {
    if (snr <= 0.0) return 0.0;
    return std::min(params.gamma_max, params.gamma_max * snr / params.snr_saturation);
}

double beta(const Vec3& omega, const Vec3& omega_prev, double dt, const FilterParams& params) {
    const double rate_term = norm(omega) / params.beta_omega_ref;
    const double accel_term = norm(omega - omega_prev) / (dt * params.beta_alpha_ref);
    return std::min(1.0, rate_term + accel_term);
}

double estimate_noise_floor(const std::vector<Vec3>& static_accel_readings) {
    if (static_accel_readings.empty())
        throw std::invalid_argument("estimate_noise_floor: empty calibration run");
    double total = 0.0;
    for (const Vec3& a : static_accel_readings) total += norm(a);
    return total / static_cast<double>(static_accel_readings.size());
}

}  // namespace chaintrack
