// Per-sensor orientation tracking: gyro dead reckoning plus drift
// correction from joint-acceleration agreement.
//
// A limb's base and its parent's tip are the same point, so their
// accelerations must agree in the world frame. The child predicts its base
// acceleration by removing rotation-induced (centripetal + tangential)
// acceleration from its tip reading; any remaining angular difference from
// the parent's reported acceleration is attitude error, corrected through
// an SNR-gated complementary filter. Rotation about the current
// acceleration direction is unobservable and left untouched.
//
// Call order per sample: corrections (if due) run BEFORE dead-reckoning the
// sample, so the velocity pair inside predict_base_accel differences the
// previous sample's (gyro, orientation) against the new sample's gyro at
// the latest integrated orientation. Differencing distinct gyro readings is
// what captures tangential acceleration.

#pragma once

#include <vector>

#include "chaintrack/rotmath.hpp"

namespace chaintrack {

struct EstimatorState {
    Quat q;             // current body->world estimate
    Quat q_prev;        // estimate before the latest dead-reckon update
    Vec3 omega_prev;    // gyro reading consumed by that update
    double limb_length_r = 0.0;

    static EstimatorState initial(const Quat& q0, double limb_length_r) {
        return {q0, q0, Vec3::zero(), limb_length_r};
    }
};

struct FilterParams {
    double noise_floor_mu = 0.035;  // mean accel noise magnitude, m/s^2
    double snr_saturation = 25.0;   // SNR where the filter gain tops out
    double gamma_max = 0.1;         // per-correction gain cap (tuned at 30 Hz)
    double beta_omega_ref = 0.5;    // rad/s   scale for rate-based weighting
    double beta_alpha_ref = 5.0;    // rad/s^2 scale for accel-based weighting
};

struct CorrectionResult {
    double theta_raw = 0.0;  // raw angle between the joint accelerations, rad
    double phi = 0.0;        // filtered angle actually applied, rad
    Vec3 axis_world;         // unit axis; rotating q by [phi, axis] aligns the
                             // child's predicted joint accel with the parent's
    double snr = 0.0;
    bool applied = false;    // false when either vector or the cross product
                             // is too small to define a correction
};

/// Integrate one gyro sample: q <- q * exp(dt * gyro). Zero rate is the
/// identity update. Stores the pre-update orientation and the consumed gyro
/// for the next velocity difference.
EstimatorState dead_reckon_step(const EstimatorState& state, const Vec3& gyro, double dt);

/// Body-frame velocity of the limb tip implied by the gyro: omega x (0,r,0).
/// The y component is always zero (the tip sits on a sphere of radius r) and
/// twist about the limb axis moves nothing.
Vec3 predict_tip_velocity(const Vec3& gyro, double r);

/// Predicted acceleration at the limb base, body frame: the tip reading
/// minus the beta-weighted rotation-induced acceleration obtained by
/// world-frame differencing of successive tip velocities.
Vec3 predict_base_accel(const EstimatorState& state, const Vec3& gyro, const Vec3& accel,
                        double dt, const FilterParams& params);

/// Correction from the child's predicted base acceleration (body frame)
/// and the parent's tip acceleration already expressed in world frame.
CorrectionResult compute_correction_world(const Quat& q_child, const Vec3& a_base_child,
                                          const Vec3& a_parent_world,
                                          const FilterParams& params);

/// Same, with the parent's reading still in its own body frame.
CorrectionResult compute_correction(const Quat& q_child, const Vec3& a_base_child,
                                    const Quat& q_parent, const Vec3& a_tip_parent,
                                    const FilterParams& params);

/// Rotate the orientation estimate by [phi, axis_world]. No-op when the
/// correction was not applicable or phi is zero.
EstimatorState apply_correction(const EstimatorState& state, const CorrectionResult& corr);

/// Filter gain in [0, gamma_max]: linear in SNR, saturating at
/// snr_saturation.
double gamma(double snr, const FilterParams& params);

/// Prediction weight in [0, 1], growing with angular rate and angular
/// acceleration. Zero when still: differencing gyro noise is worse than not
/// predicting at all in that regime.
double beta(const Vec3& omega, const Vec3& omega_prev, double dt, const FilterParams& params);

/// Recalibrate the filter noise floor from a static run in free fall: the
/// mean accelerometer magnitude is the mu the SNR divides by.
double estimate_noise_floor(const std::vector<Vec3>& static_accel_readings);

}  // namespace chaintrack
