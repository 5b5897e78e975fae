#include <doctest.h>

#include <cmath>

#include "chaintrack/estimator.hpp"
#include "chaintrack/metrics.hpp"
#include "chaintrack/synth.hpp"
#include "oracles.hpp"

using namespace chaintrack;

namespace {

constexpr double kPi = 3.14159265358979323846;

FilterParams full_gain_params() {
    FilterParams params;
    params.gamma_max = 1.0;
    params.snr_saturation = 1e-9;  // saturate immediately: gamma == 1
    return params;
}

}  // namespace

TEST_CASE("dead reckoning: zero rate, analytic rate, constant-rate closure") {
    EstimatorState st = EstimatorState::initial(Quat::identity(), 0.5);

    const EstimatorState still = dead_reckon_step(st, {0, 0, 0}, 0.01);
    CHECK(rotation_angle(still.q) == 0.0);

    const EstimatorState quarter = dead_reckon_step(st, {0, 0, kPi / 2.0}, 1.0);
    CHECK(rotation_angle_between(quarter.q, from_axis_angle(kPi / 2.0, {0, 0, 1})) <= 1e-9);

    oracles::Rng rng(17);
    const Vec3 w = rng.vec(2.0);
    EstimatorState walk = EstimatorState::initial(Quat::identity(), 0.5);
    for (int i = 0; i < 1000; ++i) walk = dead_reckon_step(walk, w, 0.001);
    const Quat closed_form = from_axis_angle(norm(w) * 1.0, normalized(w));
    CHECK(rotation_angle_between(walk.q, closed_form) <= 1e-6);
    CHECK(norm(walk.omega_prev - w) == 0.0);
}

TEST_CASE("tip velocity from angular rate") {
    CHECK(norm(predict_tip_velocity({0, 0, 0}, 0.7)) == 0.0);
    // Twist about the limb axis moves no point of the tip.
    CHECK(norm(predict_tip_velocity({0, 5, 0}, 0.7)) == 0.0);

    oracles::Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        const Vec3 w = rng.vec(3.0);
        const double r = 0.2 + 0.8 * std::abs(rng.unit(rng.engine));
        const Vec3 got = predict_tip_velocity(w, r);
        CHECK(norm(got - cross(w, Vec3{0, r, 0})) <= 1e-12);
        CHECK(got.y == 0.0);

        // Finite differences of the rotating tip position agree.
        const double h = 1e-6;
        const Vec3 p_plus = rotate_vector(rotation_increment(w, h), {0, r, 0});
        const Vec3 p_minus = rotate_vector(rotation_increment(w, -h), {0, r, 0});
        const Vec3 fd = (p_plus - p_minus) / (2.0 * h);
        CHECK(norm(fd - got) <= 1e-6);
    }
}

TEST_CASE("base-acceleration prediction is the identity when still") {
    const EstimatorState st = EstimatorState::initial(Quat::identity(), 1.0);
    const Vec3 reading{0.3, -0.1, 9.7};
    const Vec3 out = predict_base_accel(st, {0, 0, 0}, reading, 0.01, FilterParams{});
    CHECK(norm(out - reading) == 0.0);
}

TEST_CASE("base-acceleration prediction removes the centripetal reading under constant spin") {
    // r = 1, spin 2 rad/s about z: the tip reads a constant body-frame
    // centripetal acceleration (0, -r w^2, 0).
    const double r = 1.0;
    const Vec3 w{0.0, 0.0, 2.0};
    const Vec3 reading{0.0, -r * norm(w) * norm(w), 0.0};

    for (double dt : {1e-3, 1e-4}) {
        EstimatorState st = EstimatorState::initial(Quat::identity(), r);
        for (int i = 0; i < 50; ++i) st = dead_reckon_step(st, w, dt);
        // Correction-time call order: predict with the fresh sample before
        // integrating it.
        const Vec3 base = predict_base_accel(st, w, reading, dt, FilterParams{});
        // Residual shrinks with dt; compare against the unpredicted 4 m/s^2.
        CHECK(norm(base) <= 40.0 * norm(w) * dt);
        CHECK(norm(base) < 0.05 * norm(reading));
    }
}

TEST_CASE("correction fixture: a yaw-drifted child is fully corrected in one application") {
    const Vec3 a_world{7.0, 0.0, 0.0};
    const Quat q_true = Quat::identity();
    const Quat drift = from_axis_angle(kPi / 2.0, {0, 0, 1});
    const Quat q_child = compose(drift, q_true);

    const CorrectionResult corr = compute_correction(q_child, a_world, Quat::identity(), a_world,
                                                     full_gain_params());
    CHECK(corr.applied);
    CHECK(corr.theta_raw == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    CHECK(corr.phi == doctest::Approx(kPi / 2.0).epsilon(1e-9));

    EstimatorState st = EstimatorState::initial(q_child, 0.5);
    st = apply_correction(st, corr);
    CHECK(rotation_angle_between(st.q, q_true) <= 1e-9);
    CHECK(norm(rotate_vector(st.q, a_world) - a_world) <= 1e-9 * norm(a_world));
    CHECK(std::abs(st.q.norm() - 1.0) <= 1e-12);
}

TEST_CASE("correction handles degenerate and low-signal inputs") {
    const FilterParams params;

    // Identical world vectors: nothing to correct.
    const CorrectionResult same =
        compute_correction(Quat::identity(), {1, 2, 3}, Quat::identity(), {1, 2, 3}, params);
    CHECK_FALSE(same.applied);
    CHECK(same.theta_raw == doctest::Approx(0.0));
    CHECK(same.phi == 0.0);

    // Vanishing magnitudes: no correction at all.
    const CorrectionResult tiny =
        compute_correction(Quat::identity(), {0, 0, 0}, Quat::identity(), {1, 0, 0}, params);
    CHECK_FALSE(tiny.applied);

    // Small but nonzero accelerations: SNR suppresses the result.
    const Quat drifted = from_axis_angle(0.3, {0, 0, 1});
    const CorrectionResult weak =
        compute_correction(drifted, {1e-3, 0, 0}, Quat::identity(), {1e-3, 0, 0}, params);
    CHECK(weak.applied);
    CHECK(weak.snr < 1.0);
    CHECK(weak.phi < 1e-4 * weak.theta_raw + 1e-12);

    // phi never exceeds theta.
    oracles::Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const CorrectionResult c = compute_correction(rng.unit_quat(), rng.vec(5.0),
                                                      rng.unit_quat(), rng.vec(5.0), params);
        CHECK(c.phi >= 0.0);
        CHECK(c.phi <= c.theta_raw + 1e-15);
        CHECK(c.theta_raw <= kPi + 1e-15);
    }
}

TEST_CASE("repeated partial corrections decay geometrically") {
    FilterParams params;
    params.gamma_max = 0.25;
    params.snr_saturation = 1e-9;

    const Vec3 a_world{7.0, 0.0, 0.0};
    const double theta0 = radians(90.0);
    EstimatorState st = EstimatorState::initial(from_axis_angle(theta0, {0, 0, 1}), 0.5);

    double expected = theta0;
    for (int n = 1; n <= 20; ++n) {
        const CorrectionResult corr =
            compute_correction(st.q, a_world, Quat::identity(), a_world, params);
        st = apply_correction(st, corr);
        expected *= (1.0 - params.gamma_max);
        CHECK(rotation_angle_between(st.q, Quat::identity()) ==
              doctest::Approx(expected).epsilon(1e-9));
    }

    // phi == 0 leaves the state untouched.
    CorrectionResult noop;
    noop.applied = false;
    const EstimatorState same = apply_correction(st, noop);
    CHECK(rotation_angle_between(same.q, st.q) == 0.0);
}

TEST_CASE("drift about the acceleration axis is invisible; orthogonal drift shrinks") {
    oracles::Rng rng(77);
    const FilterParams params = full_gain_params();
    for (int i = 0; i < 50; ++i) {
        const Quat q_true = rng.unit_quat();
        const Vec3 a_world = 7.0 * rng.unit_vec();
        const Vec3 a_body_true = rotate_vector_inverse(q_true, a_world);

        // Drift about the world acceleration axis: unobservable, unchanged.
        const Quat twist_drift = from_axis_angle(0.2, normalized(a_world));
        const Quat q_twisted = compose(twist_drift, q_true);
        const CorrectionResult unobserved =
            compute_correction_world(q_twisted, a_body_true, a_world, params);
        EstimatorState st = EstimatorState::initial(q_twisted, 0.5);
        st = apply_correction(st, unobserved);
        CHECK(rotation_angle_between(st.q, q_twisted) <= 1e-9);

        // Drift about an axis orthogonal to the acceleration: reduced.
        const Vec3 ortho = normalized(cross(a_world, rng.unit_vec()));
        const Quat swing_drift = from_axis_angle(0.2, ortho);
        const Quat q_swung = compose(swing_drift, q_true);
        const double before = rotation_angle_between(q_swung, q_true);
        const CorrectionResult observed =
            compute_correction_world(q_swung, a_body_true, a_world, params);
        EstimatorState st2 = EstimatorState::initial(q_swung, 0.5);
        st2 = apply_correction(st2, observed);
        CHECK(rotation_angle_between(st2.q, q_true) < before - 0.19);
    }
}

TEST_CASE("noise floor recalibration from a static free-fall run") {
    const ChainSpec chain = make_serial_chain({0.5});
    TrajectorySpec traj;
    traj.duration_s = 60.0;
    traj.sample_rate_hz = 100.0;
    traj.limb_omega.assign(1, MotionProgram{});
    const GroundTruth truth = integrate_truth(chain, traj);
    NoiseSpec noise;
    noise.accel_sigma = 0.043 / std::sqrt(3.0);
    noise.seed = 17;
    const auto streams = synthesize_imu(truth, chain, noise);

    std::vector<Vec3> readings;
    for (const ImuSample& s : streams[0]) readings.push_back(s.accel);
    // Mean magnitude of 3-axis gaussian noise: sigma * 2 * sqrt(2/pi).
    const double expected = noise.accel_sigma * 2.0 * std::sqrt(2.0 / M_PI);
    CHECK(estimate_noise_floor(readings) == doctest::Approx(expected).epsilon(0.03));
    CHECK_THROWS_AS(estimate_noise_floor({}), std::invalid_argument);
}

TEST_CASE("filter gain is linear in SNR and saturates") {
    const FilterParams params;  // saturation 25, max 0.1
    CHECK(chaintrack::gamma(0.0, params) == 0.0);
    CHECK(chaintrack::gamma(25.0, params) == doctest::Approx(0.1));
    CHECK(chaintrack::gamma(250.0, params) == doctest::Approx(0.1));
    CHECK(chaintrack::gamma(12.5, params) == doctest::Approx(0.05));
    double prev = -1.0;
    for (double snr = 0.0; snr <= 60.0; snr += 0.5) {
        const double g = chaintrack::gamma(snr, params);
        CHECK(g >= prev);
        prev = g;
    }
}

TEST_CASE("prediction weight grows with rate and angular acceleration") {
    const FilterParams params;
    CHECK(chaintrack::beta({0, 0, 0}, {0, 0, 0}, 0.01, params) == 0.0);
    CHECK(chaintrack::beta({8, 0, 0}, {8, 0, 0}, 0.01, params) == 1.0);
    // Pure angular acceleration also enables it.
    CHECK(chaintrack::beta({0.05, 0, 0}, {-0.05, 0, 0}, 0.01, params) > 0.5);
    double prev = -1.0;
    for (double w = 0.0; w <= 1.0; w += 0.01) {
        const double b = chaintrack::beta({0, 0, w}, {0, 0, w}, 0.01, params);
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("noiseless closure: child base prediction equals parent tip acceleration") {
    // The parent spins fast enough to push a 2 m/s^2 signal through the
    // joint; the child rotates slowly so the one-sample lag of the backward
    // velocity difference stays far below the tolerance while a sign or
    // frame error in the removal would blow up to ~4e-3.
    struct Config {
        double child_rate;
        double omega_ref;
    };
    for (const Config& cfg : {Config{0.1, 0.05}, Config{0.2, 0.1}}) {
        const ChainSpec chain = make_serial_chain({0.5, 0.4});
        TrajectorySpec traj;
        traj.duration_s = 0.5;
        traj.sample_rate_hz = 10000.0;
        traj.limb_omega.assign(2, MotionProgram{});
        traj.limb_omega[0].constant = {0.0, 0.0, 2.0};
        traj.limb_omega[1].constant = {0.6 * cfg.child_rate, 0.0, 0.8 * cfg.child_rate};

        const GroundTruth truth = integrate_truth(chain, traj);
        const NoiseSpec no_noise;
        const auto streams = synthesize_imu(truth, chain, no_noise);

        const double dt = truth.dt;
        FilterParams params;
        params.beta_omega_ref = cfg.omega_ref;  // beta saturates at the test rate
        EstimatorState child = EstimatorState::initial(Quat::identity(), 0.4);
        double worst = 0.0;
        int checked = 0;
        for (int k = 1; k < truth.sample_count(); ++k) {
            const ImuSample& sample = streams[1][static_cast<size_t>(k)];
            Vec3 base_body;
            bool check_this = false;
            if (k >= 3) {
                const double b = chaintrack::beta(sample.gyro, child.omega_prev, dt, params);
                REQUIRE(b == 1.0);
                base_body = predict_base_accel(child, sample.gyro, sample.accel, dt, params);
                check_this = true;
            }
            child = dead_reckon_step(child, sample.gyro, dt);
            if (check_this) {
                // World comparison uses the orientation at the reading time.
                const Vec3 base_world = rotate_vector(child.q, base_body);
                const Vec3 want = truth.limbs[0].tip_accel_w[static_cast<size_t>(k)];
                worst = std::max(worst, norm(base_world - want));
                ++checked;
            }
        }
        REQUIRE(checked > 1000);
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("orientation norm stays unit over mixed updates") {
    oracles::Rng rng(8);
    EstimatorState st = EstimatorState::initial(rng.unit_quat(), 0.5);
    const FilterParams params = full_gain_params();
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        st = dead_reckon_step(st, rng.vec(3.0), 0.01);
        if ((i & 7) == 0) {
            const CorrectionResult corr =
                compute_correction_world(st.q, rng.vec(5.0), 5.0 * rng.unit_vec(), params);
            st = apply_correction(st, corr);
        }
        worst = std::max(worst, std::abs(st.q.norm() - 1.0));
    }
    CHECK(worst <= 1e-9);
}
