#include "chaintrack/synth.hpp"

#include <random>
#include <stdexcept>

namespace chaintrack {

namespace {

// Tip offset from the base in the limb frame: limbs extend along +y.
Vec3 tip_offset_body(double r) { return {0.0, r, 0.0}; }

constexpr int kOversample = 10;

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

GroundTruth integrate_truth(const ChainSpec& chain, const TrajectorySpec& traj) {
    if (!(traj.sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be > 0");
    if (!(traj.duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
    if (traj.limb_omega.size() != static_cast<size_t>(chain.size()))
        throw std::invalid_argument("one angular-rate program required per limb");

    const int n_limbs = chain.size();
    const int n_samples = traj.sample_count();
    const double dt = traj.dt();
    const double h = dt / kOversample;

    GroundTruth truth;
    truth.dt = dt;
    truth.ambient_field = traj.ambient_field;
    truth.t.resize(static_cast<size_t>(n_samples));
    truth.limbs.resize(static_cast<size_t>(n_limbs));
    for (LimbTruth& lt : truth.limbs) {
        lt.q.resize(static_cast<size_t>(n_samples));
        lt.omega_body.resize(static_cast<size_t>(n_samples));
        lt.tip_accel_w.resize(static_cast<size_t>(n_samples));
        lt.base_accel_w.resize(static_cast<size_t>(n_samples));
        lt.tip_pos_w.resize(static_cast<size_t>(n_samples));
    }

    std::vector<Quat> q(static_cast<size_t>(n_limbs), Quat::identity());

    for (int k = 0; k < n_samples; ++k) {
        const double t = k * dt;
        truth.t[static_cast<size_t>(k)] = t;

        // Root base kinematics from the closed-form acceleration program.
        const Vec3 base0_pos = traj.root_accel.double_integral(t);
        const Vec3 base0_acc = traj.root_accel.value(t);

        Vec3 parent_tip_pos = base0_pos;
        Vec3 parent_tip_acc = base0_acc;

        for (int id : chain.traversal_order) {
            const LimbNode& limb = chain.limb(id);
            const MotionProgram& prog = traj.limb_omega[static_cast<size_t>(id)];
            const Vec3 p = tip_offset_body(limb.length_r);
            const Vec3 w = prog.value(t);
            const Vec3 dw = prog.derivative(t);

            Vec3 base_pos = parent_tip_pos;
            Vec3 base_acc = parent_tip_acc;
            if (limb.parent_id) {
                const LimbTruth& pt = truth.limbs[static_cast<size_t>(*limb.parent_id)];
                base_pos = pt.tip_pos_w[static_cast<size_t>(k)];
                base_acc = pt.tip_accel_w[static_cast<size_t>(k)] - traj.ambient_field;
            }

            const Quat& qi = q[static_cast<size_t>(id)];
            const Vec3 rel_acc = rotate_vector(qi, cross(dw, p) + cross(w, cross(w, p)));

            LimbTruth& lt = truth.limbs[static_cast<size_t>(id)];
            lt.q[static_cast<size_t>(k)] = qi;
            lt.omega_body[static_cast<size_t>(k)] = w;
            lt.tip_pos_w[static_cast<size_t>(k)] = base_pos + rotate_vector(qi, p);
            lt.base_accel_w[static_cast<size_t>(k)] = base_acc + traj.ambient_field;
            lt.tip_accel_w[static_cast<size_t>(k)] = base_acc + rel_acc + traj.ambient_field;
        }

        // Advance orientations to the next sample instant (midpoint rule on
        // the oversampled grid).
        if (k + 1 < n_samples) {
            for (int id = 0; id < n_limbs; ++id) {
                const MotionProgram& prog = traj.limb_omega[static_cast<size_t>(id)];
                Quat& qi = q[static_cast<size_t>(id)];
                for (int s = 0; s < kOversample; ++s) {
                    const double tm = t + (s + 0.5) * h;
                    qi = compose(qi, rotation_increment(prog.value(tm), h));
                }
            }
        }
    }
    return truth;
}

std::vector<std::vector<ImuSample>> synthesize_imu(const GroundTruth& truth,
                                                   const ChainSpec& chain,
                                                   const NoiseSpec& noise) {
    if (noise.accel_sigma < 0.0 || noise.gyro_sigma < 0.0)
        throw std::invalid_argument("noise sigmas must be >= 0");

    const int n_samples = truth.sample_count();
    std::vector<std::vector<ImuSample>> streams(static_cast<size_t>(chain.size()));

    for (int id = 0; id < chain.size(); ++id) {
        std::mt19937_64 rng(derive_stream_seed(noise.seed, static_cast<std::uint64_t>(id)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto noise3 = [&](double sigma) -> Vec3 {
            if (sigma == 0.0) return Vec3::zero();
            return {sigma * gauss(rng), sigma * gauss(rng), sigma * gauss(rng)};
        };

        const LimbTruth& lt = truth.limbs[static_cast<size_t>(id)];
        auto& stream = streams[static_cast<size_t>(id)];
        stream.resize(static_cast<size_t>(n_samples));
        for (int k = 0; k < n_samples; ++k) {
            ImuSample& s = stream[static_cast<size_t>(k)];
            s.t = truth.t[static_cast<size_t>(k)];
            s.gyro = lt.omega_body[static_cast<size_t>(k)] + noise.gyro_bias +
                     noise3(noise.gyro_sigma);
            s.accel = rotate_vector_inverse(lt.q[static_cast<size_t>(k)],
                                            lt.tip_accel_w[static_cast<size_t>(k)]) +
                      noise3(noise.accel_sigma);
        }
    }
    return streams;
}

}  // namespace chaintrack
