#include "chaintrack/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "chaintrack/errors.hpp"
#include "chaintrack/scenarios.hpp"

namespace chaintrack {

namespace {

constexpr double kYawErrorDeg = 90.0;

/// Noise spec for repetition `rep`: fresh white-noise seed and a fresh bias
/// direction at the configured magnitude.
NoiseSpec repetition_noise(const RunConfig& config, int rep) {
    NoiseSpec noise = config.noise;
    noise.seed = derive_stream_seed(config.seed, 2 * static_cast<std::uint64_t>(rep) + 1);
    const double bias_mag = norm(config.noise.gyro_bias);
    noise.gyro_bias =
        bias_mag * seeded_unit_vector(derive_stream_seed(config.seed, 2 * static_cast<std::uint64_t>(rep) + 2));
    return noise;
}

void seed_report(ScenarioReport& report, const RunConfig& config) {
    report.scenario = config.name;
    report.config_hash = config_hash(config);
    report.seed = config.seed;
}

}  // namespace

TrackedRunResult run_tracked_chain(const ChainSpec& chain,
                                   const std::vector<std::vector<ImuSample>>& streams,
                                   const TrackedRunOptions& options) {
    if (streams.size() != static_cast<size_t>(chain.size()))
        throw std::invalid_argument("one sample stream required per limb");
    const int n_samples = static_cast<int>(streams[0].size());
    if (n_samples < 2) throw std::invalid_argument("streams must hold at least two samples");
    const double dt = streams[0][1].t - streams[0][0].t;

    TrackedRunResult result;
    result.estimates.resize(streams.size());
    std::vector<EstimatorState> states;
    for (int id = 0; id < chain.size(); ++id) {
        const Quat q0 = options.initial_estimates.empty()
                            ? Quat::identity()
                            : options.initial_estimates[static_cast<size_t>(id)];
        states.push_back(EstimatorState::initial(q0, chain.limb(id).length_r));
        result.estimates[static_cast<size_t>(id)].assign(static_cast<size_t>(n_samples), q0);
    }

    const double corr_period = options.correction_rate_hz > 0.0
                                   ? 1.0 / options.correction_rate_hz
                                   : std::numeric_limits<double>::infinity();
    double next_corr = corr_period;

    for (int k = 1; k < n_samples; ++k) {
        const double t = streams[0][static_cast<size_t>(k)].t;

        // Corrections run before the sample is integrated: the velocity
        // difference inside predict_base_accel then spans two distinct
        // gyro readings. The first integrated sample must come first, so
        // the stored previous gyro is real.
        if (options.enable_corrections && k >= 2 && t + 1e-12 >= next_corr) {
            while (next_corr <= t + 1e-12) next_corr += corr_period;
            for (int id : chain.traversal_order) {
                if (chain.is_root(id)) continue;
                const int parent = *chain.limb(id).parent_id;
                const ImuSample& sample = streams[static_cast<size_t>(id)][static_cast<size_t>(k)];
                const ImuSample& parent_sample =
                    streams[static_cast<size_t>(parent)][static_cast<size_t>(k)];
                EstimatorState& st = states[static_cast<size_t>(id)];
                const Vec3 a_base =
                    predict_base_accel(st, sample.gyro, sample.accel, dt, options.params);
                const CorrectionResult corr = compute_correction(
                    st.q, a_base, states[static_cast<size_t>(parent)].q, parent_sample.accel,
                    options.params);
                st = apply_correction(st, corr);
                result.corrections.push_back(TrackedCorrection{id, k, corr});
            }
        }

        for (int id = 0; id < chain.size(); ++id) {
            const ImuSample& sample = streams[static_cast<size_t>(id)][static_cast<size_t>(k)];
            EstimatorState& st = states[static_cast<size_t>(id)];
            st = dead_reckon_step(st, sample.gyro, dt);
            result.estimates[static_cast<size_t>(id)][static_cast<size_t>(k)] = st.q;
        }
    }
    return result;
}

double ScenarioReport::extra_value(const std::string& key) const {
    for (const auto& [k, v] : extra)
        if (k == key) return v;
    throw std::invalid_argument("report has no metric '" + key + "'");
}

ExperimentOutput experiment_yaw_recovery(const RunConfig& config, int n_repetitions) {
    if (config.chain.size() < 2) throw ConfigError("yaw_recovery needs a chain of >= 2 limbs");
    const GroundTruth truth = integrate_truth(config.chain, config.trajectory);
    const int last = truth.sample_count() - 1;
    const Vec3 yaw_axis{0.0, 0.0, 1.0};
    const Quat injected = from_axis_angle(radians(kYawErrorDeg), yaw_axis);

    std::vector<double> final_yaws_deg;
    ExperimentOutput out;
    for (int rep = 0; rep < n_repetitions; ++rep) {
        const NoiseSpec noise = repetition_noise(config, rep);
        const auto streams = synthesize_imu(truth, config.chain, noise);

        TrackedRunOptions options;
        options.correction_rate_hz = config.correction_rate_hz;
        options.params = config.filter;
        options.initial_estimates.assign(static_cast<size_t>(config.chain.size()),
                                         Quat::identity());
        for (int id = 0; id < config.chain.size(); ++id) {
            if (!config.chain.is_root(id))
                options.initial_estimates[static_cast<size_t>(id)] =
                    compose(injected, truth.limbs[static_cast<size_t>(id)].q[0]);
        }

        const TrackedRunResult run = run_tracked_chain(config.chain, streams, options);

        double worst_final = 0.0;
        for (int id = 0; id < config.chain.size(); ++id) {
            if (config.chain.is_root(id)) continue;
            const Quat err = error_rotation(
                run.estimates[static_cast<size_t>(id)][static_cast<size_t>(last)],
                truth.limbs[static_cast<size_t>(id)].q[static_cast<size_t>(last)]);
            worst_final =
                std::max(worst_final, std::abs(degrees(twist_angle_about(err, yaw_axis))));
        }
        final_yaws_deg.push_back(worst_final);

        // Keep a per-correction trace of the last repetition for plotting.
        if (rep == n_repetitions - 1) {
            ErrorSeries yaw_series{"yaw_deg", {}};
            ErrorSeries accel_series{"lateral_accel_mag", {}};
            for (const TrackedCorrection& tc : run.corrections) {
                if (config.chain.is_root(tc.limb_id)) continue;
                const size_t k = static_cast<size_t>(tc.sample_index);
                const Quat err = error_rotation(
                    run.estimates[static_cast<size_t>(tc.limb_id)][k],
                    truth.limbs[static_cast<size_t>(tc.limb_id)].q[k]);
                yaw_series.values.push_back(std::abs(degrees(twist_angle_about(err, yaw_axis))));
                accel_series.values.push_back(
                    norm(config.trajectory.root_accel.value(truth.t[k])));
            }
            out.series.push_back(std::move(yaw_series));
            out.series.push_back(std::move(accel_series));
        }
    }

    seed_report(out.report, config);
    out.report.rmse = rmse(final_yaws_deg);
    out.report.mae = mae(final_yaws_deg);
    out.report.n = n_repetitions;
    out.report.extra.emplace_back("final_yaw_max_deg",
                                  *std::max_element(final_yaws_deg.begin(), final_yaws_deg.end()));
    out.report.extra.emplace_back("final_yaw_min_deg",
                                  *std::min_element(final_yaws_deg.begin(), final_yaws_deg.end()));
    out.report.extra.emplace_back("initial_yaw_deg", kYawErrorDeg);
    return out;
}

ExperimentOutput experiment_accel_prediction(const RunConfig& config) {
    const GroundTruth truth = integrate_truth(config.chain, config.trajectory);
    const auto streams = synthesize_imu(truth, config.chain, config.noise);
    const double dt = truth.dt;

    // Full-weight prediction: with a vanishing rate reference the weight
    // saturates at 1 for any nonzero gyro reading.
    FilterParams full = config.filter;
    full.beta_omega_ref = 1e-12;

    std::vector<double> err_with;
    std::vector<double> err_without;

    for (int id = 0; id < config.chain.size(); ++id) {
        EstimatorState st = EstimatorState::initial(Quat::identity(), config.chain.limb(id).length_r);
        const auto& stream = streams[static_cast<size_t>(id)];
        const LimbTruth& lt = truth.limbs[static_cast<size_t>(id)];
        for (size_t k = 1; k < stream.size(); ++k) {
            const ImuSample& sample = stream[k];
            if (k >= 2) {  // the stored previous gyro is real from here on
                const Vec3 pred_body = predict_base_accel(st, sample.gyro, sample.accel, dt, full);
                const Vec3 e_on = rotate_vector(st.q, pred_body) - lt.base_accel_w[k];
                const Vec3 e_off = rotate_vector(st.q, sample.accel) - lt.base_accel_w[k];
                err_with.insert(err_with.end(), {e_on.x, e_on.y, e_on.z});
                err_without.insert(err_without.end(), {e_off.x, e_off.y, e_off.z});
            }
            st = dead_reckon_step(st, sample.gyro, dt);
        }
    }

    ExperimentOutput out;
    seed_report(out.report, config);
    out.report.rmse = rmse(err_with);
    out.report.mae = mae(err_with);
    out.report.n = static_cast<int>(err_with.size());
    out.report.extra.emplace_back("rmse_no_prediction", rmse(err_without));
    out.report.extra.emplace_back("mae_no_prediction", mae(err_without));
    out.report.extra.emplace_back("improvement_factor", rmse(err_without) / out.report.rmse);
    return out;
}

ExperimentOutput experiment_drift_characterization(const RunConfig& config, int n_repetitions) {
    const GroundTruth truth = integrate_truth(config.chain, config.trajectory);
    const double dt = truth.dt;
    const int n_samples = truth.sample_count();
    const std::vector<double> thresholds_deg{0.25, 0.5, 1.0};
    const std::vector<double> horizons_s{5.0, 20.0, 60.0};

    std::vector<std::vector<double>> crossing_times(thresholds_deg.size());
    std::vector<std::vector<double>> drift_at(horizons_s.size());
    std::vector<int> censored(thresholds_deg.size(), 0);
    ExperimentOutput out;

    for (int rep = 0; rep < n_repetitions; ++rep) {
        const NoiseSpec noise = repetition_noise(config, rep);
        const auto streams = synthesize_imu(truth, config.chain, noise);

        // Dead reckoning only, tracked on the root sensor.
        const int id = config.chain.traversal_order.front();
        EstimatorState st = EstimatorState::initial(Quat::identity(), config.chain.limb(id).length_r);
        std::vector<double> err_deg(static_cast<size_t>(n_samples), 0.0);
        for (int k = 1; k < n_samples; ++k) {
            st = dead_reckon_step(st, streams[static_cast<size_t>(id)][static_cast<size_t>(k)].gyro, dt);
            err_deg[static_cast<size_t>(k)] = degrees(rotation_angle_between(
                st.q, truth.limbs[static_cast<size_t>(id)].q[static_cast<size_t>(k)]));
        }

        for (size_t ti = 0; ti < thresholds_deg.size(); ++ti) {
            bool crossed = false;
            for (int k = 1; k < n_samples; ++k) {
                if (err_deg[static_cast<size_t>(k)] >= thresholds_deg[ti]) {
                    const double e0 = err_deg[static_cast<size_t>(k - 1)];
                    const double e1 = err_deg[static_cast<size_t>(k)];
                    const double frac = e1 > e0 ? (thresholds_deg[ti] - e0) / (e1 - e0) : 1.0;
                    crossing_times[ti].push_back(((k - 1) + frac) * dt);
                    crossed = true;
                    break;
                }
            }
            if (!crossed) ++censored[ti];
        }
        for (size_t hi = 0; hi < horizons_s.size(); ++hi) {
            const int k = std::min(n_samples - 1,
                                   static_cast<int>(std::llround(horizons_s[hi] / dt)));
            drift_at[hi].push_back(err_deg[static_cast<size_t>(k)]);
        }
        if (rep == n_repetitions - 1) out.series.push_back(ErrorSeries{"drift_deg", err_deg});
    }

    seed_report(out.report, config);
    out.report.n = n_repetitions;
    out.report.rmse = rmse(drift_at.back());
    out.report.mae = mae(drift_at.back());
    auto push_stats = [&](const std::string& prefix, const std::vector<double>& v) {
        if (v.empty()) return;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        out.report.extra.emplace_back(prefix + "_mean", mean);
        out.report.extra.emplace_back(prefix + "_min", *std::min_element(v.begin(), v.end()));
        out.report.extra.emplace_back(prefix + "_max", *std::max_element(v.begin(), v.end()));
    };
    const std::vector<std::string> tnames{"time_to_0.25deg_s", "time_to_0.5deg_s",
                                          "time_to_1.0deg_s"};
    for (size_t ti = 0; ti < thresholds_deg.size(); ++ti) {
        push_stats(tnames[ti], crossing_times[ti]);
        out.report.extra.emplace_back("censored_" + tnames[ti],
                                      static_cast<double>(censored[ti]));
    }
    const std::vector<std::string> hnames{"drift_after_5s_deg", "drift_after_20s_deg",
                                          "drift_after_60s_deg"};
    for (size_t hi = 0; hi < horizons_s.size(); ++hi) push_stats(hnames[hi], drift_at[hi]);
    return out;
}

ExperimentOutput experiment_correction_accuracy(const RunConfig& config) {
    const GroundTruth truth = integrate_truth(config.chain, config.trajectory);
    const auto streams = synthesize_imu(truth, config.chain, config.noise);

    TrackedRunOptions options;
    options.correction_rate_hz = config.correction_rate_hz;
    options.params = config.filter;

    const TrackedRunResult run = run_tracked_chain(config.chain, streams, options);

    ErrorSeries theta{"theta_raw_deg", {}};
    ErrorSeries phi{"phi_filtered_deg", {}};
    for (const TrackedCorrection& tc : run.corrections) {
        theta.values.push_back(degrees(tc.corr.theta_raw));
        phi.values.push_back(degrees(tc.corr.phi));
    }
    if (theta.values.empty()) throw std::runtime_error("no corrections happened; config too short");

    ExperimentOutput out;
    seed_report(out.report, config);
    out.report.rmse = rmse(phi.values);
    out.report.mae = mae(phi.values);
    out.report.n = static_cast<int>(phi.values.size());
    out.report.extra.emplace_back("theta_rmse_deg", rmse(theta.values));
    out.report.extra.emplace_back("theta_mae_deg", mae(theta.values));
    out.series.push_back(std::move(theta));
    out.series.push_back(std::move(phi));
    return out;
}

ExperimentOutput run_experiment(const std::string& name, const RunConfig& config,
                                int n_repetitions) {
    if (name == "yaw_recovery")
        return experiment_yaw_recovery(config, n_repetitions > 0 ? n_repetitions : 20);
    if (name == "accel_prediction") return experiment_accel_prediction(config);
    if (name == "drift_characterization")
        return experiment_drift_characterization(config, n_repetitions > 0 ? n_repetitions : 50);
    if (name == "correction_accuracy") return experiment_correction_accuracy(config);
    throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<std::string> experiment_names() {
    return {"yaw_recovery", "accel_prediction", "drift_characterization", "correction_accuracy"};
}

nlohmann::json report_to_json(const ScenarioReport& report) {
    nlohmann::json j;
    j["scenario"] = report.scenario;
    j["rmse"] = report.rmse;
    j["mae"] = report.mae;
    j["n"] = report.n;
    j["config_hash"] = report.config_hash;
    j["seed"] = report.seed;
    nlohmann::json extra;
    for (const auto& [k, v] : report.extra) extra[k] = v;
    j["extra"] = extra;
    return j;
}

void write_report_csv(const ScenarioReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);
    out << "scenario,metric,value,n,seed\n";
    auto row = [&](const std::string& metric, double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << report.scenario << ',' << metric << ',' << buf << ',' << report.n << ','
            << report.seed << '\n';
    };
    row("rmse", report.rmse);
    row("mae", report.mae);
    for (const auto& [k, v] : report.extra) row(k, v);
}

void write_report_json(const ScenarioReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);
    out << report_to_json(report).dump(2) << "\n";
}

void write_series_data(const std::vector<ErrorSeries>& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write series data: " + path);
    out << "# index";
    size_t rows = 0;
    for (const ErrorSeries& s : series) {
        out << ' ' << s.label;
        rows = std::max(rows, s.values.size());
    }
    out << '\n';
    for (size_t i = 0; i < rows; ++i) {
        out << i;
        for (const ErrorSeries& s : series) {
            out << ' ';
            if (i < s.values.size()) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.10g", s.values[i]);
                out << buf;
            } else {
                out << "nan";
            }
        }
        out << '\n';
    }
}

}  // namespace chaintrack
