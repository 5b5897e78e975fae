#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chaintrack/bus.hpp"
#include "chaintrack/chain.hpp"
#include "chaintrack/config.hpp"
#include "chaintrack/estimator.hpp"
#include "chaintrack/experiments.hpp"
#include "chaintrack/metrics.hpp"
#include "chaintrack/quantize.hpp"
#include "chaintrack/rotmath.hpp"
#include "chaintrack/scenarios.hpp"
#include "chaintrack/synth.hpp"

namespace py = pybind11;
using namespace chaintrack;

namespace {

Vec3 vec3_from_seq(const py::sequence& s) {
    if (s.size() != 3) throw py::value_error("expected a sequence of 3 numbers");
    return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

}  // namespace

PYBIND11_MODULE(chaintrack, m) {
    m.doc() = "IMU kinematic-chain tracking: simulation, estimation and evaluation";

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }))
        .def(py::init(&vec3_from_seq))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("__iter__",
             [](const Vec3& v) { return py::iter(py::make_tuple(v.x, v.y, v.z)); })
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                   std::to_string(v.z) + ")";
        });
    py::implicitly_convertible<py::sequence, Vec3>();

    m.def("dot", [](const Vec3& a, const Vec3& b) { return dot(a, b); });
    m.def("cross", [](const Vec3& a, const Vec3& b) { return cross(a, b); });
    m.def("norm", [](const Vec3& v) { return norm(v); });

    py::class_<Quat>(m, "Quat")
        .def(py::init<>())
        .def(py::init([](double w, double x, double y, double z) {
            return Quat{w, x, y, z}.normalized();
        }))
        .def_readonly("w", &Quat::w)
        .def_readonly("x", &Quat::x)
        .def_readonly("y", &Quat::y)
        .def_readonly("z", &Quat::z)
        .def_static("identity", &Quat::identity)
        .def("conjugate", &Quat::conjugate)
        .def("inverse", &Quat::inverse)
        .def("norm", &Quat::norm)
        .def("__iter__",
             [](const Quat& q) { return py::iter(py::make_tuple(q.w, q.x, q.y, q.z)); })
        .def("__repr__", [](const Quat& q) {
            return "Quat(" + std::to_string(q.w) + ", " + std::to_string(q.x) + ", " +
                   std::to_string(q.y) + ", " + std::to_string(q.z) + ")";
        });

    m.def("from_axis_angle", &from_axis_angle, py::arg("angle"), py::arg("axis"));
    m.def("rotate_vector", &rotate_vector);
    m.def("compose", &compose);
    m.def("rotation_angle_between", &rotation_angle_between);
    m.def("slerp", &slerp);

    py::class_<LimbNode>(m, "LimbNode")
        .def(py::init([](int id, std::optional<int> parent, double length_r) {
            LimbNode limb;
            limb.id = id;
            limb.parent_id = parent;
            limb.length_r = length_r;
            return limb;
        }), py::arg("id"), py::arg("parent"), py::arg("length_r"))
        .def_readwrite("id", &LimbNode::id)
        .def_readwrite("parent_id", &LimbNode::parent_id)
        .def_readwrite("length_r", &LimbNode::length_r);

    py::class_<ChainSpec>(m, "ChainSpec")
        .def(py::init<>())
        .def_readwrite("limbs", &ChainSpec::limbs)
        .def_readonly("traversal_order", &ChainSpec::traversal_order)
        .def("size", &ChainSpec::size);

    m.def("validate", &validate);
    m.def("children_of", &children_of);
    m.def("make_serial_chain", &make_serial_chain);

    py::class_<EstimatorState>(m, "EstimatorState")
        .def_static("initial", &EstimatorState::initial, py::arg("q0"), py::arg("limb_length_r"))
        .def_readonly("q", &EstimatorState::q)
        .def_readonly("q_prev", &EstimatorState::q_prev)
        .def_readonly("omega_prev", &EstimatorState::omega_prev)
        .def_readonly("limb_length_r", &EstimatorState::limb_length_r);

    py::class_<FilterParams>(m, "FilterParams")
        .def(py::init<>())
        .def_readwrite("noise_floor_mu", &FilterParams::noise_floor_mu)
        .def_readwrite("snr_saturation", &FilterParams::snr_saturation)
        .def_readwrite("gamma_max", &FilterParams::gamma_max)
        .def_readwrite("beta_omega_ref", &FilterParams::beta_omega_ref)
        .def_readwrite("beta_alpha_ref", &FilterParams::beta_alpha_ref);

    py::class_<CorrectionResult>(m, "CorrectionResult")
        .def_readonly("theta_raw", &CorrectionResult::theta_raw)
        .def_readonly("phi", &CorrectionResult::phi)
        .def_readonly("axis_world", &CorrectionResult::axis_world)
        .def_readonly("snr", &CorrectionResult::snr)
        .def_readonly("applied", &CorrectionResult::applied);

    m.def("dead_reckon_step", &dead_reckon_step);
    m.def("predict_tip_velocity", &predict_tip_velocity);
    m.def("predict_base_accel", &predict_base_accel);
    m.def("compute_correction", &compute_correction);
    m.def("compute_correction_world", &compute_correction_world);
    m.def("apply_correction", &apply_correction);
    m.def("gamma", &chaintrack::gamma);
    m.def("beta", &chaintrack::beta);
    m.def("estimate_noise_floor", &estimate_noise_floor);

    py::class_<QuantChannel>(m, "QuantChannel")
        .def(py::init([](double full_scale) { return QuantChannel{full_scale}; }))
        .def_readonly("full_scale", &QuantChannel::full_scale)
        .def("encode", &QuantChannel::encode)
        .def("decode", &QuantChannel::decode)
        .def("roundtrip", &QuantChannel::roundtrip)
        .def("max_error", &QuantChannel::max_error);

    py::class_<ScheduleModel>(m, "ScheduleModel")
        .def(py::init<>())
        .def_readwrite("root_min_us", &ScheduleModel::root_min_us)
        .def_readwrite("root_max_us", &ScheduleModel::root_max_us)
        .def_readwrite("child_min_us", &ScheduleModel::child_min_us)
        .def_readwrite("child_max_us", &ScheduleModel::child_max_us);

    m.def("cycle_duration_us", &cycle_duration_us);
    m.def("operating_rate_hz", &operating_rate_hz);
    m.def(
        "mean_parent_accel_staleness_us",
        [](const ScheduleModel& model, int n_sensors) {
            return mean_parent_accel_staleness_us(model, n_sensors);
        },
        py::arg("model"), py::arg("n_sensors"));

    m.def("rmse", [](const std::vector<double>& v) { return rmse(v); });
    m.def("mae", [](const std::vector<double>& v) { return mae(v); });

    py::class_<ScenarioReport>(m, "ScenarioReport")
        .def_readonly("scenario", &ScenarioReport::scenario)
        .def_readonly("rmse", &ScenarioReport::rmse)
        .def_readonly("mae", &ScenarioReport::mae)
        .def_readonly("n", &ScenarioReport::n)
        .def_readonly("config_hash", &ScenarioReport::config_hash)
        .def_readonly("seed", &ScenarioReport::seed)
        .def_readonly("extra", &ScenarioReport::extra)
        .def("extra_value", &ScenarioReport::extra_value);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init<>())
        .def_readwrite("accel_sigma", &NoiseSpec::accel_sigma)
        .def_readwrite("gyro_sigma", &NoiseSpec::gyro_sigma)
        .def_readwrite("gyro_bias", &NoiseSpec::gyro_bias)
        .def_readwrite("seed", &NoiseSpec::seed);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("name", &RunConfig::name)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("correction_rate_hz", &RunConfig::correction_rate_hz)
        .def_readwrite("noise", &RunConfig::noise)
        .def_readwrite("filter", &RunConfig::filter)
        .def_property(
            "duration_s",
            [](const RunConfig& c) { return c.trajectory.duration_s; },
            [](RunConfig& c, double v) { c.trajectory.duration_s = v; });

    m.def("make_scenario", &make_scenario);
    m.def("scenario_names", &scenario_names);
    m.def("load_config", &load_config);
    m.def("save_config", &save_config);
    m.def("config_hash", &config_hash);

    m.def(
        "run_experiment",
        [](const std::string& name, const RunConfig& config, int n_repetitions) {
            return run_experiment(name, config, n_repetitions).report;
        },
        py::arg("name"), py::arg("config"), py::arg("n_repetitions") = 0,
        "Run a named experiment and return its report");
    m.def("experiment_names", &experiment_names);
}
