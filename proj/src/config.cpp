#include "chaintrack/config.hpp"

#include <fstream>
#include <sstream>

#include "chaintrack/errors.hpp"

namespace chaintrack {

namespace {

using nlohmann::json;

/// Fetch j[key], reporting `label` (the full dotted path) on failure.
double require_num(const json& j, const std::string& key, const std::string& label) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError("config field '" + label + "' is missing");
    if (!j[key].is_number()) throw ConfigError("config field '" + label + "' must be a number");
    return j[key].get<double>();
}

double optional_num(const json& j, const std::string& key, const std::string& path, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw ConfigError("config field '" + path + "' must be a number");
    return j[key].get<double>();
}

Vec3 vec3_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("config field '" + path + "' must be an array of 3 numbers");
    for (const auto& c : j)
        if (!c.is_number()) throw ConfigError("config field '" + path + "' must hold numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json program_to(const MotionProgram& p) {
    json j;
    j["constant"] = vec3_to(p.constant);
    json sins = json::array();
    for (const Sinusoid& s : p.sinusoids)
        sins.push_back({{"axis", s.axis},
                        {"amplitude", s.amplitude},
                        {"freq_hz", s.freq_hz},
                        {"phase", s.phase}});
    j["sinusoids"] = sins;
    return j;
}

MotionProgram program_from(const json& j, const std::string& path) {
    MotionProgram p;
    if (j.contains("constant")) p.constant = vec3_from(j["constant"], path + ".constant");
    if (j.contains("sinusoids")) {
        if (!j["sinusoids"].is_array())
            throw ConfigError("config field '" + path + ".sinusoids' must be an array");
        int idx = 0;
        for (const auto& js : j["sinusoids"]) {
            const std::string spath = path + ".sinusoids[" + std::to_string(idx++) + "]";
            Sinusoid s;
            s.axis = static_cast<int>(require_num(js, "axis", spath + ".axis"));
            if (s.axis < 0 || s.axis > 2)
                throw ConfigError("config field '" + spath + ".axis' must be 0, 1 or 2");
            s.amplitude = require_num(js, "amplitude", spath + ".amplitude");
            s.freq_hz = require_num(js, "freq_hz", spath + ".freq_hz");
            if (!(s.freq_hz > 0.0))
                throw ConfigError("config field '" + spath + ".freq_hz' must be > 0");
            s.phase = optional_num(js, "phase", spath + ".phase", 0.0);
            p.sinusoids.push_back(s);
        }
    }
    return p;
}

}  // namespace

nlohmann::json to_json(const RunConfig& config) {
    json j;
    j["version"] = 1;
    j["name"] = config.name;

    json limbs = json::array();
    for (const LimbNode& limb : config.chain.limbs) {
        json jl;
        jl["id"] = limb.id;
        if (limb.parent_id)
            jl["parent"] = *limb.parent_id;
        else
            jl["parent"] = nullptr;
        jl["length_r"] = limb.length_r;
        limbs.push_back(jl);
    }
    j["chain"]["limbs"] = limbs;

    json traj;
    traj["duration_s"] = config.trajectory.duration_s;
    traj["sample_rate_hz"] = config.trajectory.sample_rate_hz;
    traj["ambient_field"] = vec3_to(config.trajectory.ambient_field);
    traj["root_accel"] = program_to(config.trajectory.root_accel);
    json limb_omega = json::array();
    for (const MotionProgram& p : config.trajectory.limb_omega) limb_omega.push_back(program_to(p));
    traj["limb_omega"] = limb_omega;
    j["trajectory"] = traj;

    j["noise"] = {{"accel_sigma", config.noise.accel_sigma},
                  {"gyro_sigma", config.noise.gyro_sigma},
                  {"gyro_bias", vec3_to(config.noise.gyro_bias)},
                  {"seed", config.noise.seed}};

    j["filter"] = {{"noise_floor_mu", config.filter.noise_floor_mu},
                   {"snr_saturation", config.filter.snr_saturation},
                   {"gamma_max", config.filter.gamma_max},
                   {"beta_omega_ref", config.filter.beta_omega_ref},
                   {"beta_alpha_ref", config.filter.beta_alpha_ref}};

    j["schedule"] = {{"root_min_us", config.schedule.root_min_us},
                     {"root_max_us", config.schedule.root_max_us},
                     {"child_min_us", config.schedule.child_min_us},
                     {"child_max_us", config.schedule.child_max_us}};

    j["quant"] = {{"quat_full_scale", config.quant.quat.full_scale},
                  {"accel_full_scale", config.quant.accel.full_scale}};

    j["correction_rate_hz"] = config.correction_rate_hz;
    j["seed"] = config.seed;
    j["output_dir"] = config.output_dir;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig config;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ConfigError("config field 'name' must be a string");
        config.name = j["name"].get<std::string>();
    }

    if (!j.contains("chain") || !j["chain"].contains("limbs") || !j["chain"]["limbs"].is_array())
        throw ConfigError("config field 'chain.limbs' is missing or not an array");
    ChainSpec chain;
    int idx = 0;
    for (const auto& jl : j["chain"]["limbs"]) {
        const std::string path = "chain.limbs[" + std::to_string(idx++) + "]";
        LimbNode limb;
        limb.id = static_cast<int>(require_num(jl, "id", path + ".id"));
        if (jl.contains("parent") && !jl["parent"].is_null()) {
            if (!jl["parent"].is_number())
                throw ConfigError("config field '" + path + ".parent' must be a number or null");
            limb.parent_id = jl["parent"].get<int>();
        }
        limb.length_r = require_num(jl, "length_r", path + ".length_r");
        chain.limbs.push_back(limb);
    }
    try {
        config.chain = validate(std::move(chain));
    } catch (const ChainError& e) {
        throw ConfigError(std::string("config field 'chain': ") + e.what());
    }

    if (!j.contains("trajectory")) throw ConfigError("config field 'trajectory' is missing");
    const json& jt = j["trajectory"];
    config.trajectory.duration_s = require_num(jt, "duration_s", "trajectory.duration_s");
    if (!(config.trajectory.duration_s > 0.0))
        throw ConfigError("config field 'trajectory.duration_s' must be > 0");
    config.trajectory.sample_rate_hz = require_num(jt, "sample_rate_hz", "trajectory.sample_rate_hz");
    if (!(config.trajectory.sample_rate_hz > 0.0))
        throw ConfigError("config field 'trajectory.sample_rate_hz' must be > 0");
    if (jt.contains("ambient_field"))
        config.trajectory.ambient_field = vec3_from(jt["ambient_field"], "trajectory.ambient_field");
    if (jt.contains("root_accel"))
        config.trajectory.root_accel = program_from(jt["root_accel"], "trajectory.root_accel");
    if (!jt.contains("limb_omega") || !jt["limb_omega"].is_array())
        throw ConfigError("config field 'trajectory.limb_omega' is missing or not an array");
    idx = 0;
    for (const auto& jp : jt["limb_omega"]) {
        config.trajectory.limb_omega.push_back(
            program_from(jp, "trajectory.limb_omega[" + std::to_string(idx++) + "]"));
    }
    if (config.trajectory.limb_omega.size() != static_cast<size_t>(config.chain.size()))
        throw ConfigError("config field 'trajectory.limb_omega' must list one program per limb");

    if (!j.contains("noise")) throw ConfigError("config field 'noise' is missing");
    config.noise.accel_sigma = require_num(j["noise"], "accel_sigma", "noise.accel_sigma");
    config.noise.gyro_sigma = require_num(j["noise"], "gyro_sigma", "noise.gyro_sigma");
    if (config.noise.accel_sigma < 0.0)
        throw ConfigError("config field 'noise.accel_sigma' must be >= 0");
    if (config.noise.gyro_sigma < 0.0)
        throw ConfigError("config field 'noise.gyro_sigma' must be >= 0");
    if (j["noise"].contains("gyro_bias"))
        config.noise.gyro_bias = vec3_from(j["noise"]["gyro_bias"], "noise.gyro_bias");
    config.noise.seed =
        static_cast<std::uint64_t>(optional_num(j["noise"], "seed", "noise.seed", 0.0));

    if (j.contains("filter")) {
        const json& jf = j["filter"];
        FilterParams& f = config.filter;
        f.noise_floor_mu = optional_num(jf, "noise_floor_mu", "filter.noise_floor_mu", f.noise_floor_mu);
        f.snr_saturation = optional_num(jf, "snr_saturation", "filter.snr_saturation", f.snr_saturation);
        f.gamma_max = optional_num(jf, "gamma_max", "filter.gamma_max", f.gamma_max);
        f.beta_omega_ref = optional_num(jf, "beta_omega_ref", "filter.beta_omega_ref", f.beta_omega_ref);
        f.beta_alpha_ref = optional_num(jf, "beta_alpha_ref", "filter.beta_alpha_ref", f.beta_alpha_ref);
        if (!(f.noise_floor_mu > 0.0))
            throw ConfigError("config field 'filter.noise_floor_mu' must be > 0");
        if (!(f.gamma_max > 0.0 && f.gamma_max <= 1.0))
            throw ConfigError("config field 'filter.gamma_max' must be in (0, 1]");
        if (!(f.snr_saturation > 0.0))
            throw ConfigError("config field 'filter.snr_saturation' must be > 0");
        if (!(f.beta_omega_ref > 0.0) || !(f.beta_alpha_ref > 0.0))
            throw ConfigError("config field 'filter.beta_*_ref' values must be > 0");
    }

    if (j.contains("schedule")) {
        const json& js = j["schedule"];
        ScheduleModel& s = config.schedule;
        s.root_min_us = optional_num(js, "root_min_us", "schedule.root_min_us", s.root_min_us);
        s.root_max_us = optional_num(js, "root_max_us", "schedule.root_max_us", s.root_max_us);
        s.child_min_us = optional_num(js, "child_min_us", "schedule.child_min_us", s.child_min_us);
        s.child_max_us = optional_num(js, "child_max_us", "schedule.child_max_us", s.child_max_us);
        if (s.root_min_us < 0.0 || s.root_max_us < s.root_min_us)
            throw ConfigError("config field 'schedule.root_*_us' must satisfy 0 <= min <= max");
        if (s.child_min_us < 0.0 || s.child_max_us < s.child_min_us)
            throw ConfigError("config field 'schedule.child_*_us' must satisfy 0 <= min <= max");
    }

    if (j.contains("quant")) {
        config.quant.quat.full_scale =
            optional_num(j["quant"], "quat_full_scale", "quant.quat_full_scale", 1.0);
        config.quant.accel.full_scale =
            optional_num(j["quant"], "accel_full_scale", "quant.accel_full_scale", 156.9);
        if (!(config.quant.quat.full_scale > 0.0) || !(config.quant.accel.full_scale > 0.0))
            throw ConfigError("config field 'quant.*_full_scale' must be > 0");
    }

    config.correction_rate_hz = optional_num(j, "correction_rate_hz", "correction_rate_hz", 30.0);
    if (!(config.correction_rate_hz > 0.0))
        throw ConfigError("config field 'correction_rate_hz' must be > 0");
    config.seed = static_cast<std::uint64_t>(optional_num(j, "seed", "seed", 0.0));
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            throw ConfigError("config field 'output_dir' must be a string");
        config.output_dir = j["output_dir"].get<std::string>();
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write config file: " + path);
    out << to_json(config).dump(2) << "\n";
}

std::string config_hash(const RunConfig& config) {
    const std::string dump = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace chaintrack
