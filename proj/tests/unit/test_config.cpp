#include <doctest.h>

#include <cstdio>
#include <string>

#include "chaintrack/config.hpp"
#include "chaintrack/errors.hpp"
#include "chaintrack/scenarios.hpp"

using namespace chaintrack;

namespace {

std::string temp_path(const char* name) {
    return std::string("/tmp/chaintrack_test_") + name + "_" + std::to_string(::getpid()) + ".json";
}

}  // namespace

TEST_CASE("config round trip preserves every field") {
    for (const std::string& name : scenario_names()) {
        const RunConfig config = make_scenario(name);
        const nlohmann::json j = to_json(config);
        const RunConfig back = config_from_json(j);
        CHECK(to_json(back).dump() == j.dump());
        CHECK(config_hash(back) == config_hash(config));
    }
}

TEST_CASE("config save/load file round trip") {
    const std::string path = temp_path("roundtrip");
    const RunConfig config = make_scenario("yaw_recovery");
    save_config(config, path);
    const RunConfig back = load_config(path);
    CHECK(to_json(back).dump() == to_json(config).dump());
    std::remove(path.c_str());
}

TEST_CASE("config errors name the offending field") {
    nlohmann::json j = to_json(make_scenario("drift_static"));

    nlohmann::json missing = j;
    missing["noise"].erase("accel_sigma");
    CHECK_THROWS_WITH_AS(config_from_json(missing),
                         doctest::Contains("noise.accel_sigma"), ConfigError);

    nlohmann::json negative = j;
    negative["noise"]["accel_sigma"] = -1.0;
    CHECK_THROWS_WITH_AS(config_from_json(negative),
                         doctest::Contains("noise.accel_sigma"), ConfigError);

    nlohmann::json bad_chain = j;
    bad_chain["chain"]["limbs"][1]["parent"] = nullptr;  // two roots now
    CHECK_THROWS_WITH_AS(config_from_json(bad_chain), doctest::Contains("chain"), ConfigError);

    nlohmann::json bad_gamma = j;
    bad_gamma["filter"]["gamma_max"] = 1.5;
    CHECK_THROWS_WITH_AS(config_from_json(bad_gamma),
                         doctest::Contains("filter.gamma_max"), ConfigError);

    nlohmann::json bad_rate = j;
    bad_rate["trajectory"]["sample_rate_hz"] = 0.0;
    CHECK_THROWS_WITH_AS(config_from_json(bad_rate),
                         doctest::Contains("trajectory.sample_rate_hz"), ConfigError);

    CHECK_THROWS_AS(load_config("/nonexistent/nowhere.json"), ConfigError);
}

TEST_CASE("config hash is sensitive to content") {
    const RunConfig a = make_scenario("drift_static");
    RunConfig b = a;
    b.noise.seed += 1;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("scenario average rates hit their targets") {
    CHECK(average_limb_rate(make_scenario("accel_slow").trajectory) ==
          doctest::Approx(0.72).epsilon(1e-6));
    CHECK(average_limb_rate(make_scenario("accel_fast").trajectory) ==
          doctest::Approx(2.13).epsilon(1e-6));
    CHECK(average_limb_rate(make_scenario("correction_moving").trajectory) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(average_limb_rate(make_scenario("accel_stationary").trajectory) == 0.0);
    CHECK_THROWS_AS(make_scenario("bogus"), ConfigError);
}

TEST_CASE("yaw scenario excitation averages 7 m/s^2") {
    const RunConfig config = make_scenario("yaw_recovery");
    double total = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i)
        total += norm(config.trajectory.root_accel.value(i * config.trajectory.duration_s / n));
    CHECK(total / n == doctest::Approx(7.0).epsilon(0.01));
}
