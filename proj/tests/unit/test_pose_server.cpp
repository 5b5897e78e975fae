#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chaintrack/bus.hpp"
#include "chaintrack/pose_server.hpp"
#include "chaintrack/scenarios.hpp"
#include "chaintrack/synth.hpp"

using namespace chaintrack;

namespace {

int pick_port() { return 18200 + (::getpid() % 700); }  // below the cli script's range

PoseSnapshot snapshot_stamped(std::uint64_t stamp) {
    PoseSnapshot snap;
    for (int id = 0; id < 3; ++id) snap.sensors.push_back(PoseEntry{id, Quat::identity(), stamp});
    return snap;
}

}  // namespace

TEST_CASE("pose endpoint serves the documented JSON schema") {
    RunConfig config = make_scenario("bus_moving");
    config.trajectory.duration_s = 1.0;
    const GroundTruth truth = integrate_truth(config.chain, config.trajectory);
    auto streams = synthesize_imu(truth, config.chain, config.noise);

    BusOptions options;
    BusSimulation bus(config.chain, std::move(streams), config.filter, config.schedule,
                      config.quant, options);

    SnapshotPublisher publisher;
    PoseServer server(publisher);
    const int port = pick_port();
    REQUIRE(server.start("127.0.0.1", port));

    // A second server cannot take the same port.
    PoseServer rival(publisher);
    CHECK_FALSE(rival.start("127.0.0.1", port));

    httplib::Client client("127.0.0.1", port);

    auto cycle = bus.step_cycle();
    REQUIRE(cycle.has_value());
    publisher.publish(cycle->snapshot);

    auto res = client.Get("/pose");
    REQUIRE(res);
    CHECK(res->status == 200);
    const nlohmann::json j = nlohmann::json::parse(res->body);
    REQUIRE(j.contains("sensors"));
    REQUIRE(j["sensors"].size() == 2);
    std::uint64_t first_ts = 0;
    for (const auto& s : j["sensors"]) {
        CHECK(s.contains("id"));
        REQUIRE(s["q"].size() == 4);
        const double n = std::sqrt(std::pow(s["q"][0].get<double>(), 2) +
                                   std::pow(s["q"][1].get<double>(), 2) +
                                   std::pow(s["q"][2].get<double>(), 2) +
                                   std::pow(s["q"][3].get<double>(), 2));
        CHECK(n >= 1.0 - 2e-4);
        CHECK(n <= 1.0 + 2e-4);
        first_ts = s["t_us"].get<std::uint64_t>();
    }

    // Timestamps advance between polls as the simulation runs.
    for (int i = 0; i < 5; ++i) {
        cycle = bus.step_cycle();
        REQUIRE(cycle.has_value());
    }
    publisher.publish(cycle->snapshot);
    res = client.Get("/pose");
    REQUIRE(res);
    const nlohmann::json j2 = nlohmann::json::parse(res->body);
    CHECK(j2["sensors"][0]["t_us"].get<std::uint64_t>() > first_ts);

    server.stop();
    CHECK_FALSE(server.running());
}

TEST_CASE("readers never observe a partially updated snapshot") {
    SnapshotPublisher publisher;
    publisher.publish(snapshot_stamped(0));

    std::atomic<bool> stop{false};
    std::atomic<int> torn{0};
    std::thread reader([&] {
        while (!stop) {
            const auto snap = publisher.latest();
            if (snap->sensors.empty()) continue;
            const std::uint64_t first = snap->sensors.front().t_us;
            for (const PoseEntry& e : snap->sensors)
                if (e.t_us != first) ++torn;
        }
    });

    for (std::uint64_t stamp = 1; stamp <= 20000; ++stamp) publisher.publish(snapshot_stamped(stamp));
    stop = true;
    reader.join();
    CHECK(torn == 0);

    CHECK(publisher.latest()->sensors.front().t_us == 20000);
}
