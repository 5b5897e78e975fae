// chaintrack command line:
//   simulate  - write ground truth and synthetic IMU traces for a config
//   estimate  - run the tracker over traces and write a pose log
//   evaluate  - run a named experiment and write its report
//   serve     - run a live simulation and serve GET /pose snapshots
//   export    - convert traces between the CSV and binary formats

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "chaintrack/bus.hpp"
#include "chaintrack/config.hpp"
#include "chaintrack/errors.hpp"
#include "chaintrack/experiments.hpp"
#include "chaintrack/pose_server.hpp"
#include "chaintrack/scenarios.hpp"
#include "chaintrack/trace_io.hpp"

namespace fs = std::filesystem;
using namespace chaintrack;

namespace {

std::atomic<bool> g_stop{false};

RunConfig resolve_config(const std::string& config_path, const std::string& scenario) {
    if (!config_path.empty()) return load_config(config_path);
    if (!scenario.empty()) return make_scenario(scenario);
    throw ConfigError("either --config or --scenario is required");
}

struct SimOutputs {
    GroundTruth truth;
    std::vector<std::vector<ImuSample>> streams;
};

SimOutputs simulate(const RunConfig& config) {
    SimOutputs out;
    out.truth = integrate_truth(config.chain, config.trajectory);
    out.streams = synthesize_imu(out.truth, config.chain, config.noise);
    return out;
}

int cmd_simulate(const RunConfig& config, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const SimOutputs sim = simulate(config);
    for (int id = 0; id < config.chain.size(); ++id) {
        const std::string base = out_dir + "/sensor" + std::to_string(id);
        write_trace_csv(sim.streams[static_cast<size_t>(id)], base + ".csv");
        write_trace_binary(sim.streams[static_cast<size_t>(id)], base + ".bin");
        write_truth_csv(sim.truth, id, out_dir + "/truth" + std::to_string(id) + ".csv");
        std::cout << base << ".csv " << base << ".bin\n";
    }
    save_config(config, out_dir + "/config.json");
    std::cout << "wrote " << config.chain.size() << " sensor trace(s) to " << out_dir << "\n";
    return 0;
}

int cmd_estimate(const RunConfig& config, const std::string& traces_dir,
                 const std::string& out_path, bool ideal, bool dump_messages) {
    std::vector<std::vector<ImuSample>> streams;
    for (int id = 0; id < config.chain.size(); ++id) {
        const std::string bin = traces_dir + "/sensor" + std::to_string(id) + ".bin";
        const std::string csv = traces_dir + "/sensor" + std::to_string(id) + ".csv";
        if (fs::exists(bin))
            streams.push_back(read_trace_binary(bin));
        else if (fs::exists(csv))
            streams.push_back(read_trace_csv(csv));
        else
            throw IoError("missing trace for sensor " + std::to_string(id) + " under " + traces_dir);
    }

    BusOptions options;
    options.seed = config.seed;
    options.ideal = ideal;
    options.log_messages = dump_messages;
    BusSimulation bus(config.chain, std::move(streams), config.filter, config.schedule,
                      config.quant, options);

    std::vector<PoseLogEntry> log;
    while (auto cycle = bus.step_cycle()) {
        for (const PoseEntry& e : cycle->snapshot.sensors)
            log.push_back(PoseLogEntry{e.t_us, e.sensor_id, e.q});
    }
    const BusRunResult result = bus.take_result();
    write_pose_log_csv(log, out_path);
    std::cout << "wrote pose log (" << log.size() << " rows, " << result.cycles << " bus cycles) to "
              << out_path << "\n";
    if (dump_messages) {
        const std::string msg_path = out_path + ".messages.csv";
        write_message_log(result.messages, msg_path);
        std::cout << "wrote message log (" << result.messages.size() << " messages) to "
                  << msg_path << "\n";
    }
    return 0;
}

int cmd_evaluate(const RunConfig& config, const std::string& experiment, int repetitions,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    const ExperimentOutput out = run_experiment(experiment, config, repetitions);
    const std::string base = out_dir + "/" + experiment;
    write_report_csv(out.report, base + "_report.csv");
    write_report_json(out.report, base + "_report.json");
    if (!out.series.empty()) write_series_data(out.series, base + "_series.dat");
    std::cout << experiment << ": rmse=" << out.report.rmse << " mae=" << out.report.mae
              << " n=" << out.report.n << "\n";
    std::cout << "report written to " << base << "_report.{csv,json}\n";
    return 0;
}

int cmd_serve(const RunConfig& config, const std::string& host, int port, bool once) {
    SnapshotPublisher publisher;
    PoseServer server(publisher);
    if (!server.start(host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << " (port in use?)\n";
        return 1;
    }
    std::cout << "serving GET /pose on " << host << ":" << port << "\n";

    std::signal(SIGINT, [](int) { g_stop = true; });
    std::signal(SIGTERM, [](int) { g_stop = true; });

    std::uint64_t pass = 0;
    while (!g_stop) {
        RunConfig run = config;
        run.noise.seed = derive_stream_seed(config.noise.seed, pass);
        const SimOutputs sim = simulate(run);
        BusOptions options;
        options.seed = derive_stream_seed(config.seed, pass);
        BusSimulation bus(run.chain, sim.streams, run.filter, run.schedule, run.quant, options);
        std::uint64_t last_end = 0;
        while (!g_stop) {
            auto cycle = bus.step_cycle();
            if (!cycle) break;
            publisher.publish(cycle->snapshot);
            // Pace the loop roughly in real time.
            std::this_thread::sleep_for(std::chrono::microseconds(cycle->end_us - last_end));
            last_end = cycle->end_us;
        }
        ++pass;
        if (once) break;
    }
    server.stop();
    return 0;
}

int cmd_export(const std::string& in_path, const std::string& out_path) {
    write_trace(read_trace(in_path), out_path);
    std::cout << "converted " << in_path << " -> " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IMU kinematic-chain tracking simulator and evaluator"};
    app.require_subcommand(1);

    std::string config_path, scenario, out_dir = "out", traces_dir, out_path, in_path;
    std::string host = "127.0.0.1";
    std::string experiment = "yaw_recovery";
    int port = 8080;
    int repetitions = 0;
    std::uint64_t seed_override = 0;
    bool have_seed = false, ideal = false, dump_messages = false, once = false;

    auto add_config_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration file (JSON)");
        cmd->add_option("--scenario", scenario, "built-in scenario name");
        cmd->add_option("--seed", seed_override, "override the config seed")
            ->each([&](const std::string&) { have_seed = true; });
    };

    CLI::App* sim = app.add_subcommand("simulate", "write truth and IMU traces");
    add_config_opts(sim);
    sim->add_option("--out", out_dir, "output directory");

    CLI::App* est = app.add_subcommand("estimate", "run the tracker over recorded traces");
    add_config_opts(est);
    est->add_option("--traces", traces_dir, "directory holding sensorN traces")->required();
    est->add_option("--out", out_path, "pose log path")->default_val("poses.csv");
    est->add_flag("--ideal", ideal, "bypass quantization and bus staleness");
    est->add_flag("--dump-messages", dump_messages, "also write the bus message log");

    CLI::App* eval = app.add_subcommand("evaluate", "run a named experiment");
    add_config_opts(eval);
    eval->add_option("--experiment", experiment, "experiment name")->required();
    eval->add_option("--repetitions", repetitions, "seeded repetitions (0 = default)");
    eval->add_option("--out", out_dir, "output directory");

    CLI::App* srv = app.add_subcommand("serve", "live simulation with a JSON pose endpoint");
    add_config_opts(srv);
    srv->add_option("--host", host, "bind address");
    srv->add_option("--port", port, "TCP port");
    srv->add_flag("--once", once, "stop after one pass over the trajectory");

    CLI::App* exp = app.add_subcommand("export", "convert a trace between csv and binary");
    exp->add_option("--in", in_path, "input trace")->required();
    exp->add_option("--out", out_path, "output trace")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(exp)) return cmd_export(in_path, out_path);

        RunConfig config = resolve_config(config_path, scenario);
        if (have_seed) config.seed = seed_override;

        if (app.got_subcommand(sim)) return cmd_simulate(config, out_dir);
        if (app.got_subcommand(est)) return cmd_estimate(config, traces_dir, out_path, ideal,
                                                         dump_messages);
        if (app.got_subcommand(eval)) return cmd_evaluate(config, experiment, repetitions, out_dir);
        if (app.got_subcommand(srv)) return cmd_serve(config, host, port, once);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
