// Discrete-event simulation of the hub/sensor bus.
//
// The hub services sensors in depth-first chain order, looping forever:
// it sends each sensor its parent's latest world-frame acceleration
// (6 bytes, three 16-bit values; zeroed dummy data for the root, which is
// never corrected), the sensor corrects its drift and replies with its
// orientation and world acceleration (14 bytes, seven 16-bit values).
// Dead reckoning runs at the full sample rate between service slots; the
// correction uses whatever parent data the hub captured earlier in the
// cycle, so a child's reference acceleration is one service slot stale.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "chaintrack/chain.hpp"
#include "chaintrack/estimator.hpp"
#include "chaintrack/quantize.hpp"
#include "chaintrack/synth.hpp"

namespace chaintrack {

/// Per-sensor service-time model (microseconds). Durations vary with
/// interrupt timing; the simulation draws them uniformly from [min, max].
struct ScheduleModel {
    double root_min_us = 0.0;
    double root_max_us = 2300.0;
    double child_min_us = 4100.0;
    double child_max_us = 6400.0;

    double root_mean_us() const { return 0.5 * (root_min_us + root_max_us); }
    double child_mean_us() const { return 0.5 * (child_min_us + child_max_us); }
};

/// Mean duration of one full service loop over n sensors (one root slot
/// plus n-1 child slots). Requires n >= 1.
std::uint64_t cycle_duration_us(const ScheduleModel& model, int n_sensors);

/// Corrections per second the loop sustains: floor(1e6 / cycle duration).
int operating_rate_hz(const ScheduleModel& model, int n_sensors);

struct BusMessage {
    enum class Direction { HubToSensor, SensorToHub };
    Direction direction = Direction::HubToSensor;
    int sensor_id = 0;
    std::uint64_t timestamp_us = 0;
    std::vector<std::uint8_t> payload;  // 6 bytes down, 14 bytes up
};

struct PoseEntry {
    int sensor_id = 0;
    Quat q;
    std::uint64_t t_us = 0;
};

/// Latest hub-side view of every sensor's orientation.
struct PoseSnapshot {
    std::vector<PoseEntry> sensors;
};

struct CorrectionEvent {
    int sensor_id = 0;
    std::uint64_t t_us = 0;
    CorrectionResult corr;
    double parent_accel_age_us = 0.0;
};

struct BusOptions {
    std::uint64_t seed = 0;
    bool ideal = false;         // fresh, unquantized parent data (no-bus baseline)
    bool log_messages = false;
};

struct BusRunResult {
    std::vector<std::vector<Quat>> estimates;  // [limb][sample], post-processing
    std::vector<CorrectionEvent> corrections;
    std::vector<BusMessage> messages;          // only when log_messages
    int cycles = 0;
};

/// Event-driven run over pre-synthesized sample streams.
class BusSimulation {
public:
    BusSimulation(const ChainSpec& chain, std::vector<std::vector<ImuSample>> streams,
                  const FilterParams& params, const ScheduleModel& schedule,
                  const QuantSpec& quant, const BusOptions& options);

    struct CycleResult {
        std::uint64_t start_us = 0;
        std::uint64_t end_us = 0;
        std::vector<CorrectionEvent> corrections;
        PoseSnapshot snapshot;
    };

    /// Run one hub service loop. Returns nothing once the streams can no
    /// longer cover the next cycle.
    std::optional<CycleResult> step_cycle();

    /// Latest hub snapshot (updated as each sensor replies).
    const PoseSnapshot& snapshot() const { return snapshot_; }

    /// Drive cycles until the streams are exhausted, then dead-reckon any
    /// trailing samples so every estimate slot is filled.
    BusRunResult run_all();

    /// Finish the estimate series without further cycles.
    void flush_remaining_samples();

    BusRunResult take_result();

private:
    struct SensorRuntime {
        EstimatorState state;
        int next_sample = 0;
    };
    struct HubRecord {
        Vec3 accel_world;
        std::uint64_t captured_us = 0;
        bool valid = false;
    };

    void advance_sensor(int id, double t_limit_us, bool allow_correction,
                        const HubRecord* parent_record,
                        std::vector<CorrectionEvent>* events);
    void service_sensor(int id, double slot_start_us, double slot_end_us,
                        std::vector<CorrectionEvent>* events);

    ChainSpec chain_;
    std::vector<std::vector<ImuSample>> streams_;
    FilterParams params_;
    ScheduleModel schedule_;
    QuantSpec quant_;
    BusOptions options_;

    std::vector<SensorRuntime> sensors_;
    std::vector<HubRecord> hub_records_;
    PoseSnapshot snapshot_;
    BusRunResult result_;
    double now_us_ = 0.0;
    double dt_ = 0.0;
    double stream_end_us_ = 0.0;
    std::mt19937_64 rng_;

    double draw_uniform_us(double lo, double hi);
};

/// Mean age of the parent acceleration at child correction time for a
/// serial chain of n sensors, measured over simulated cycles. Empty for
/// n < 2 (no corrections happen).
std::optional<double> mean_parent_accel_staleness_us(const ScheduleModel& model, int n_sensors,
                                                     std::uint64_t seed = 1,
                                                     int n_cycles = 4000);

/// Tree-shaped variant: staleness is accumulated per non-root sensor in
/// depth-first service order (a sibling subtree serviced between a parent
/// and its child ages the data further).
std::optional<double> mean_parent_accel_staleness_us(const ScheduleModel& model,
                                                     const ChainSpec& chain,
                                                     std::uint64_t seed = 1, int n_cycles = 4000);

}  // namespace chaintrack
