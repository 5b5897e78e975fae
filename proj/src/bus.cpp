#include "chaintrack/bus.hpp"

#include <cmath>
#include <stdexcept>

namespace chaintrack {

namespace {

void append_int16(std::vector<std::uint8_t>& out, std::int16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
}

std::vector<std::uint8_t> encode_accel_payload(const Vec3& a, const QuantChannel& ch) {
    std::vector<std::uint8_t> out;
    out.reserve(6);
    append_int16(out, ch.encode(a.x));
    append_int16(out, ch.encode(a.y));
    append_int16(out, ch.encode(a.z));
    return out;
}

std::vector<std::uint8_t> encode_reply_payload(const Quat& q, const Vec3& a,
                                               const QuantSpec& spec) {
    std::vector<std::uint8_t> out;
    out.reserve(14);
    append_int16(out, spec.quat.encode(q.w));
    append_int16(out, spec.quat.encode(q.x));
    append_int16(out, spec.quat.encode(q.y));
    append_int16(out, spec.quat.encode(q.z));
    append_int16(out, spec.accel.encode(a.x));
    append_int16(out, spec.accel.encode(a.y));
    append_int16(out, spec.accel.encode(a.z));
    return out;
}

Quat quantize_quat(const Quat& q, const QuantChannel& ch) {
    return Quat{ch.roundtrip(q.w), ch.roundtrip(q.x), ch.roundtrip(q.y), ch.roundtrip(q.z)};
}

Vec3 quantize_vec(const Vec3& v, const QuantChannel& ch) {
    return {ch.roundtrip(v.x), ch.roundtrip(v.y), ch.roundtrip(v.z)};
}

constexpr double kTimeSlackUs = 1e-6;

}  // namespace

std::uint64_t cycle_duration_us(const ScheduleModel& model, int n_sensors) {
    if (n_sensors < 1) throw std::invalid_argument("cycle_duration_us: need at least one sensor");
    const double d = model.root_mean_us() + (n_sensors - 1) * model.child_mean_us();
    return static_cast<std::uint64_t>(std::llround(d));
}

int operating_rate_hz(const ScheduleModel& model, int n_sensors) {
    return static_cast<int>(1000000 / cycle_duration_us(model, n_sensors));
}

BusSimulation::BusSimulation(const ChainSpec& chain, std::vector<std::vector<ImuSample>> streams,
                             const FilterParams& params, const ScheduleModel& schedule,
                             const QuantSpec& quant, const BusOptions& options)
    : chain_(chain),
      streams_(std::move(streams)),
      params_(params),
      schedule_(schedule),
      quant_(quant),
      options_(options),
      rng_(options.seed) {
    if (streams_.size() != static_cast<size_t>(chain_.size()))
        throw std::invalid_argument("one sample stream required per limb");

    dt_ = 0.0;
    stream_end_us_ = 0.0;
    sensors_.resize(streams_.size());
    hub_records_.resize(streams_.size());
    result_.estimates.resize(streams_.size());
    for (size_t i = 0; i < streams_.size(); ++i) {
        const auto& stream = streams_[i];
        if (stream.size() < 2) throw std::invalid_argument("stream underrun: need >= 2 samples");
        const double end_us = stream.back().t * 1e6;
        stream_end_us_ = (i == 0) ? end_us : std::min(stream_end_us_, end_us);
        if (i == 0) dt_ = stream[1].t - stream[0].t;

        sensors_[i].state =
            EstimatorState::initial(Quat::identity(), chain_.limb(static_cast<int>(i)).length_r);
        result_.estimates[i].assign(stream.size(), Quat::identity());
        // Sample 0 seeds the state; integration starts from sample 1.
        sensors_[i].next_sample = 1;
    }
}

double BusSimulation::draw_uniform_us(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng_);
}

void BusSimulation::advance_sensor(int id, double t_limit_us, bool allow_correction,
                                   const HubRecord* parent_record,
                                   std::vector<CorrectionEvent>* events) {
    SensorRuntime& s = sensors_[static_cast<size_t>(id)];
    const auto& stream = streams_[static_cast<size_t>(id)];
    const int n = static_cast<int>(stream.size());

    while (s.next_sample < n &&
           stream[static_cast<size_t>(s.next_sample)].t * 1e6 <= t_limit_us + kTimeSlackUs) {
        const ImuSample& sample = stream[static_cast<size_t>(s.next_sample)];
        const bool last_in_window =
            s.next_sample + 1 >= n ||
            stream[static_cast<size_t>(s.next_sample + 1)].t * 1e6 > t_limit_us + kTimeSlackUs;

        // Drift correction runs against the freshest sample of the service
        // window, before that sample is integrated. Held off until the
        // stored previous gyro comes from a real step.
        if (last_in_window && allow_correction && s.next_sample >= 2 && parent_record &&
            parent_record->valid) {
            const Vec3 a_base =
                predict_base_accel(s.state, sample.gyro, sample.accel, dt_, params_);
            CorrectionResult corr =
                compute_correction_world(s.state.q, a_base, parent_record->accel_world, params_);
            s.state = apply_correction(s.state, corr);
            if (events) {
                CorrectionEvent ev;
                ev.sensor_id = id;
                ev.t_us = static_cast<std::uint64_t>(std::llround(t_limit_us));
                ev.corr = corr;
                ev.parent_accel_age_us =
                    t_limit_us - static_cast<double>(parent_record->captured_us);
                events->push_back(ev);
            }
        }

        s.state = dead_reckon_step(s.state, sample.gyro, dt_);
        result_.estimates[static_cast<size_t>(id)][static_cast<size_t>(s.next_sample)] = s.state.q;
        ++s.next_sample;
    }
}

void BusSimulation::service_sensor(int id, double slot_start_us, double slot_end_us,
                                   std::vector<CorrectionEvent>* events) {
    const bool is_root = chain_.is_root(id);
    HubRecord fresh_record;
    const HubRecord* parent_record = nullptr;

    if (!is_root) {
        const int parent = *chain_.limb(id).parent_id;
        if (options_.ideal) {
            // No-bus baseline: parent state advanced to this instant, data
            // taken unquantized.
            advance_sensor(parent, slot_end_us, false, nullptr, nullptr);
            const SensorRuntime& ps = sensors_[static_cast<size_t>(parent)];
            const int idx = std::max(0, ps.next_sample - 1);
            const ImuSample& psample = streams_[static_cast<size_t>(parent)][static_cast<size_t>(idx)];
            fresh_record.accel_world = rotate_vector(ps.state.q, psample.accel);
            fresh_record.captured_us = static_cast<std::uint64_t>(std::llround(slot_end_us));
            fresh_record.valid = true;
            parent_record = &fresh_record;
        } else {
            parent_record = &hub_records_[static_cast<size_t>(parent)];
        }
    }

    if (options_.log_messages) {
        BusMessage down;
        down.direction = BusMessage::Direction::HubToSensor;
        down.sensor_id = id;
        down.timestamp_us = static_cast<std::uint64_t>(std::llround(slot_start_us));
        const Vec3 payload_accel =
            (parent_record && parent_record->valid) ? parent_record->accel_world : Vec3::zero();
        down.payload = encode_accel_payload(payload_accel, quant_.accel);
        result_.messages.push_back(std::move(down));
    }

    advance_sensor(id, slot_end_us, !is_root, parent_record, events);

    // Reply with the current orientation and the latest reading in world
    // frame; both cross the wire as 16-bit values.
    SensorRuntime& s = sensors_[static_cast<size_t>(id)];
    const int idx = std::max(0, s.next_sample - 1);
    const ImuSample& sample = streams_[static_cast<size_t>(id)][static_cast<size_t>(idx)];
    const Vec3 a_world = rotate_vector(s.state.q, sample.accel);
    const std::uint64_t end_stamp = static_cast<std::uint64_t>(std::llround(slot_end_us));

    HubRecord& rec = hub_records_[static_cast<size_t>(id)];
    rec.accel_world = options_.ideal ? a_world : quantize_vec(a_world, quant_.accel);
    rec.captured_us = end_stamp;
    rec.valid = true;

    const Quat q_pub =
        options_.ideal ? s.state.q : quantize_quat(s.state.q, quant_.quat);
    bool found = false;
    for (PoseEntry& e : snapshot_.sensors) {
        if (e.sensor_id == id) {
            e.q = q_pub;
            e.t_us = end_stamp;
            found = true;
            break;
        }
    }
    if (!found) snapshot_.sensors.push_back(PoseEntry{id, q_pub, end_stamp});

    if (options_.log_messages) {
        BusMessage up;
        up.direction = BusMessage::Direction::SensorToHub;
        up.sensor_id = id;
        up.timestamp_us = end_stamp;
        up.payload = encode_reply_payload(s.state.q, a_world, quant_);
        result_.messages.push_back(std::move(up));
    }
}

std::optional<BusSimulation::CycleResult> BusSimulation::step_cycle() {
    const double worst_case =
        schedule_.root_max_us + (chain_.size() - 1) * schedule_.child_max_us;
    if (now_us_ + worst_case > stream_end_us_) return std::nullopt;

    CycleResult cycle;
    cycle.start_us = static_cast<std::uint64_t>(std::llround(now_us_));
    for (size_t pos = 0; pos < chain_.traversal_order.size(); ++pos) {
        const int id = chain_.traversal_order[pos];
        const bool is_root = chain_.is_root(id);
        const double slot = is_root ? draw_uniform_us(schedule_.root_min_us, schedule_.root_max_us)
                                    : draw_uniform_us(schedule_.child_min_us, schedule_.child_max_us);
        const double slot_start = now_us_;
        now_us_ += slot;
        service_sensor(id, slot_start, now_us_, &cycle.corrections);
    }
    cycle.end_us = static_cast<std::uint64_t>(std::llround(now_us_));
    cycle.snapshot = snapshot_;
    ++result_.cycles;
    return cycle;
}

void BusSimulation::flush_remaining_samples() {
    for (int id = 0; id < chain_.size(); ++id)
        advance_sensor(id, stream_end_us_ + 1.0, false, nullptr, nullptr);
}

BusRunResult BusSimulation::run_all() {
    while (auto cycle = step_cycle()) {
        for (auto& ev : cycle->corrections) result_.corrections.push_back(ev);
    }
    flush_remaining_samples();
    return take_result();
}

BusRunResult BusSimulation::take_result() { return std::move(result_); }

std::optional<double> mean_parent_accel_staleness_us(const ScheduleModel& model,
                                                     const ChainSpec& chain, std::uint64_t seed,
                                                     int n_cycles) {
    if (chain.size() < 2) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> root_slot(model.root_min_us, model.root_max_us);
    std::uniform_real_distribution<double> child_slot(model.child_min_us, model.child_max_us);

    std::vector<double> end_time(static_cast<size_t>(chain.size()), 0.0);
    double t = 0.0;
    double total = 0.0;
    long count = 0;
    for (int c = 0; c < n_cycles; ++c) {
        for (size_t pos = 0; pos < chain.traversal_order.size(); ++pos) {
            const int id = chain.traversal_order[pos];
            t += chain.is_root(id) ? root_slot(rng) : child_slot(rng);
            end_time[static_cast<size_t>(id)] = t;
        }
        for (int id : chain.traversal_order) {
            if (chain.is_root(id)) continue;
            total += end_time[static_cast<size_t>(id)] -
                     end_time[static_cast<size_t>(*chain.limb(id).parent_id)];
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

std::optional<double> mean_parent_accel_staleness_us(const ScheduleModel& model, int n_sensors,
                                                     std::uint64_t seed, int n_cycles) {
    if (n_sensors < 2) return std::nullopt;
    return mean_parent_accel_staleness_us(
        model, make_serial_chain(std::vector<double>(static_cast<size_t>(n_sensors), 0.5)), seed,
        n_cycles);
}

}  // namespace chaintrack
