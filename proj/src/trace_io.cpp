#include "chaintrack/trace_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chaintrack/errors.hpp"

namespace chaintrack {

namespace {

constexpr char kTraceMagic[4] = {'C', 'T', 'R', 'C'};
constexpr std::uint32_t kTraceVersion = 1;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_trace_csv(const std::vector<ImuSample>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace: " + path);
    out << "t,gx,gy,gz,ax,ay,az\n";
    for (const ImuSample& s : samples) {
        out << fmt(s.t) << ',' << fmt(s.gyro.x) << ',' << fmt(s.gyro.y) << ',' << fmt(s.gyro.z)
            << ',' << fmt(s.accel.x) << ',' << fmt(s.accel.y) << ',' << fmt(s.accel.z) << '\n';
    }
}

std::vector<ImuSample> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trace file: " + path);
    if (line != "t,gx,gy,gz,ax,ay,az")
        throw IoError("unexpected trace header in " + path + ": " + line);
    std::vector<ImuSample> samples;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double v[7];
        for (int i = 0; i < 7; ++i) {
            if (!std::getline(row, cell, ','))
                throw IoError(path + ": short row at line " + std::to_string(line_no));
            v[i] = std::strtod(cell.c_str(), nullptr);
        }
        samples.push_back(ImuSample{v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}});
    }
    return samples;
}

void write_trace_binary(const std::vector<ImuSample>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write trace: " + path);
    out.write(kTraceMagic, 4);
    const std::uint32_t version = kTraceVersion;
    const std::uint64_t count = samples.size();
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const ImuSample& s : samples) {
        const double row[7] = {s.t, s.gyro.x, s.gyro.y, s.gyro.z, s.accel.x, s.accel.y, s.accel.z};
        out.write(reinterpret_cast<const char*>(row), sizeof(row));
    }
}

std::vector<ImuSample> read_trace_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace: " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || std::memcmp(magic, kTraceMagic, 4) != 0)
        throw IoError("not a chaintrack trace file: " + path);
    if (version != kTraceVersion)
        throw IoError("unsupported trace version " + std::to_string(version) + " in " + path);
    std::vector<ImuSample> samples(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double row[7];
        in.read(reinterpret_cast<char*>(row), sizeof(row));
        if (!in) throw IoError("truncated trace file: " + path);
        samples[i] = ImuSample{row[0], {row[1], row[2], row[3]}, {row[4], row[5], row[6]}};
    }
    return samples;
}

void write_trace(const std::vector<ImuSample>& samples, const std::string& path) {
    if (ends_with(path, ".csv"))
        write_trace_csv(samples, path);
    else
        write_trace_binary(samples, path);
}

std::vector<ImuSample> read_trace(const std::string& path) {
    if (ends_with(path, ".csv")) return read_trace_csv(path);
    return read_trace_binary(path);
}

void write_truth_csv(const GroundTruth& truth, int limb_id, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write truth: " + path);
    const LimbTruth& lt = truth.limbs.at(static_cast<size_t>(limb_id));
    out << "t,qw,qx,qy,qz,atx,aty,atz,abx,aby,abz\n";
    for (size_t k = 0; k < truth.t.size(); ++k) {
        const Quat& q = lt.q[k];
        const Vec3& at = lt.tip_accel_w[k];
        const Vec3& ab = lt.base_accel_w[k];
        out << fmt(truth.t[k]) << ',' << fmt(q.w) << ',' << fmt(q.x) << ',' << fmt(q.y) << ','
            << fmt(q.z) << ',' << fmt(at.x) << ',' << fmt(at.y) << ',' << fmt(at.z) << ','
            << fmt(ab.x) << ',' << fmt(ab.y) << ',' << fmt(ab.z) << '\n';
    }
}

void write_pose_log_csv(const std::vector<PoseLogEntry>& entries, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write pose log: " + path);
    out << "t_us,sensor_id,qw,qx,qy,qz\n";
    for (const PoseLogEntry& e : entries) {
        out << e.t_us << ',' << e.sensor_id << ',' << fmt(e.q.w) << ',' << fmt(e.q.x) << ','
            << fmt(e.q.y) << ',' << fmt(e.q.z) << '\n';
    }
}

void write_message_log(const std::vector<BusMessage>& messages, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write message log: " + path);
    out << "t_us,direction,sensor_id,payload_hex\n";
    for (const BusMessage& m : messages) {
        out << m.timestamp_us << ','
            << (m.direction == BusMessage::Direction::HubToSensor ? "hub_to_sensor"
                                                                  : "sensor_to_hub")
            << ',' << m.sensor_id << ',';
        static const char* hex = "0123456789abcdef";
        for (std::uint8_t b : m.payload) out << hex[b >> 4] << hex[b & 0xF];
        out << '\n';
    }
}

}  // namespace chaintrack
