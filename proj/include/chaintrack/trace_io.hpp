// Trace interchange: CSV sample streams (header t,gx,gy,gz,ax,ay,az),
// a versioned little-endian binary format, ground-truth CSV, pose logs and
// bus message logs. CSV doubles print with 17 significant digits so a
// CSV round trip is value-exact.

#pragma once

#include <string>
#include <vector>

#include "chaintrack/bus.hpp"
#include "chaintrack/synth.hpp"

namespace chaintrack {

void write_trace_csv(const std::vector<ImuSample>& samples, const std::string& path);
std::vector<ImuSample> read_trace_csv(const std::string& path);

void write_trace_binary(const std::vector<ImuSample>& samples, const std::string& path);
std::vector<ImuSample> read_trace_binary(const std::string& path);

/// Dispatch by extension: .csv or .bin/.trace.
void write_trace(const std::vector<ImuSample>& samples, const std::string& path);
std::vector<ImuSample> read_trace(const std::string& path);

/// Per-limb truth: t,qw,qx,qy,qz,atx,aty,atz,abx,aby,abz
void write_truth_csv(const GroundTruth& truth, int limb_id, const std::string& path);

struct PoseLogEntry {
    std::uint64_t t_us = 0;
    int sensor_id = 0;
    Quat q;
};

/// t_us,sensor_id,qw,qx,qy,qz
void write_pose_log_csv(const std::vector<PoseLogEntry>& entries, const std::string& path);

/// Byte-accurate wire log: t_us,direction,sensor_id,payload_hex
void write_message_log(const std::vector<BusMessage>& messages, const std::string& path);

}  // namespace chaintrack
