// Hub-style pose endpoint: GET /pose returns the latest snapshot as JSON,
//   {"sensors":[{"id":0,"q":[w,x,y,z],"t_us":...},...]}
// Semantics are poll-based latest-wins: the simulation publishes whole
// snapshots through an atomic pointer swap and never waits on readers, and
// a reader always sees a complete snapshot.

#pragma once

#include <memory>
#include <string>

#include "chaintrack/bus.hpp"

namespace chaintrack {

class SnapshotPublisher {
public:
    SnapshotPublisher();

    void publish(PoseSnapshot snapshot);
    std::shared_ptr<const PoseSnapshot> latest() const;

private:
    std::shared_ptr<const PoseSnapshot> snapshot_;
};

std::string pose_snapshot_to_json(const PoseSnapshot& snapshot);

class PoseServer {
public:
    explicit PoseServer(const SnapshotPublisher& source);
    ~PoseServer();

    PoseServer(const PoseServer&) = delete;
    PoseServer& operator=(const PoseServer&) = delete;

    /// Bind and serve on a background thread. Returns false if the port is
    /// already in use (or cannot be bound).
    bool start(const std::string& host, int port);
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace chaintrack
