#include "chaintrack/pose_server.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace chaintrack {

SnapshotPublisher::SnapshotPublisher() : snapshot_(std::make_shared<PoseSnapshot>()) {}

void SnapshotPublisher::publish(PoseSnapshot snapshot) {
    std::atomic_store(&snapshot_,
                      std::shared_ptr<const PoseSnapshot>(
                          std::make_shared<const PoseSnapshot>(std::move(snapshot))));
}

std::shared_ptr<const PoseSnapshot> SnapshotPublisher::latest() const {
    return std::atomic_load(&snapshot_);
}

std::string pose_snapshot_to_json(const PoseSnapshot& snapshot) {
    nlohmann::json j;
    j["sensors"] = nlohmann::json::array();
    for (const PoseEntry& e : snapshot.sensors) {
        j["sensors"].push_back({{"id", e.sensor_id},
                                {"q", {e.q.w, e.q.x, e.q.y, e.q.z}},
                                {"t_us", e.t_us}});
    }
    return j.dump();
}

struct PoseServer::Impl {
    const SnapshotPublisher* source = nullptr;
    httplib::Server server;
    std::thread thread;
    std::atomic<bool> running{false};
};

PoseServer::PoseServer(const SnapshotPublisher& source) : impl_(std::make_unique<Impl>()) {
    impl_->source = &source;
    // Only SO_REUSEADDR: a second server on the same port must fail to bind.
    impl_->server.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
                     sizeof(yes));
    });
    impl_->server.Get("/pose", [this](const httplib::Request&, httplib::Response& res) {
        const auto snap = impl_->source->latest();
        res.set_content(pose_snapshot_to_json(*snap), "application/json");
    });
}

PoseServer::~PoseServer() { stop(); }

bool PoseServer::start(const std::string& host, int port) {
    if (impl_->running) return false;
    if (!impl_->server.bind_to_port(host, port)) return false;
    impl_->running = true;
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    return true;
}

void PoseServer::stop() {
    if (!impl_->running) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
    impl_->running = false;
}

bool PoseServer::running() const { return impl_->running; }

}  // namespace chaintrack
