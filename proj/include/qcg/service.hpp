#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "qcg/ruleset.hpp"

namespace qcg {

struct ServiceOptions {
    std::optional<std::string> snapshot;    // JSON file, read at start and written on stop
    std::optional<std::string> static_dir;  // served at /
    double engine_seconds = 5.0;
    std::size_t threads = 8;
};

struct Response {
    int status = 200;
    json body;
};

struct Session;

// Game sessions over HTTP/JSON. Handlers are plain methods so they can be
// called without a socket; serve() wires them to routes.
class Service {
public:
    static constexpr std::size_t kRealizationPage = 512;
    static constexpr std::size_t kMaxMovePage = 200;
    static constexpr std::size_t kMoveCountLimit = 10'000;

    explicit Service(ServiceOptions opts = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Body: {"instance": game document, "config": {...}, "engine_role": "Left"|"Right"|null}.
    Response create(const json& body);
    Response get(const std::string& id, std::size_t page = 0) const;
    Response moves(const std::string& id, const std::string& kind, std::size_t page, std::size_t page_size) const;
    Response move(const std::string& id, const json& body);
    Response undo(const std::string& id);
    Response analysis(const std::string& id, std::uint64_t max_nodes, double max_seconds) const;
    Response health() const;

    void save_snapshot() const;
    std::size_t session_count() const;

    // Binds host:port (port 0 picks a free one). False when the bind fails.
    bool bind(const std::string& host, int port);
    int port() const noexcept { return port_; }
    // Blocks until stop().
    void run();
    void stop();

private:
    std::shared_ptr<Session> find(const std::string& id) const;
    void load_snapshot();
    std::string new_id();

    ServiceOptions opts_;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t id_state_;
    struct Http;
    std::unique_ptr<Http> http_;
    int port_ = -1;
    std::atomic<bool> stopped_{false};
};

// host:port, or a bare port with host 127.0.0.1.
std::pair<std::string, int> parse_listen(const std::string& s);

}  // namespace qcg
