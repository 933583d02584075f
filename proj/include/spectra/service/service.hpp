#pragma once

// Walker service: REST/JSON adapter over runtime::WalkSession.
//
//   POST   /sessions                   {"specPath": p} or a raw .spcc body
//   GET    /sessions/{id}/state
//   GET    /sessions/{id}/states/{i}
//   GET    /sessions/{id}/env-options
//   POST   /sessions/{id}/step         {"inputs": {...}}
//   POST   /sessions/{id}/back
//   GET    /sessions/{id}/trace.csv
//   DELETE /sessions/{id}

#include "spectra/runtime/session.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <json.hpp>
#include <random>
#include <string>

namespace httplib {
class Server;
}

namespace spectra::service {

using Clock = std::chrono::steady_clock;

struct SessionEntry {
    std::mutex lock; // serializes operations on this session
    runtime::WalkSession session;
    std::string origin; // spec path, or "upload"
    Clock::time_point last_used;

    SessionEntry(runtime::WalkSession s, std::string o) : session(std::move(s)), origin(std::move(o)) {}
};

/// Live sessions by opaque id; idle sessions expire.
class SessionRegistry {
public:
    explicit SessionRegistry(std::chrono::seconds idle_timeout = std::chrono::hours(1),
                             std::function<Clock::time_point()> clock = Clock::now);

    std::string add(runtime::WalkSession session, std::string origin);
    /// Null when unknown or expired; refreshes the idle timer.
    std::shared_ptr<SessionEntry> find(const std::string& id);
    bool remove(const std::string& id);
    std::size_t size();

private:
    std::mutex lock_;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
    std::chrono::seconds idle_;
    std::function<Clock::time_point()> clock_;
    std::mt19937_64 rng_;

    void expire_locked(Clock::time_point now);
};

struct Reply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Request handling without the network layer, so tests can drive the same
/// code path as the HTTP server.
class Service {
public:
    explicit Service(std::chrono::seconds idle_timeout = std::chrono::hours(1),
                     std::function<Clock::time_point()> clock = Clock::now);

    Reply handle(const std::string& method, const std::string& path, const std::string& body);

    /// Registers every endpoint on `server`.
    void install(httplib::Server& server);

    /// Starts a session on an already built controller (used by `walk`).
    std::string open(std::shared_ptr<const gr1::SymbolicController> ctrl, std::string origin);

    SessionRegistry& registry() { return registry_; }

private:
    SessionRegistry registry_;

    Reply create(const std::string& body);
    Reply on_session(SessionEntry& e, const std::string& method, const std::string& action,
                     const std::string& arg, const std::string& body);
};

/// JSON forms of values and state, shared with tests.
nlohmann::json to_json(const lowering::Value& v);
nlohmann::json to_json(const runtime::Assignment& a);
/// Typed value for `var` from JSON; throws runtime::InputError.
lowering::Value value_from_json(const lowering::VarInfo& var, const nlohmann::json& j);
nlohmann::json describe(const lowering::VarInfo& var);

/// Blocks serving on host:port; port 0 picks a free one and reports it
/// through `on_ready` before accepting.
void serve(Service& service, const std::string& host, int port,
           const std::function<void(int port)>& on_ready = {});

} // namespace spectra::service
