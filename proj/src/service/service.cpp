#include "spectra/service/service.hpp"

#include "spectra/runtime/controller_file.hpp"
#include "spectra/runtime/pipeline.hpp"

#include <httplib.h>

#include <iomanip>
#include <sstream>

namespace spectra::service {

using json = nlohmann::json;
using lowering::Value;
using lowering::VarInfo;
using runtime::Assignment;

// -------------------------------------------------------------- registry

SessionRegistry::SessionRegistry(std::chrono::seconds idle_timeout, std::function<Clock::time_point()> clock)
    : idle_(idle_timeout), clock_(std::move(clock)), rng_(std::random_device{}()) {}

std::string SessionRegistry::add(runtime::WalkSession session, std::string origin) {
    std::lock_guard<std::mutex> g(lock_);
    const auto now = clock_();
    expire_locked(now);
    std::string id;
    do {
        std::ostringstream s;
        s << std::hex << std::setfill('0') << std::setw(16) << rng_() << std::setw(16) << rng_();
        id = s.str();
    } while (sessions_.count(id));
    auto e = std::make_shared<SessionEntry>(std::move(session), std::move(origin));
    e->last_used = now;
    sessions_.emplace(id, std::move(e));
    return id;
}

std::shared_ptr<SessionEntry> SessionRegistry::find(const std::string& id) {
    std::lock_guard<std::mutex> g(lock_);
    const auto now = clock_();
    expire_locked(now);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        return nullptr;
    it->second->last_used = now;
    return it->second;
}

bool SessionRegistry::remove(const std::string& id) {
    std::lock_guard<std::mutex> g(lock_);
    return sessions_.erase(id) > 0;
}

std::size_t SessionRegistry::size() {
    std::lock_guard<std::mutex> g(lock_);
    expire_locked(clock_());
    return sessions_.size();
}

void SessionRegistry::expire_locked(Clock::time_point now) {
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (now - it->second->last_used >= idle_)
            it = sessions_.erase(it);
        else
            ++it;
    }
}

// ------------------------------------------------------------------ json

json to_json(const Value& v) {
    if (const auto* b = std::get_if<bool>(&v))
        return *b;
    if (const auto* s = std::get_if<std::string>(&v))
        return *s;
    return std::get<std::int64_t>(v);
}

json to_json(const Assignment& a) {
    json out = json::object();
    for (const auto& [name, value] : a)
        out[name] = to_json(value);
    return out;
}

Value value_from_json(const VarInfo& var, const json& j) {
    switch (var.type) {
    case VarInfo::Type::Boolean:
        if (j.is_boolean())
            return j.get<bool>();
        break;
    case VarInfo::Type::Enum:
        if (j.is_string())
            return j.get<std::string>();
        break;
    case VarInfo::Type::Int:
        if (j.is_number_integer())
            return j.get<std::int64_t>();
        break;
    }
    throw runtime::InputError("'" + var.name + "' expects " +
                              (var.type == VarInfo::Type::Boolean ? "a boolean"
                               : var.type == VarInfo::Type::Enum  ? "an enum literal"
                                                                  : "an integer") +
                              ", got " + j.dump());
}

json describe(const VarInfo& var) {
    json d{{"name", var.name}, {"kind", var.kind == syntax::VarKind::Env ? "env" : "sys"}};
    switch (var.type) {
    case VarInfo::Type::Boolean:
        d["type"] = "boolean";
        break;
    case VarInfo::Type::Enum:
        d["type"] = "enum";
        d["values"] = var.values;
        break;
    case VarInfo::Type::Int:
        d["type"] = "int";
        d["lower"] = var.lower;
        d["upper"] = var.upper;
        break;
    }
    d["monitor"] = var.source == VarInfo::Source::Monitor;
    return d;
}

// --------------------------------------------------------------- service

namespace {

Reply reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }
Reply error(int status, const std::string& message) { return reply(status, json{{"error", message}}); }

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '/') {
            if (!cur.empty())
                parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        parts.push_back(std::move(cur));
    return parts;
}

json state_json(const runtime::WalkSession& s) {
    return json{{"cursor", s.cursor()},
                {"historyLength", s.history_length()},
                {"started", s.started()},
                {"state", s.started() ? to_json(s.state()) : json(nullptr)}};
}

Assignment inputs_from(const runtime::WalkSession& s, const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("inputs") || !j["inputs"].is_object())
        throw runtime::InputError("expected a JSON object {\"inputs\": {...}}");
    Assignment a;
    for (const auto& [name, value] : j["inputs"].items()) {
        const VarInfo* var = nullptr;
        for (const auto* v : s.inputs())
            if (v->name == name)
                var = v;
        if (!var)
            throw runtime::InputError("'" + name + "' is not an environment variable");
        a[name] = value_from_json(*var, value);
    }
    return a;
}

} // namespace

Service::Service(std::chrono::seconds idle_timeout, std::function<Clock::time_point()> clock)
    : registry_(idle_timeout, std::move(clock)) {}

std::string Service::open(std::shared_ptr<const gr1::SymbolicController> ctrl, std::string origin) {
    return registry_.add(runtime::WalkSession(std::move(ctrl)), std::move(origin));
}

Reply Service::create(const std::string& body) {
    std::shared_ptr<const gr1::SymbolicController> ctrl;
    std::string origin;
    try {
        if (body.rfind("SPCC", 0) == 0) {
            ctrl = std::make_shared<gr1::SymbolicController>(
                runtime::load(std::vector<std::uint8_t>(body.begin(), body.end())));
            origin = "upload";
        } else {
            json j = json::parse(body, nullptr, false);
            if (j.is_discarded() || !j.is_object())
                return error(400, "expected {\"specPath\": ...}, {\"controllerPath\": ...} or a controller file");
            if (j.contains("specPath") && j["specPath"].is_string()) {
                origin = j["specPath"].get<std::string>();
                auto r = runtime::synthesize(runtime::check_file(origin));
                if (!r.realizable)
                    return error(422, "specification is unrealizable");
                ctrl = r.controller;
            } else if (j.contains("controllerPath") && j["controllerPath"].is_string()) {
                origin = j["controllerPath"].get<std::string>();
                ctrl = std::make_shared<gr1::SymbolicController>(runtime::load_file(origin));
            } else {
                return error(400, "expected {\"specPath\": ...}, {\"controllerPath\": ...} or a controller file");
            }
        }
    } catch (const SpecError& e) {
        json diags = json::array();
        for (const auto& d : e.diagnostics())
            diags.push_back(format(d));
        return reply(400, json{{"error", "specification rejected"}, {"diagnostics", diags}});
    } catch (const gr1::ResourceError& e) {
        return error(507, e.what());
    } catch (const std::runtime_error& e) {
        return error(400, e.what());
    }
    std::string id = open(ctrl, origin);
    auto entry = registry_.find(id);
    json vars = json::array();
    for (const auto* v : entry->session.inputs())
        vars.push_back(describe(*v));
    for (const auto* v : entry->session.outputs())
        vars.push_back(describe(*v));
    return reply(201, json{{"id", id}, {"variables", vars}});
}

Reply Service::on_session(SessionEntry& e, const std::string& method, const std::string& action,
                          const std::string& arg, const std::string& body) {
    auto& s = e.session;
    if (method == "GET" && action == "state" && arg.empty())
        return reply(200, state_json(s));
    if (method == "GET" && action == "states" && !arg.empty()) {
        std::size_t i = 0;
        try {
            i = std::stoul(arg);
        } catch (const std::exception&) {
            return error(400, "bad state index '" + arg + "'");
        }
        if (i >= s.history_length())
            return error(404, "no state " + arg);
        return reply(200, json{{"index", i}, {"state", to_json(s.state(i))}});
    }
    if (method == "GET" && action == "env-options" && arg.empty()) {
        auto opts = s.env_options();
        json list = json::array();
        for (const auto& o : opts.options)
            list.push_back(to_json(o));
        return reply(200, json{{"options", list}, {"truncated", opts.truncated}});
    }
    if (method == "GET" && action == "trace.csv" && arg.empty())
        return {200, s.trace_csv(), "text/csv"};
    if (method == "POST" && action == "step" && arg.empty()) {
        try {
            auto inputs = inputs_from(s, body);
            auto out = s.started() ? s.step(inputs) : s.initial(inputs);
            return reply(200, json{{"outputs", to_json(out)}, {"cursor", s.cursor()}});
        } catch (const runtime::AssumptionViolation& v) {
            json list = json::array();
            for (const auto& a : v.violated())
                list.push_back(json{{"name", a.name}, {"line", a.line}, {"column", a.column}});
            return reply(409, json{{"error", v.what()}, {"violatedAssumptions", list}});
        } catch (const runtime::InputError& err) {
            return error(400, err.what());
        }
    }
    if (method == "POST" && action == "back" && arg.empty()) {
        if (s.cursor() == 0)
            return error(409, "already at the first state");
        s.back();
        return reply(200, state_json(s));
    }
    return error(404, "no such endpoint");
}

Reply Service::handle(const std::string& method, const std::string& path, const std::string& body) {
    auto parts = split_path(path);
    if (parts.empty() || parts[0] != "sessions" || parts.size() > 4)
        return error(404, "no such endpoint");
    if (parts.size() == 1)
        return method == "POST" ? create(body) : error(405, "use POST to create a session");
    const std::string& id = parts[1];
    if (parts.size() == 2) {
        if (method != "DELETE")
            return error(405, "use DELETE to close a session");
        return registry_.remove(id) ? Reply{204, "", "application/json"} : error(404, "unknown session");
    }
    auto entry = registry_.find(id);
    if (!entry)
        return error(404, "unknown session");
    std::lock_guard<std::mutex> g(entry->lock);
    try {
        return on_session(*entry, method, parts[2], parts.size() == 4 ? parts[3] : "", body);
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

void Service::install(httplib::Server& server) {
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        Reply r = handle(req.method, req.path, req.body);
        res.status = r.status;
        if (r.status != 204)
            res.set_content(r.body, r.content_type);
    };
    server.Get(R"(/sessions(/.*)?)", route);
    server.Post(R"(/sessions(/.*)?)", route);
    server.Delete(R"(/sessions(/.*)?)", route);
}

void serve(Service& service, const std::string& host, int port, const std::function<void(int)>& on_ready) {
    httplib::Server server;
    service.install(server);
    if (port == 0) {
        port = server.bind_to_any_port(host);
        if (port < 0)
            throw std::runtime_error("cannot bind " + host);
    } else if (!server.bind_to_port(host, port)) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    if (on_ready)
        on_ready(port);
    server.listen_after_bind();
}

} // namespace spectra::service
