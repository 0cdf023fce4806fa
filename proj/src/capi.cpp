#include "qcg/qcg.h"

#include <atomic>
#include <chrono>
#include <cstring>
#include <thread>

#include "json_util.hpp"
#include "qcg/reductions.hpp"
#include "qcg/rulesets.hpp"
#include "qcg/service.hpp"
#include "qcg/solver.hpp"
#include "qcg/verify.hpp"

struct qcg_service {
    std::unique_ptr<qcg::Service> svc;
};

namespace {

using namespace qcg;

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

qcg_status status_of(ErrorCode c) {
    switch (c) {
        case ErrorCode::ResourceExceeded:
        case ErrorCode::HeightExceeded: return QCG_RESOURCE;
        case ErrorCode::InvariantBroken: return QCG_INTERNAL;
        default: return QCG_INPUT;
    }
}

json error_json(const std::string& code, const std::string& reason) {
    return {{"error", {{"code", code}, {"reason", reason}}}};
}

// Parses the request, runs f, and stores its JSON (or the error) in *out.
template <class F>
qcg_status call(const char* request, char** out, F&& f) {
    json result;
    qcg_status st = QCG_OK;
    try {
        const json req = json::parse(request ? request : "{}");
        st = f(req, result);
    } catch (const Error& e) {
        result = error_json(to_string(e.code()), e.reason());
        st = status_of(e.code());
    } catch (const json::exception& e) {
        result = error_json("SchemaError", e.what());
        st = QCG_INPUT;
    } catch (const std::exception& e) {
        result = error_json("Internal", e.what());
        st = QCG_INTERNAL;
    }
    if (out) *out = dup(result.dump());
    return st;
}

SolveLimits limits_of(const json& req) {
    SolveLimits lim;
    if (auto it = req.find("limits"); it != req.end() && it->is_object()) {
        if (it->contains("max_nodes")) lim.max_nodes = (*it)["max_nodes"].get<std::uint64_t>();
        if (it->contains("max_seconds")) lim.max_seconds = (*it)["max_seconds"].get<double>();
    }
    return lim;
}

GameState game_of(const json& doc, const json& config, const json* state) {
    GameSpec g = game_from_json(doc);
    const GameConfig cfg = config_from_json(config);
    if (state && state->is_object()) {
        if (state->contains("superposition")) g.start = superposition_from_json(*g.ruleset, (*state)["superposition"]);
        if (state->contains("to_move")) {
            auto p = parse_player(detail::as_string((*state)["to_move"], "to_move"));
            if (!p) detail::schema_error("to_move must be 'Left' or 'Right'");
            g.to_move = *p;
        }
    }
    return make_state(g.ruleset, g.start, g.to_move, cfg);
}

json solve_json(const GameState& s, const SolveLimits& lim) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve(s, lim);
    json j{{"outcome", to_string(r.outcome)},
           {"to_move", to_string(s.to_move)},
           {"nodes", r.nodes},
           {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
           {"config", config_to_json(s.config)}};
    j["best_move"] = r.best_move ? move_to_json(*s.ruleset, *r.best_move) : json(nullptr);
    if (r.best_move) j["best_move_text"] = move_text(*s.ruleset, *r.best_move);
    return j;
}

}  // namespace

extern "C" {

QCG_API qcg_status qcg_solve(const char* request, char** out) {
    return call(request, out, [](const json& req, json& res) {
        const json* state = req.contains("state") ? &req["state"] : nullptr;
        const GameState s = game_of(detail::field(req, "game"), req.value("config", json(nullptr)), state);
        res = solve_json(s, limits_of(req));
        return QCG_OK;
    });
}

QCG_API qcg_status qcg_verify(const char* request, char** out) {
    return call(request, out, [](const json& req, json& res) {
        VerifyOptions o;
        o.seed = req.value("seed", std::uint64_t{7});
        if (req.contains("count") && !req["count"].is_null()) o.count = req["count"].get<std::size_t>();
        res = reports_to_json(run_suites(req.value("suite", std::string("all")), o));
        return res["passed"].get<bool>() ? QCG_OK : QCG_FAILED;
    });
}

QCG_API qcg_status qcg_reduce(const char* request, char** out) {
    return call(request, out, [](const json& req, json& res) {
        const std::string kind = detail::as_string(detail::field(req, "kind"), "kind");
        const auto& kinds = reduction_kinds();
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
            throw Error(ErrorCode::SchemaError, "unknown reduction '" + kind + "'");
        const ReductionOutput r = reduce_json(kind, detail::field(req, "input"));
        res = {{"kind", r.kind}, {"target", reduction_game_json(r)}, {"provenance", r.provenance}};
        return QCG_OK;
    });
}

QCG_API qcg_status qcg_bench(const char* request, char** out) {
    return call(request, out, [](const json& req, json& res) {
        const json instances = req.value("instances", json::array());
        const json config = req.value("config", json(nullptr));
        const SolveLimits lim = limits_of(req);
        // Parse everything first so bad input fails before any work starts.
        std::vector<std::pair<std::string, GameState>> work;
        for (const auto& e : detail::as_array(instances, "instances"))
            work.emplace_back(e.value("name", std::string("instance")), game_of(detail::field(e, "game"), config, nullptr));
        std::vector<json> rows(work.size());
        std::atomic<std::size_t> next{0};
        const std::size_t jobs = std::max<std::size_t>(
            1, std::min<std::size_t>(req.value("jobs", std::size_t{1}), std::max<std::size_t>(work.size(), 1)));
        auto worker = [&] {
            for (std::size_t i; (i = next++) < work.size();) {
                const auto t0 = std::chrono::steady_clock::now();
                json row{{"name", work[i].first}};
                try {
                    Solver s(lim);
                    const SolveResult r = s.solve(work[i].second);
                    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    row["status"] = "solved";
                    row["outcome"] = to_string(r.outcome);
                    row["nodes"] = r.nodes;
                    row["seconds"] = secs;
                    row["nodes_per_second"] = secs > 0 ? static_cast<double>(r.nodes) / secs : 0.0;
                } catch (const Error& e) {
                    row["status"] = e.code() == ErrorCode::ResourceExceeded ? "exceeded" : "error";
                    row["reason"] = e.reason();
                    row["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                }
                rows[i] = row;
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        res = {{"rows", rows}, {"jobs", jobs}};
        return QCG_OK;
    });
}

QCG_API qcg_status qcg_service_new(const char* options, qcg_service** svc, char** out) {
    return call(options, out, [svc](const json& req, json& res) {
        ServiceOptions o;
        if (req.contains("snapshot") && !req["snapshot"].is_null()) o.snapshot = req["snapshot"].get<std::string>();
        if (req.contains("static_dir") && !req["static_dir"].is_null())
            o.static_dir = req["static_dir"].get<std::string>();
        o.engine_seconds = req.value("engine_seconds", o.engine_seconds);
        o.threads = req.value("threads", o.threads);
        *svc = new qcg_service{std::make_unique<Service>(o)};
        res = {{"sessions", (*svc)->svc->session_count()}};
        return QCG_OK;
    });
}

QCG_API qcg_status qcg_service_bind(qcg_service* svc, const char* listen, char** out) {
    json req{{"listen", listen ? listen : ""}};
    return call(req.dump().c_str(), out, [svc](const json& r, json& res) {
        auto [host, port] = parse_listen(r["listen"].get<std::string>());
        if (!svc->svc->bind(host, port)) {
            res = error_json("BindFailed", "could not bind " + host + ":" + std::to_string(port));
            return QCG_FAILED;
        }
        res = {{"host", host}, {"port", svc->svc->port()}};
        return QCG_OK;
    });
}

QCG_API qcg_status qcg_service_run(qcg_service* svc) {
    try {
        svc->svc->run();
        return QCG_OK;
    } catch (const std::exception&) {
        return QCG_FAILED;
    }
}

QCG_API void qcg_service_stop(qcg_service* svc) {
    if (svc) svc->svc->stop();
}

QCG_API void qcg_service_free(qcg_service* svc) { delete svc; }

QCG_API void qcg_free(char* p) { std::free(p); }

QCG_API const char* qcg_version(void) { return "0.1.0"; }

}  // extern "C"
