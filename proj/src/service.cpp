#include "qcg/service.hpp"

#include <chrono>
#include <fstream>
#include <random>

#include "httplib.h"
#include "json_util.hpp"
#include "qcg/rulesets.hpp"
#include "qcg/solver.hpp"
#include "qcg/strategy.hpp"

namespace qcg {

struct Session {
    std::string id;
    json instance;  // game document with the initial superposition
    RulesetPtr ruleset;
    Superposition start;
    Player first = Player::Left;
    GameConfig config;
    std::optional<Player> engine;
    std::vector<MoveRecord> history;
    std::vector<std::string> digests;  // canonical key before each move
    GameState state;
    std::optional<HeroSession> hero;
    std::string created, updated;
    mutable std::mutex mu;

    Session(RulesetPtr rs, Superposition s, Player p, GameConfig c)
        : ruleset(rs), start(s), first(p), config(c), state(make_state(rs, s, p, c)) {}
};

namespace {

std::string now_text() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int status_of(ErrorCode c) {
    switch (c) {
        case ErrorCode::SchemaError: return 400;
        case ErrorCode::InvalidInstance:
        case ErrorCode::InvalidConfig:
        case ErrorCode::UnsupportedShape: return 422;
        case ErrorCode::NotFound: return 404;
        case ErrorCode::IllegalMove:
        case ErrorCode::BudgetExhausted:
        case ErrorCode::DimensionCapExceeded:
        case ErrorCode::NothingToUndo: return 409;
        default: return 500;
    }
}

Response error_response(const Error& e) {
    json err{{"code", to_string(e.code())}, {"reason", e.reason()}};
    if (e.index()) err["index"] = *e.index();
    return {status_of(e.code()), {{"error", err}}};
}

template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return error_response(e);
    } catch (const json::exception& e) {
        return error_response(Error(ErrorCode::SchemaError, e.what()));
    }
}

json budgets_json(const Budgets& b) {
    auto one = [](const std::optional<int>& x) { return x ? json(*x) : json(nullptr); };
    return {{"Left", one(b.left)}, {"Right", one(b.right)}};
}

bool hero_eligible(const Session& s) {
    const auto* g = dynamic_cast<const Geography*>(s.ruleset.get());
    if (!g || g->directed() || g->boards().size() != 1) return false;
    const GameConfig& c = s.config;
    if (c.flavor != Flavor::D || c.width != 2 || c.demi || c.dimension_cap || c.budget_left || c.budget_right)
        return false;
    return s.first == Player::Left && s.start == Superposition(g->start().front());
}

// Rebuilds the hero from the history when the engine plays the classical
// winner; drops it if the recorded hero moves differ from its own choices.
void rebuild_hero(Session& s) {
    s.hero.reset();
    if (!s.engine || !hero_eligible(s)) return;
    auto h = HeroSession::begin(std::static_pointer_cast<const Geography>(s.ruleset), s.config);
    if (h.hero() != *s.engine) return;
    try {
        std::size_t i = 0;
        if (h.hero() == Player::Left && !s.history.empty()) {
            if (!(Move(h.first_move()) == s.history[i++].move)) return;
        }
        while (i < s.history.size()) {
            const Move villain = s.history[i++].move;
            if (i >= s.history.size()) return;  // hero has not replied yet
            if (!(Move(h.respond(villain)) == s.history[i++].move)) return;
        }
    } catch (const Error&) {
        return;
    }
    s.hero = std::move(h);
}

void push(Session& s, const Move& m) {
    s.digests.push_back(canonical_key(s.state));
    s.history.push_back({m, s.state.to_move});
    s.state = apply_move(s.state, m);
}

void check_replay(const Session& s) {
    const GameState r = bft(s.ruleset, s.start, s.history, s.config, s.first);
    if (canonical_key(r) != canonical_key(s.state))
        throw Error(ErrorCode::InvariantBroken, "history does not replay to the stored state");
}

// Engine reply for the side to move. Returns its report.
json engine_reply(Session& s, double seconds) {
    json rep{{"player", to_string(s.state.to_move)}};
    if (s.hero && s.hero->hero() == s.state.to_move) {
        try {
            Label l = s.history.empty() ? s.hero->first_move() : s.hero->respond(s.history.back().move);
            push(s, l);
            rep["move"] = move_to_json(*s.ruleset, l);
            rep["text"] = move_text(*s.ruleset, l);
            rep["strategy"] = "hero";
            return rep;
        } catch (const Error&) {
            s.hero.reset();
        }
    }
    SolveLimits lim;
    lim.max_seconds = seconds;
    Solver solver(lim);
    std::optional<Move> m;
    bool unsolved = false;
    try {
        m = solver.winning_move(s.state);
        rep["winning"] = m.has_value();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ResourceExceeded) throw;
        unsolved = true;
    }
    if (!m) {
        auto all = legal_moves(s.state, 1);
        m = all.front();
    }
    push(s, *m);
    rep["move"] = move_to_json(*s.ruleset, *m);
    rep["text"] = move_text(*s.ruleset, *m);
    rep["strategy"] = "search";
    rep["nodes"] = solver.nodes();
    rep["unsolved"] = unsolved;
    return rep;
}

json state_view(const Session& s, std::size_t page) {
    const auto& rz = s.state.board.realizations();
    const std::size_t from = page * Service::kRealizationPage;
    json cards = json::array();
    for (std::size_t i = from; i < rz.size() && i < from + Service::kRealizationPage; ++i)
        cards.push_back(s.ruleset->position_to_json(rz[i]));
    const std::size_t pages = (rz.size() + Service::kRealizationPage - 1) / Service::kRealizationPage;
    Expansion ex(s.state);
    std::size_t quantum = 0;
    for (auto it = ex.quantum_moves(); it.next() && quantum <= Service::kMoveCountLimit;) ++quantum;
    json qcount = quantum > Service::kMoveCountLimit ? json("truncated") : json(quantum);
    return {{"id", s.id},
            {"ruleset", s.ruleset->kind()},
            {"config", config_to_json(s.config)},
            {"engine_role", s.engine ? json(to_string(*s.engine)) : json(nullptr)},
            {"to_move", to_string(s.state.to_move)},
            {"terminal", ex.terminal()},
            {"budgets", budgets_json(s.state.budgets)},
            {"width", rz.size()},
            {"realizations", cards},
            {"page", page},
            {"page_size", Service::kRealizationPage},
            {"pages", pages},
            {"legal_moves", {{"classical", ex.classical_moves().size()}, {"quantum", qcount}}},
            {"history", s.history.size()},
            {"created", s.created},
            {"updated", s.updated}};
}

}  // namespace

struct Service::Http {
    httplib::Server server;
    std::string host;
};

std::pair<std::string, int> parse_listen(const std::string& s) {
    const auto colon = s.rfind(':');
    std::string host = "127.0.0.1", port = s;
    if (colon != std::string::npos) {
        host = s.substr(0, colon);
        port = s.substr(colon + 1);
    }
    try {
        std::size_t used = 0;
        const int p = std::stoi(port, &used);
        if (used != port.size() || p < 0 || p > 65535) throw std::invalid_argument("port");
        return {host.empty() ? "127.0.0.1" : host, p};
    } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaError, "listen address must be host:port");
    }
}

Service::Service(ServiceOptions opts) : opts_(std::move(opts)), id_state_(std::random_device{}()) {
    id_state_ = (id_state_ << 32) ^ std::random_device{}();
    if (opts_.snapshot) load_snapshot();
}

Service::~Service() {
    stop();
}

std::string Service::new_id() {
    std::mt19937_64 r(id_state_++);
    char buf[17];
    for (;;) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(r()));
        if (!sessions_.count(buf)) return buf;
    }
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + id + "'");
    return it->second;
}

std::size_t Service::session_count() const {
    std::shared_lock lock(mu_);
    return sessions_.size();
}

Response Service::create(const json& body) {
    return guarded([&] {
        if (!body.is_object()) throw Error(ErrorCode::SchemaError, "body must be an object");
        const json& doc = body.contains("instance") ? body["instance"] : body;
        const GameSpec g = game_from_json(doc);
        const GameConfig cfg = config_from_json(body.value("config", json(nullptr)));
        auto s = std::make_shared<Session>(g.ruleset, g.start, g.to_move, cfg);
        if (auto it = body.find("engine_role"); it != body.end() && !it->is_null()) {
            auto p = parse_player(detail::as_string(*it, "engine_role"));
            if (!p) throw Error(ErrorCode::SchemaError, "engine_role must be 'Left' or 'Right'");
            s->engine = p;
        }
        s->instance = g.ruleset->instance_json();
        s->instance["superposition"] = superposition_to_json(*g.ruleset, g.start);
        s->instance["to_move"] = to_string(g.to_move);
        s->created = s->updated = now_text();
        rebuild_hero(*s);
        json engine = nullptr;
        if (s->engine && *s->engine == s->state.to_move && !is_terminal(s->state))
            engine = engine_reply(*s, opts_.engine_seconds);
        {
            std::unique_lock lock(mu_);
            s->id = new_id();
            sessions_[s->id] = s;
        }
        json view = state_view(*s, 0);
        if (!engine.is_null()) view["engine"] = engine;
        return Response{201, view};
    });
}

Response Service::get(const std::string& id, std::size_t page) const {
    return guarded([&] {
        auto s = find(id);
        std::lock_guard lock(s->mu);
        return Response{200, state_view(*s, page)};
    });
}

Response Service::moves(const std::string& id, const std::string& kind, std::size_t page,
                        std::size_t page_size) const {
    return guarded([&] {
        if (kind != "classical" && kind != "quantum")
            throw Error(ErrorCode::SchemaError, "kind must be 'classical' or 'quantum'");
        page_size = std::clamp<std::size_t>(page_size, 1, kMaxMovePage);
        auto s = find(id);
        std::lock_guard lock(s->mu);
        std::vector<Move> all;
        bool truncated = false;
        if (kind == "classical") {
            for (auto& l : legal_classical_moves(s->state)) all.emplace_back(std::move(l));
        } else {
            auto qs = legal_quantum_moves(s->state, kMoveCountLimit + 1);
            truncated = qs.size() > kMoveCountLimit;
            if (truncated) qs.pop_back();
            for (auto& q : qs) all.emplace_back(std::move(q));
        }
        json items = json::array();
        for (std::size_t i = page * page_size; i < all.size() && i < (page + 1) * page_size; ++i) {
            json m = move_to_json(*s->ruleset, all[i]);
            m["text"] = move_text(*s->ruleset, all[i]);
            items.push_back(m);
        }
        return Response{200,
                        {{"kind", kind},
                         {"page", page},
                         {"page_size", page_size},
                         {"total", truncated ? json("truncated") : json(all.size())},
                         {"moves", items}}};
    });
}

Response Service::move(const std::string& id, const json& body) {
    return guarded([&] {
        auto s = find(id);
        std::lock_guard lock(s->mu);
        if (is_terminal(s->state)) throw Error(ErrorCode::IllegalMove, "terminal");
        const Move m = move_from_json(*s->ruleset, body.contains("move") ? body["move"] : body);
        const GameState next = apply_move(s->state, m);  // throws on illegal moves
        const bool hero_turn_next = s->hero && s->hero->hero() != s->state.to_move;
        s->digests.push_back(canonical_key(s->state));
        s->history.push_back({m, s->state.to_move});
        s->state = next;
        if (!hero_turn_next) s->hero.reset();
        json engine = nullptr;
        if (s->engine && *s->engine == s->state.to_move && !is_terminal(s->state))
            engine = engine_reply(*s, opts_.engine_seconds);
        check_replay(*s);
        s->updated = now_text();
        json view = state_view(*s, 0);
        if (!engine.is_null()) view["engine"] = engine;
        return Response{200, view};
    });
}

Response Service::undo(const std::string& id) {
    return guarded([&] {
        auto s = find(id);
        std::lock_guard lock(s->mu);
        if (s->history.empty()) throw Error(ErrorCode::NothingToUndo, "no moves to undo");
        s->history.pop_back();
        s->digests.pop_back();
        s->state = bft(s->ruleset, s->start, s->history, s->config, s->first);
        rebuild_hero(*s);
        s->updated = now_text();
        return Response{200, state_view(*s, 0)};
    });
}

Response Service::analysis(const std::string& id, std::uint64_t max_nodes, double max_seconds) const {
    return guarded([&] {
        auto s = find(id);
        GameState st = [&] {
            std::lock_guard lock(s->mu);
            return s->state;
        }();
        SolveLimits lim;
        lim.max_nodes = max_nodes;
        lim.max_seconds = max_seconds;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const SolveResult r = solve(st, lim);
            json out{{"status", "solved"},
                     {"outcome", to_string(r.outcome)},
                     {"to_move", to_string(st.to_move)},
                     {"nodes", r.nodes},
                     {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
            if (r.best_move) {
                out["best"] = move_to_json(*st.ruleset, *r.best_move);
                out["best_text"] = move_text(*st.ruleset, *r.best_move);
            }
            return Response{200, out};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ResourceExceeded) throw;
            return Response{202, {{"status", "exceeded"}, {"reason", e.reason()}}};
        }
    });
}

Response Service::health() const { return {200, {{"status", "ok"}, {"sessions", session_count()}}}; }

void Service::save_snapshot() const {
    if (!opts_.snapshot) return;
    json all = json::array();
    {
        std::shared_lock lock(mu_);
        for (const auto& [id, s] : sessions_) {
            std::lock_guard sl(s->mu);
            json hist = json::array();
            for (const auto& r : s->history)
                hist.push_back({{"player", to_string(r.player)}, {"move", move_to_json(*s->ruleset, r.move)}});
            all.push_back({{"id", id},
                           {"instance", s->instance},
                           {"config", config_to_json(s->config)},
                           {"engine_role", s->engine ? json(to_string(*s->engine)) : json(nullptr)},
                           {"history", hist},
                           {"created", s->created},
                           {"updated", s->updated}});
        }
    }
    const std::string tmp = *opts_.snapshot + ".tmp";
    {
        std::ofstream f(tmp);
        f << json{{"sessions", all}}.dump(1) << '\n';
    }
    std::rename(tmp.c_str(), opts_.snapshot->c_str());
}

void Service::load_snapshot() {
    std::ifstream f(*opts_.snapshot);
    if (!f) return;
    const json doc = json::parse(f, nullptr, false);
    if (doc.is_discarded() || !doc.contains("sessions"))
        throw Error(ErrorCode::SchemaError, "snapshot is not a session document");
    for (const auto& e : doc["sessions"]) {
        const GameSpec g = game_from_json(e["instance"]);
        auto s = std::make_shared<Session>(g.ruleset, g.start, g.to_move, config_from_json(e["config"]));
        s->id = e["id"].get<std::string>();
        s->instance = e["instance"];
        if (!e["engine_role"].is_null()) s->engine = parse_player(e["engine_role"].get<std::string>());
        for (const auto& h : e["history"]) push(*s, move_from_json(*s->ruleset, h["move"]));
        s->created = e.value("created", "");
        s->updated = e.value("updated", "");
        rebuild_hero(*s);
        sessions_[s->id] = s;
    }
}

bool Service::bind(const std::string& host, int port) {
    http_ = std::make_unique<Http>();
    auto& srv = http_->server;
    const std::size_t threads = std::max<std::size_t>(1, opts_.threads);
    srv.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    // No SO_REUSEPORT, so a port already in use fails the bind.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto body_of = [](const httplib::Request& req) {
        json j = json::parse(req.body.empty() ? "{}" : req.body, nullptr, false);
        if (j.is_discarded()) throw Error(ErrorCode::SchemaError, "body is not JSON");
        return j;
    };
    auto num = [](const httplib::Request& req, const char* key, auto fallback) {
        using T = decltype(fallback);
        if (!req.has_param(key)) return fallback;
        try {
            if constexpr (std::is_floating_point_v<T>)
                return static_cast<T>(std::stod(req.get_param_value(key)));
            else
                return static_cast<T>(std::stoull(req.get_param_value(key)));
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaError, std::string("bad query parameter '") + key + "'");
        }
    };
    auto wrap = [reply](auto f) {
        return [reply, f](const httplib::Request& req, httplib::Response& res) {
            reply(res, guarded([&] { return f(req); }));
        };
    };
    srv.Get("/health", wrap([this](const httplib::Request&) { return health(); }));
    srv.Post("/games", wrap([this, body_of](const httplib::Request& req) { return create(body_of(req)); }));
    srv.Get(R"(/games/([^/]+))", wrap([this, num](const httplib::Request& req) {
                return get(req.matches[1], num(req, "page", std::size_t{0}));
            }));
    srv.Get(R"(/games/([^/]+)/moves)", wrap([this, num](const httplib::Request& req) {
                const std::string kind = req.has_param("kind") ? req.get_param_value("kind") : "classical";
                return moves(req.matches[1], kind, num(req, "page", std::size_t{0}),
                             num(req, "page_size", std::size_t{50}));
            }));
    srv.Post(R"(/games/([^/]+)/move)", wrap([this, body_of](const httplib::Request& req) {
                 return move(req.matches[1], body_of(req));
             }));
    srv.Post(R"(/games/([^/]+)/undo)", wrap([this](const httplib::Request& req) { return undo(req.matches[1]); }));
    srv.Get(R"(/games/([^/]+)/analysis)", wrap([this, num](const httplib::Request& req) {
                return analysis(req.matches[1], num(req, "max_nodes", std::uint64_t{5'000'000}),
                                num(req, "max_seconds", 5.0));
            }));
    if (opts_.static_dir && !srv.set_mount_point("/", *opts_.static_dir)) return false;
    http_->host = host;
    port_ = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
    return port_ > 0;
}

void Service::run() {
    if (!http_ || port_ <= 0) throw Error(ErrorCode::InvalidConfig, "service is not bound");
    http_->server.listen_after_bind();
}

void Service::stop() {
    if (stopped_.exchange(true)) return;
    if (http_) http_->server.stop();
    save_snapshot();
}

}  // namespace qcg
