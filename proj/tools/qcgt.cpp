// qcgt: command-line front end over the C API.
#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcg/qcg.h"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0, kExitFailed = 1, kExitInput = 2, kExitResource = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot read " + path);
    json j = json::parse(f, nullptr, false);
    if (j.is_discarded()) throw InputError(path + " is not valid JSON");
    return j;
}

int exit_code(qcg_status st) {
    switch (st) {
        case QCG_OK: return kExitOk;
        case QCG_INPUT: return kExitInput;
        case QCG_RESOURCE: return kExitResource;
        default: return kExitFailed;
    }
}

// Calls into the library and returns (status, parsed result).
template <class F>
std::pair<qcg_status, json> invoke(F f, const json& request) {
    char* out = nullptr;
    const qcg_status st = f(request.dump().c_str(), &out);
    json res = json::parse(out ? out : "{}", nullptr, false);
    qcg_free(out);
    return {st, res};
}

void print_error(const json& res) {
    if (res.contains("error"))
        std::cerr << "error: " << res["error"].value("code", "") << ": " << res["error"].value("reason", "") << '\n';
}

std::size_t default_jobs() {
    if (const char* e = std::getenv("QCGT_JOBS")) {
        try {
            return std::max(1, std::stoi(e));
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct ConfigFlags {
    std::string flavor = "D";
    int width = 2;
    std::optional<int> budget_left, budget_right, dim_cap;
    bool demi = false;
    std::optional<std::uint64_t> max_nodes;
    std::optional<double> max_seconds;

    void add(CLI::App* app) {
        app->add_option("--flavor", flavor, "A, B, C, C' or D");
        app->add_option("--width", width, "maximum quantum move width");
        app->add_option("--budget-left", budget_left, "quantum moves allowed to Left");
        app->add_option("--budget-right", budget_right, "quantum moves allowed to Right");
        app->add_option("--dim-cap", dim_cap, "maximum realizations on the board");
        app->add_flag("--demi", demi, "classical moves only");
        app->add_option("--max-nodes", max_nodes, "search node limit");
        app->add_option("--max-seconds", max_seconds, "search time limit");
    }
    json config() const {
        json c{{"flavor", flavor}, {"width", width}, {"demi", demi}};
        if (budget_left) c["budget_left"] = *budget_left;
        if (budget_right) c["budget_right"] = *budget_right;
        if (dim_cap) c["dimension_cap"] = *dim_cap;
        return c;
    }
    json limits() const {
        json l = json::object();
        if (max_nodes) l["max_nodes"] = *max_nodes;
        if (max_seconds) l["max_seconds"] = *max_seconds;
        return l;
    }
};

int cmd_solve(const std::string& path, const std::optional<std::string>& state, const ConfigFlags& cf, bool as_json) {
    json req{{"game", read_json(path)}, {"config", cf.config()}, {"limits", cf.limits()}};
    if (state) req["state"] = read_json(*state);
    auto [st, res] = invoke(qcg_solve, req);
    if (st != QCG_OK) {
        print_error(res);
        if (as_json) std::cout << res.dump(2) << '\n';
        return exit_code(st);
    }
    if (as_json) {
        std::cout << res.dump(2) << '\n';
    } else {
        std::cout << "outcome: " << res["outcome"].get<std::string>() << '\n'
                  << "best move: " << res.value("best_move_text", std::string("none")) << '\n'
                  << "nodes: " << res["nodes"] << '\n';
    }
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::optional<std::size_t> count,
               const std::optional<std::string>& report, bool as_json) {
    json req{{"suite", suite}, {"seed", seed}};
    if (count) req["count"] = *count;
    auto [st, res] = invoke(qcg_verify, req);
    if (res.contains("error")) {
        print_error(res);
        return exit_code(st);
    }
    if (report) std::ofstream(*report) << res.dump(2) << '\n';
    if (as_json) {
        std::cout << res.dump(2) << '\n';
    } else {
        for (const auto& s : res["suites"])
            std::cout << std::left << std::setw(12) << s["suite"].get<std::string>() << " cases " << s["cases"]
                      << "  failures " << s["failures"] << "  " << std::fixed << std::setprecision(2)
                      << s["seconds"].get<double>() << "s  seed " << s["seed"] << '\n';
    }
    return exit_code(st);
}

int cmd_reduce(const std::string& kind, const std::string& input, const std::string& out_dir) {
    auto [st, res] = invoke(qcg_reduce, json{{"kind", kind}, {"input", read_json(input)}});
    if (st != QCG_OK) {
        print_error(res);
        return exit_code(st);
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const std::string stem = fs::path(input).stem().string() + "." + kind;
    const fs::path target = fs::path(out_dir) / (stem + ".json");
    const fs::path prov = fs::path(out_dir) / (stem + ".provenance.json");
    std::ofstream t(target), p(prov);
    if (!t || !p) {
        std::cerr << "error: cannot write to " << out_dir << '\n';
        return kExitFailed;
    }
    t << res["target"].dump(2) << '\n';
    p << res["provenance"].dump(2) << '\n';
    std::cout << target.string() << '\n' << prov.string() << '\n';
    return kExitOk;
}

int cmd_serve(const std::string& listen, const std::optional<std::string>& snapshot,
              const std::optional<std::string>& static_dir, double engine_seconds, std::size_t jobs) {
    json opts{{"engine_seconds", engine_seconds}, {"threads", jobs}};
    if (snapshot) opts["snapshot"] = *snapshot;
    if (static_dir) opts["static_dir"] = *static_dir;
    qcg_service* svc = nullptr;
    char* out = nullptr;
    qcg_status st = qcg_service_new(opts.dump().c_str(), &svc, &out);
    json res = json::parse(out ? out : "{}", nullptr, false);
    qcg_free(out);
    if (st != QCG_OK) {
        print_error(res);
        return exit_code(st);
    }
    st = qcg_service_bind(svc, listen.c_str(), &out);
    res = json::parse(out ? out : "{}", nullptr, false);
    qcg_free(out);
    if (st != QCG_OK) {
        print_error(res);
        qcg_service_free(svc);
        return st == QCG_INPUT ? kExitInput : kExitFailed;
    }
    std::cout << "listening on " << res["host"].get<std::string>() << ':' << res["port"] << std::endl;

    // Signals are taken synchronously on this thread; the server runs on another.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    std::thread server([svc] { qcg_service_run(svc); });
    int sig = 0;
    sigwait(&set, &sig);
    qcg_service_stop(svc);
    server.join();
    qcg_service_free(svc);
    return kExitOk;
}

int cmd_bench(const std::vector<std::string>& paths, const ConfigFlags& cf, std::size_t jobs, bool as_json) {
    json instances = json::array();
    for (const auto& p : paths) instances.push_back({{"name", fs::path(p).filename().string()}, {"game", read_json(p)}});
    auto [st, res] = invoke(qcg_bench, json{{"instances", instances}, {"config", cf.config()},
                                            {"limits", cf.limits()}, {"jobs", jobs}});
    if (st != QCG_OK) {
        print_error(res);
        return exit_code(st);
    }
    if (as_json) {
        std::cout << res.dump(2) << '\n';
        return kExitOk;
    }
    std::cout << std::left << std::setw(24) << "instance" << std::setw(10) << "status" << std::setw(8) << "outcome"
              << std::setw(12) << "nodes" << std::setw(12) << "seconds" << "nodes/s\n";
    for (const auto& r : res["rows"]) {
        std::cout << std::left << std::setw(24) << r["name"].get<std::string>() << std::setw(10)
                  << r["status"].get<std::string>() << std::setw(8) << r.value("outcome", std::string("-"))
                  << std::setw(12) << r.value("nodes", std::uint64_t{0}) << std::setw(12) << std::fixed
                  << std::setprecision(4) << r.value("seconds", 0.0) << std::setprecision(0)
                  << r.value("nodes_per_second", 0.0) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum combinatorial game toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "print JSON instead of text");

    ConfigFlags solve_cf;
    std::string solve_path;
    std::optional<std::string> state_path;
    auto* solve = app.add_subcommand("solve", "outcome class and best move of a position");
    solve->add_option("instance", solve_path, "instance JSON")->required();
    solve->add_option("--state", state_path, "JSON with superposition and to_move");
    solve_cf.add(solve);

    std::string suite;
    std::uint64_t seed = 7;
    std::optional<std::size_t> count;
    std::optional<std::string> report;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "figures, geography, reductions, qbf, polyspace, dag, properties, oracles or all")
        ->required();
    verify->add_option("--seed", seed, "generator seed");
    verify->add_option("--count", count, "sample size override");
    verify->add_option("--report", report, "write the JSON report here");

    std::string kind, input, out_dir;
    auto* reduce = app.add_subcommand("reduce", "build a reduction target");
    reduce->add_option("kind", kind, "reduction name")->required();
    reduce->add_option("input", input, "source game JSON")->required();
    reduce->add_option("output", out_dir, "output directory")->required();

    const char* env_listen = std::getenv("QCGT_LISTEN");
    std::string listen = env_listen ? env_listen : "127.0.0.1:8080";
    std::optional<std::string> snapshot, static_dir;
    double engine_seconds = 5.0;
    std::size_t jobs = default_jobs();
    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    serve->add_option("--listen", listen, "host:port");
    serve->add_option("--snapshot", snapshot, "session snapshot file");
    serve->add_option("--static-dir", static_dir, "web UI assets served at /");
    serve->add_option("--engine-seconds", engine_seconds, "engine time per reply");
    serve->add_option("--jobs", jobs, "worker threads");

    ConfigFlags bench_cf;
    std::vector<std::string> bench_paths;
    std::optional<std::string> bench_dir;
    auto* bench = app.add_subcommand("bench", "time the solver on a set of instances");
    bench->add_option("instances", bench_paths, "instance JSON files");
    bench->add_option("--dir", bench_dir, "also every *.json in this directory");
    bench->add_option("--jobs", jobs, "parallel instances");
    bench_cf.add(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), kExitInput);
    }

    try {
        if (*solve) return cmd_solve(solve_path, state_path, solve_cf, as_json);
        if (*verify) return cmd_verify(suite, seed, count, report, as_json);
        if (*reduce) return cmd_reduce(kind, input, out_dir);
        if (*serve) return cmd_serve(listen, snapshot, static_dir, engine_seconds, jobs);
        if (*bench) {
            if (bench_dir) {
                std::vector<std::string> found;
                for (const auto& e : fs::directory_iterator(*bench_dir))
                    if (e.path().extension() == ".json") found.push_back(e.path().string());
                std::sort(found.begin(), found.end());
                bench_paths.insert(bench_paths.end(), found.begin(), found.end());
            }
            return cmd_bench(bench_paths, bench_cf, jobs, as_json);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
