// Batch front-end for the waveform-relaxation solvers and the
// frequency-domain analysis toolkit.
//
// Subcommands:
//   analyze  sigma/rho tables and figure-ready scans (1-D analysis)
//   solve    one scheme on one problem, JSON report
//   sweep    feasibility classification over a parameter grid
//   bench    scheme x size comparison table
//
// One JSON config per run; unknown keys are rejected. CSV columns are
// (omega, alpha, q, rho, sigma) with absent axes left blank. Exit codes:
// 0 success, 2 config error, 3 runtime fault.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "wrhss/wrhss.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace wrhss;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
    return cfg;
}

void reject_unknown_keys(const json& cfg, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where + " config");
}

double get_num(const json& cfg, const std::string& key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_number()) throw ConfigError("'" + key + "' must be a number");
    return cfg[key].get<double>();
}

long get_int(const json& cfg, const std::string& key, long fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return cfg[key].get<long>();
}

bool get_bool(const json& cfg, const std::string& key, bool fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_boolean()) throw ConfigError("'" + key + "' must be a boolean");
    return cfg[key].get<bool>();
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

std::string scan_csv(const SpectralScan& scan) {
    std::string body = "omega,alpha,q,rho,sigma\n";
    for (const ScanPoint& pt : scan.points) {
        body += fmt(pt.omega);
        body += ',';
        body += fmt(pt.alpha);
        body += ',';
        body += fmt(pt.q);
        body += ',';
        body += pt.ok ? fmt(pt.rho) : "";
        body += ',';
        body += fmt(pt.sigma);
        body += '\n';
    }
    return body;
}

SchemeConfig parse_scheme(const std::string& name, const json& cfg) {
    SchemeConfig sc;
    if (name == "wr-hss") {
        sc.kind = SchemeConfig::Kind::wr_hss;
        sc.variant = WrHssVariant::standard;
    } else if (name == "wr-hss-reversed") {
        sc.kind = SchemeConfig::Kind::wr_hss;
        sc.variant = WrHssVariant::reversed;
    } else if (name == "wr-hss-bad") {
        sc.kind = SchemeConfig::Kind::wr_hss;
        sc.variant = WrHssVariant::bad;
    } else if (name == "wr-sor") {
        sc.kind = SchemeConfig::Kind::wr_sor;
    } else if (name == "dgmres") {
        sc.kind = SchemeConfig::Kind::dgmres;
    } else if (name == "direct") {
        sc.kind = SchemeConfig::Kind::direct;
    } else {
        throw ConfigError("unknown scheme '" + name + "'");
    }
    sc.alpha = get_num(cfg, "alpha", 0.0);
    sc.tau = get_num(cfg, "tau", 0.2);
    sc.m = get_int(cfg, "m", 5);
    sc.eta = get_num(cfg, "eta", 1e-8);
    return sc;
}

ProblemSpec parse_problem(const json& cfg) {
    ProblemSpec s;
    s.d = static_cast<int>(get_int(cfg, "d", 1));
    s.n = get_int(cfg, "n", 64);
    s.q = get_num(cfg, "q", 0.0);
    s.dt = get_num(cfg, "dt", 1e-4);
    s.levels_per_window = get_int(cfg, "levels_per_window", 5);
    s.windows = get_int(cfg, "windows", 1);
    s.epsilon = get_num(cfg, "epsilon", 1e-5);
    s.eta = get_num(cfg, "eta", 1e-8);
    s.gmres_restart = get_int(cfg, "m", 5);
    s.cap = get_int(cfg, "cap", 7000);
    if (cfg.contains("alpha") && !cfg["alpha"].is_null()) s.alpha = get_num(cfg, "alpha", 0.0);
    s.validate();
    return s;
}

json report_to_json(const SolveReport& rep) {
    json j;
    j["scheme"] = rep.scheme;
    j["d"] = rep.d;
    j["n"] = rep.n;
    j["q"] = rep.q;
    j["dt"] = rep.dt;
    j["levels"] = rep.levels;
    j["windows"] = rep.windows;
    j[rep.param_name.empty() ? "m" : rep.param_name] = rep.param;
    j["it"] = rep.it;
    j["err"] = rep.err;
    j["res"] = rep.res;
    j["wall_seconds"] = rep.wall_seconds;
    j["capped"] = rep.capped;
    j["per_window"] = rep.per_window;
    return j;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const json& cfg, const fs::path& out, int threads) {
    reject_unknown_keys(cfg, {"n", "q_list", "omega_c", "omega_points", "dt", "alpha",
                              "surface", "reynolds"},
                        "analyze");
    const long n = get_int(cfg, "n", 64);
    const double omega_c = get_num(cfg, "omega_c", 2000.0);
    const long omega_points = get_int(cfg, "omega_points", 2001);
    const double dt = get_num(cfg, "dt", 1e-2);
    if (!cfg.contains("q_list") || !cfg["q_list"].is_array() || cfg["q_list"].empty())
        throw ConfigError("analyze requires a nonempty 'q_list' array");
    std::vector<double> qs;
    for (const auto& v : cfg["q_list"]) {
        if (!v.is_number()) throw ConfigError("'q_list' entries must be numbers");
        qs.push_back(v.get<double>());
    }

    std::string summary = "q,alpha,sigma,rho_min,rho_max\n";
    std::printf("%-10s %-12s %-8s %s\n", "q", "alpha", "sigma", "rho interval");
    for (double q : qs) {
        ProblemSpec s;
        s.d = 1;
        s.n = n;
        s.q = q;
        s.dt = dt;
        DiscreteProblem p = build_problem(s);
        const double alpha = cfg.contains("alpha") && !cfg["alpha"].is_null()
                                 ? get_num(cfg, "alpha", 0.0)
                                 : p.alpha_default();
        OmegaSweepResult sweep = omega_sweep(p, alpha, omega_c, omega_points, threads);
        const double sigma = sigma_upper_bound(alpha, p.lambda_min_H(), p.lambda_max_H());
        summary += fmt(q) + "," + fmt(alpha) + "," + fmt(sigma) + "," + fmt(sweep.rho_min) +
                   "," + fmt(sweep.rho_max) + "\n";
        std::printf("%-10g %-12.6g %-8.4f (%.4f, %.4f)%s\n", q, alpha, sigma, sweep.rho_min,
                    sweep.rho_max, sweep.scan.failed ? "  [flagged points]" : "");
        char name[64];
        std::snprintf(name, sizeof name, "sweep_q%g.csv", q);
        write_text(out / name, scan_csv(sweep.scan));
    }
    write_text(out / "summary.csv", summary);

    if (cfg.contains("surface")) {
        const json& sf = cfg["surface"];
        reject_unknown_keys(sf, {"q", "alpha_min", "alpha_max", "alpha_points", "omega_points"},
                            "analyze.surface");
        ProblemSpec s;
        s.d = 1;
        s.n = n;
        s.q = get_num(sf, "q", qs.front());
        s.dt = dt;
        DiscreteProblem p = build_problem(s);
        const long na = get_int(sf, "alpha_points", 33);
        const long nw = get_int(sf, "omega_points", 65);
        const double a0 = get_num(sf, "alpha_min", p.alpha_default() / 4.0);
        const double a1 = get_num(sf, "alpha_max", p.alpha_default() * 4.0);
        if (!(a0 > 0.0 && a1 >= a0) || na < 1 || nw < 2)
            throw ConfigError("invalid surface grid");
        std::vector<double> alphas(na), omegas(nw);
        for (long i = 0; i < na; ++i)
            alphas[i] = a0 + (a1 - a0) * static_cast<double>(i) /
                                 static_cast<double>(std::max<long>(1, na - 1));
        for (long i = 0; i < nw; ++i)
            omegas[i] = -omega_c + 2.0 * omega_c * static_cast<double>(i) /
                                       static_cast<double>(nw - 1);
        write_text(out / "surface.csv", scan_csv(surface_scan(p, alphas, omegas, threads)));
    }

    if (cfg.contains("reynolds")) {
        const json& rf = cfg["reynolds"];
        reject_unknown_keys(rf, {"q_min", "q_max", "points", "omega_points"},
                            "analyze.reynolds");
        const long pts = get_int(rf, "points", 17);
        const double q0 = get_num(rf, "q_min", 1.0);
        const double q1 = get_num(rf, "q_max", 1000.0);
        if (pts < 1 || !(q0 > 0.0 && q1 >= q0)) throw ConfigError("invalid reynolds grid");
        std::vector<double> qgrid(pts);
        for (long i = 0; i < pts; ++i)
            qgrid[i] = q0 + (q1 - q0) * static_cast<double>(i) /
                                static_cast<double>(std::max<long>(1, pts - 1));
        ProblemSpec base;
        base.d = 1;
        base.n = n;
        base.q = q0;
        base.dt = dt;
        write_text(out / "reynolds.csv",
                   scan_csv(reynolds_curve(base, qgrid, omega_c,
                                           get_int(rf, "omega_points", 129), threads)));
    }
    return 0;
}

// ------------------------------------------------------------------ solve

int cmd_solve(const json& cfg, const fs::path& out, int /*threads*/) {
    reject_unknown_keys(cfg,
                        {"scheme", "d", "n", "q", "dt", "levels_per_window", "windows",
                         "alpha", "tau", "m", "eta", "epsilon", "cap", "compute_err"},
                        "solve");
    if (!cfg.contains("scheme") || !cfg["scheme"].is_string())
        throw ConfigError("solve requires a 'scheme' string");
    ProblemSpec spec = parse_problem(cfg);
    SchemeConfig sc = parse_scheme(cfg["scheme"].get<std::string>(), cfg);
    DiscreteProblem p = build_problem(spec);
    RunSettings rs;
    rs.levels_per_window = spec.levels_per_window;
    rs.windows = spec.windows;
    rs.eps = spec.epsilon;
    rs.cap = spec.cap;
    rs.compute_err = get_bool(cfg, "compute_err", true);
    SolveReport rep = run_windowed(p, sc, rs);
    json j = report_to_json(rep);
    j["config"] = cfg;
    write_text(out / "report.json", j.dump(2) + "\n");
    std::printf("%s\n", report_to_json(rep).dump().c_str());
    return 0;
}

// ------------------------------------------------------------------ sweep

int cmd_sweep(const json& cfg, const fs::path& out, int threads) {
    reject_unknown_keys(cfg,
                        {"scheme", "d", "n", "q", "dt", "levels_per_window", "windows",
                         "epsilon", "cap", "grid", "m", "eta"},
                        "sweep");
    if (!cfg.contains("scheme") || !cfg["scheme"].is_string())
        throw ConfigError("sweep requires a 'scheme' string");
    const std::string scheme = cfg["scheme"].get<std::string>();
    if (scheme != "wr-hss" && scheme != "wr-sor")
        throw ConfigError("sweep supports schemes 'wr-hss' and 'wr-sor'");
    json cfg2 = cfg;
    if (!cfg2.contains("epsilon")) cfg2["epsilon"] = 0.05;
    ProblemSpec spec = parse_problem(cfg2);
    DiscreteProblem p = build_problem(spec);

    // default grids: tau on (0,3] step 1/512; alpha on (0,100] step 125/512
    double gmin, gmax, gstep;
    if (scheme == "wr-sor") {
        gmin = 1.0 / 512.0;
        gmax = 3.0;
        gstep = 1.0 / 512.0;
    } else {
        gmin = 125.0 / 512.0;
        gmax = 100.0;
        gstep = 125.0 / 512.0;
    }
    if (cfg.contains("grid")) {
        const json& g = cfg["grid"];
        reject_unknown_keys(g, {"min", "max", "step"}, "sweep.grid");
        gmin = get_num(g, "min", gmin);
        gmax = get_num(g, "max", gmax);
        gstep = get_num(g, "step", gstep);
    }
    if (!(gmin > 0.0 && gmax >= gmin && gstep > 0.0)) throw ConfigError("invalid sweep grid");
    std::vector<double> grid;
    for (double v = gmin; v <= gmax * (1.0 + 1e-12); v += gstep) grid.push_back(v);
    if (grid.empty()) throw ConfigError("empty sweep grid");

    std::vector<char> feasible(grid.size(), 0);
    std::vector<long> its(grid.size(), 0);
    std::vector<double> res(grid.size(), 0.0);
    parallel_for(static_cast<long>(grid.size()), threads, [&](long i) {
        RunSettings rs;
        rs.levels_per_window = spec.levels_per_window;
        rs.windows = spec.windows;
        rs.eps = spec.epsilon;
        rs.cap = spec.cap;
        rs.compute_err = false;
        SolveReport rep;
        if (scheme == "wr-sor")
            rep = wr_sor_solve(p, grid[i], spec.epsilon, spec.cap, rs);
        else
            rep = wr_hss_solve(p, grid[i], spec.epsilon, spec.cap, WrHssVariant::standard, rs);
        feasible[i] = (!rep.capped && !rep.diverged) ? 1 : 0;
        its[i] = rep.it;
        res[i] = rep.res;
    });

    std::string body = "param,it,res,feasible\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        body += fmt(grid[i]) + "," + std::to_string(its[i]) + "," + fmt(res[i]) + "," +
                (feasible[i] ? "1" : "0") + "\n";
    write_text(out / "feasibility.csv", body);

    // maximal contiguous feasible interval
    long best_lo = -1, best_hi = -2, lo = -1;
    for (long i = 0; i <= static_cast<long>(grid.size()); ++i) {
        const bool f = i < static_cast<long>(grid.size()) && feasible[i];
        if (f && lo < 0) lo = i;
        if (!f && lo >= 0) {
            if (i - 1 - lo > best_hi - best_lo) {
                best_lo = lo;
                best_hi = i - 1;
            }
            lo = -1;
        }
    }
    json j;
    j["scheme"] = scheme;
    j["param"] = (scheme == "wr-sor") ? "tau" : "alpha";
    j["grid_min"] = gmin;
    j["grid_max"] = gmax;
    j["grid_step"] = gstep;
    if (best_lo >= 0) {
        j["feasible_from"] = grid[best_lo];
        j["feasible_to"] = grid[best_hi];
        j["reaches_grid_edge"] = (best_hi + 1 == static_cast<long>(grid.size()));
        std::printf("%s %s feasible interval: (%.6g, %.6g%s)\n", scheme.c_str(),
                    j["param"].get<std::string>().c_str(), grid[best_lo], grid[best_hi],
                    j["reaches_grid_edge"].get<bool>() ? "+" : "");
    } else {
        j["feasible_from"] = nullptr;
        j["feasible_to"] = nullptr;
        j["reaches_grid_edge"] = false;
        std::printf("%s: no feasible parameter on the grid\n", scheme.c_str());
    }
    j["config"] = cfg;
    write_text(out / "interval.json", j.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------ bench

int cmd_bench(const json& cfg, const fs::path& out, int /*threads*/) {
    reject_unknown_keys(cfg,
                        {"schemes", "d", "sizes", "q", "dt", "levels_per_window", "windows",
                         "alpha", "tau", "m", "eta", "epsilon", "cap", "compute_err"},
                        "bench");
    if (!cfg.contains("schemes") || !cfg["schemes"].is_array() || cfg["schemes"].empty())
        throw ConfigError("bench requires a nonempty 'schemes' array");
    if (!cfg.contains("sizes") || !cfg["sizes"].is_array() || cfg["sizes"].empty())
        throw ConfigError("bench requires a nonempty 'sizes' array");

    std::string body = "scheme,n,it,err,res,wall_seconds,capped\n";
    json rows = json::array();
    for (const auto& sv : cfg["sizes"]) {
        if (!sv.is_number_integer()) throw ConfigError("'sizes' entries must be integers");
        json cfg2 = cfg;
        cfg2["n"] = sv.get<long>();
        cfg2.erase("schemes");
        cfg2.erase("sizes");
        ProblemSpec spec = parse_problem(cfg2);
        DiscreteProblem p = build_problem(spec);
        for (const auto& sn : cfg["schemes"]) {
            if (!sn.is_string()) throw ConfigError("'schemes' entries must be strings");
            SchemeConfig sc = parse_scheme(sn.get<std::string>(), cfg2);
            RunSettings rs;
            rs.levels_per_window = spec.levels_per_window;
            rs.windows = spec.windows;
            rs.eps = spec.epsilon;
            rs.cap = spec.cap;
            rs.compute_err = get_bool(cfg, "compute_err", true);
            SolveReport rep;
            try {
                rep = run_windowed(p, sc, rs);
            } catch (const std::exception& e) {
                body += sn.get<std::string>() + "," + std::to_string(sv.get<long>()) +
                        ",,,,," + "failed\n";
                json row;
                row["scheme"] = sn.get<std::string>();
                row["n"] = sv.get<long>();
                row["error"] = e.what();
                rows.push_back(row);
                continue;
            }
            body += rep.scheme + "," + std::to_string(rep.n) + "," + std::to_string(rep.it) +
                    "," + fmt(rep.err) + "," + fmt(rep.res) + "," + fmt(rep.wall_seconds) +
                    "," + (rep.capped ? "1" : "0") + "\n";
            rows.push_back(report_to_json(rep));
            std::printf("%-16s n=%-6ld IT=%-7ld ERR=%-10.3g RES=%-10.3g wall=%.1fs%s\n",
                        rep.scheme.c_str(), rep.n, rep.it, rep.err, rep.res, rep.wall_seconds,
                        rep.capped ? " [capped]" : "");
        }
    }
    write_text(out / "bench.csv", body);
    json j;
    j["rows"] = rows;
    j["config"] = cfg;
    write_text(out / "bench.json", j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WR-HSS solver and analysis harness for unsteady discrete elliptic problems"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    unsigned long long seed = 0;  // reserved for randomized starts; recorded only
    app.add_option("--config", config_path, "path to the JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (default: current)");
    app.add_option("--threads", threads, "worker threads for grid sweeps");
    app.add_option("--seed", seed, "seed recorded with the run");

    auto* analyze = app.add_subcommand("analyze", "sigma/rho analysis tables and scans");
    auto* solve = app.add_subcommand("solve", "run one scheme, emit a JSON report");
    auto* sweep = app.add_subcommand("sweep", "feasibility sweep over one parameter");
    auto* bench = app.add_subcommand("bench", "scheme-by-size comparison table");
    for (auto* sub : {analyze, solve, sweep, bench}) sub->fallthrough(true);

    CLI11_PARSE(app, argc, argv);
    if (threads < 1) threads = 1;

    try {
        const json cfg = load_config(config_path);
        fs::path out(out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (!fs::is_directory(out))
            throw ConfigError("cannot create output directory: " + out_dir);
        if (analyze->parsed()) return cmd_analyze(cfg, out, threads);
        if (solve->parsed()) return cmd_solve(cfg, out, threads);
        if (sweep->parsed()) return cmd_sweep(cfg, out, threads);
        if (bench->parsed()) return cmd_bench(cfg, out, threads);
        std::fprintf(stderr, "no subcommand given\n");
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime fault: %s\n", e.what());
        return 3;
    }
}
