// Command-line front end: every solver and audit behind stable subcommands
// with CSV/JSON emission for tables and plot data.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "capsep/pohozaev.hpp"
#include "capsep/shooting.hpp"
#include "capsep/spectral.hpp"

namespace capsep::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "capsep 0.1.0";
constexpr int kExitConfig = 2;
constexpr int kExitNoBracket = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
    double p = 2.0;
    double q = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    int epsilon = 1;
    int N = 3;
    double theta0 = 0.5 * std::numbers::pi;
    double tol = 1e-8;
    double rtol = 1e-10;
    int grid_n = 2000;
    int rayleigh_n = 256;
    int ode_dense = 2049;
    double a_min = 1e-3;
    double a_max = 1e3;
    int scan_points = 200;
    double q_min = std::numeric_limits<double>::quiet_NaN();
    double q_max = std::numeric_limits<double>::quiet_NaN();
    int steps = 0;
    double p_min = 1.5;
    double p_max = 3.0;
    double dp = 0.05;
    std::string kind = "beta-s";  // spectral subcommand: lambda-beta | beta-s | lambda-1
    std::string format = "csv";
    std::string out;          // table destination; empty = stdout
    std::string profile_out = "profile.csv";
    std::string profile_in;
    std::string verdict_out;  // empty = stdout
    int workers = 1;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string esc = "\"";
    for (char c : s) {
        if (c == '"') esc += '"';
        esc += c;
    }
    esc += '"';
    return esc;
}

// JSON value for a double; non-finite values become status strings.
json jnum(double v) {
    if (std::isfinite(v)) return v;
    if (std::isinf(v)) return v > 0 ? "infinite" : "-infinite";
    return "nan";
}

json config_json(const RunConfig& c) {
    json j;
    j["p"] = c.p;
    j["q"] = jnum(c.q);
    j["beta"] = jnum(c.beta);
    j["epsilon"] = c.epsilon;
    j["N"] = c.N;
    j["theta0"] = c.theta0;
    j["tol"] = c.tol;
    j["rtol"] = c.rtol;
    j["grid_n"] = c.grid_n;
    j["rayleigh_n"] = c.rayleigh_n;
    j["ode_dense"] = c.ode_dense;
    j["a_min"] = c.a_min;
    j["a_max"] = c.a_max;
    j["scan_points"] = c.scan_points;
    j["q_min"] = jnum(c.q_min);
    j["q_max"] = jnum(c.q_max);
    j["steps"] = c.steps;
    j["p_min"] = c.p_min;
    j["p_max"] = c.p_max;
    j["dp"] = c.dp;
    j["kind"] = c.kind;
    j["format"] = c.format;
    j["workers"] = c.workers;
    return j;
}

void apply_json_config(RunConfig& c, const json& j) {
    auto num = [&](const char* key, double& slot) {
        if (j.contains(key) && j[key].is_number()) slot = j[key].get<double>();
    };
    auto integer = [&](const char* key, int& slot) {
        if (j.contains(key) && j[key].is_number_integer()) slot = j[key].get<int>();
    };
    auto str = [&](const char* key, std::string& slot) {
        if (j.contains(key) && j[key].is_string()) slot = j[key].get<std::string>();
    };
    num("p", c.p);
    num("q", c.q);
    num("beta", c.beta);
    integer("epsilon", c.epsilon);
    integer("N", c.N);
    num("theta0", c.theta0);
    num("tol", c.tol);
    num("rtol", c.rtol);
    integer("grid_n", c.grid_n);
    integer("rayleigh_n", c.rayleigh_n);
    integer("ode_dense", c.ode_dense);
    num("a_min", c.a_min);
    num("a_max", c.a_max);
    integer("scan_points", c.scan_points);
    num("q_min", c.q_min);
    num("q_max", c.q_max);
    integer("steps", c.steps);
    num("p_min", c.p_min);
    num("p_max", c.p_max);
    num("dp", c.dp);
    str("kind", c.kind);
    str("format", c.format);
    str("out", c.out);
    str("profile_out", c.profile_out);
    str("profile_in", c.profile_in);
    str("verdict_out", c.verdict_out);
    integer("workers", c.workers);
}

// A table that renders either as commented CSV or as a JSON array.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // pre-formatted cells

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

    std::string to_csv(const RunConfig& cfg, const std::string& command) const {
        std::ostringstream os;
        os << "# " << kVersion << "\n";
        os << "# command: " << command << "\n";
        os << "# config: " << config_json(cfg).dump() << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << csv_escape(columns[i]);
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_escape(row[i]);
            os << "\n";
        }
        return os.str();
    }

    std::string to_json(const RunConfig& cfg, const std::string& command) const {
        json j;
        j["version"] = kVersion;
        j["command"] = command;
        j["config"] = config_json(cfg);
        j["rows"] = json::array();
        for (const auto& row : rows) {
            json r;
            for (std::size_t i = 0; i < row.size(); ++i) {
                // numeric strings stay numeric in JSON when round-trippable
                char* end = nullptr;
                const double v = std::strtod(row[i].c_str(), &end);
                if (end && *end == '\0' && !row[i].empty() && std::isfinite(v))
                    r[columns[i]] = v;
                else
                    r[columns[i]] = row[i];
            }
            j["rows"].push_back(r);
        }
        return j.dump(2) + "\n";
    }
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

void write_table(const Table& table, const RunConfig& cfg, const std::string& command) {
    emit(cfg.format == "json" ? table.to_json(cfg, command) : table.to_csv(cfg, command),
         cfg.out);
}

ProblemParams params_from(const RunConfig& cfg) {
    ProblemParams params;
    params.p = cfg.p;
    params.epsilon = cfg.epsilon;
    params.N = cfg.N;
    if (std::isfinite(cfg.q)) {
        params.q = cfg.q;
        params.beta = std::isfinite(cfg.beta) ? cfg.beta : beta_q(cfg.q, cfg.p);
    } else if (std::isfinite(cfg.beta)) {
        params.beta = cfg.beta;
        params.q = q_from_beta(cfg.beta, cfg.p);
    } else {
        throw std::invalid_argument("either --q or --beta is required");
    }
    params.validate();
    return params;
}

CapGeometry geometry_from(const RunConfig& cfg) {
    CapGeometry geo{cfg.N - 1, cfg.theta0};
    geo.validate();
    return geo;
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions opt;
    opt.a_min = cfg.a_min;
    opt.a_max = cfg.a_max;
    opt.scan_points = cfg.scan_points;
    opt.integ.rtol = cfg.rtol;
    opt.integ.n_dense = cfg.ode_dense;
    opt.scan_integ.rtol = cfg.rtol;
    return opt;
}

// ---------------------------------------------------------------- profiles

void write_profile_csv(const RadialProfile& profile, const RunConfig& cfg,
                       const std::string& path) {
    json meta;
    meta["p"] = profile.params.p;
    meta["q"] = profile.params.q;
    meta["beta"] = profile.params.beta;
    meta["epsilon"] = profile.params.epsilon;
    meta["N"] = profile.params.N;
    meta["theta0"] = profile.geometry.theta0;
    meta["amplitude"] = profile.amplitude;
    meta["theta_stop"] = profile.theta_stop;
    meta["termination"] = static_cast<int>(profile.termination);
    if (std::holds_alternative<SpectralMode>(profile.mode)) {
        meta["mode"] = "spectral";
        meta["lambda"] = std::get<SpectralMode>(profile.mode).lambda;
    } else {
        meta["mode"] = "lane_emden";
    }

    std::ostringstream os;
    os << "# " << kVersion << "\n";
    os << "# config: " << config_json(cfg).dump() << "\n";
    os << "# profile: " << meta.dump() << "\n";
    os << "theta,omega,domega\n";
    for (std::size_t i = 0; i < profile.theta.size(); ++i)
        os << fmt(profile.theta[i]) << ',' << fmt(profile.omega[i]) << ','
           << fmt(profile.domega[i]) << "\n";
    emit(os.str(), path);
}

RadialProfile load_profile_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::invalid_argument("cannot open profile file: " + path);
    RadialProfile profile;
    bool have_meta = false;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# profile: ";
            if (line.rfind(tag, 0) == 0) {
                const json meta = json::parse(line.substr(tag.size()));
                profile.params.p = meta.at("p").get<double>();
                profile.params.q = meta.at("q").get<double>();
                profile.params.beta = meta.at("beta").get<double>();
                profile.params.epsilon = meta.at("epsilon").get<int>();
                profile.params.N = meta.at("N").get<int>();
                profile.geometry.d = profile.params.N - 1;
                profile.geometry.theta0 = meta.at("theta0").get<double>();
                profile.amplitude = meta.at("amplitude").get<double>();
                profile.theta_stop = meta.at("theta_stop").get<double>();
                profile.termination = static_cast<Termination>(meta.at("termination").get<int>());
                if (meta.at("mode").get<std::string>() == "spectral")
                    profile.mode = SpectralMode{meta.at("lambda").get<double>()};
                else
                    profile.mode = LaneEmdenMode{};
                have_meta = true;
            }
            continue;
        }
        if (line.rfind("theta,", 0) == 0) continue;
        double th = 0, om = 0, dom = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &th, &om, &dom) != 3)
            throw std::invalid_argument("malformed profile row: " + line);
        profile.theta.push_back(th);
        profile.omega.push_back(om);
        profile.domega.push_back(dom);
    }
    if (!have_meta)
        throw std::invalid_argument("profile file lacks the '# profile:' metadata line");
    if (profile.theta.size() < 7)
        throw std::invalid_argument("profile file has too few rows");
    // evaluation assumes the uniform grid the solver writes
    const double dt = profile.theta[1] - profile.theta[0];
    for (std::size_t i = 1; i < profile.theta.size(); ++i)
        if (std::abs(profile.theta[i] - profile.theta[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("profile file rows must form a uniform theta grid");
    rebuild_curvatures(profile);
    return profile;
}

// ---------------------------------------------------------------- commands

int cmd_coeffs(const RunConfig& cfg) {
    Table table;
    table.columns = {"q",       "beta",  "beta_q", "q_c",    "beta_c", "lambda",
                     "A",       "B",     "C",      "A_fact", "B_fact", "C_fact"};

    std::vector<double> qs;
    if (cfg.steps > 0 && std::isfinite(cfg.q_min) && std::isfinite(cfg.q_max)) {
        for (int i = 0; i < cfg.steps; ++i)
            qs.push_back(cfg.q_min +
                         (cfg.q_max - cfg.q_min) * i / std::max(1, cfg.steps - 1));
    } else {
        qs.push_back(std::isfinite(cfg.q) ? cfg.q
                     : std::isfinite(cfg.beta) ? q_from_beta(cfg.beta, cfg.p)
                                               : throw std::invalid_argument(
                                                     "coeffs: need --q, --beta, or a q range"));
    }

    const double qc = q_critical(cfg.p, cfg.N);
    const bool has_bc = cfg.p < cfg.N - 1.0;
    const double bc = has_bc ? beta_critical(cfg.p, cfg.N)
                             : std::numeric_limits<double>::quiet_NaN();
    for (double q : qs) {
        ProblemParams params;
        params.p = cfg.p;
        params.q = q;
        params.beta = std::isfinite(cfg.beta) ? cfg.beta : beta_q(q, cfg.p);
        params.epsilon = cfg.epsilon;
        params.N = cfg.N;
        params.validate();
        const PohozaevCoeffs c = pohozaev_coeffs(params);
        PohozaevCoeffs f{std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN()};
        if (has_bc)
            f = pohozaev_coeffs_factored(params.beta, cfg.p, cfg.N);
        table.add_row({fmt(q), fmt(params.beta), fmt(beta_q(q, cfg.p)), fmt(qc), fmt(bc),
                       fmt(lambda_of_beta(params.beta, cfg.p, cfg.N)), fmt(c.A), fmt(c.B),
                       fmt(c.C), fmt(f.A), fmt(f.B), fmt(f.C)});
    }
    write_table(table, cfg, "coeffs");
    return 0;
}

int cmd_spectral(const RunConfig& cfg) {
    const CapGeometry geo = geometry_from(cfg);
    Table table;
    table.columns = {"kind", "p",          "N",           "theta0",      "beta",
                     "value", "bracket_lo", "bracket_hi", "evaluations", "grid_size"};
    SpectralOptions opt;
    opt.integ.rtol = cfg.rtol;

    SpectralResult res;
    if (cfg.kind == "lambda-beta") {
        if (!std::isfinite(cfg.beta))
            throw std::invalid_argument("spectral --kind lambda-beta requires --beta");
        res = lambda_beta(cfg.beta, cfg.p, geo, cfg.tol, opt);
    } else if (cfg.kind == "beta-s") {
        res = beta_S(cfg.p, geo, cfg.tol, opt);
    } else if (cfg.kind == "lambda-1") {
        if (!std::isfinite(cfg.beta))
            throw std::invalid_argument("spectral --kind lambda-1 requires --beta");
        res = lambda_1_beta(cfg.beta, cfg.p, geo, cfg.rayleigh_n);
    } else {
        throw std::invalid_argument("spectral: unknown kind '" + cfg.kind + "'");
    }
    table.add_row({cfg.kind, fmt(cfg.p), std::to_string(cfg.N), fmt(cfg.theta0), fmt(res.beta),
                   fmt(res.value), fmt(res.bracket_lo), fmt(res.bracket_hi),
                   std::to_string(res.evaluations), std::to_string(res.grid_size)});
    write_table(table, cfg, "spectral");
    return 0;
}

int cmd_continuation(const RunConfig& cfg) {
    const CapGeometry geo = geometry_from(cfg);
    std::vector<double> grid;
    for (double p = cfg.p_min; p <= cfg.p_max + 1e-12; p += cfg.dp)
        grid.push_back(p);
    const ContinuationTable result = beta_S_continuation(grid, geo, cfg.tol);

    Table table;
    table.columns = {"p", "beta_S", "slope"};
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const double slope =
            i == 0 ? std::numeric_limits<double>::quiet_NaN()
                   : std::abs(result.entries[i].beta_S - result.entries[i - 1].beta_S) /
                         (result.entries[i].p - result.entries[i - 1].p);
        table.add_row({fmt(result.entries[i].p), fmt(result.entries[i].beta_S), fmt(slope)});
    }
    write_table(table, cfg, "continuation");
    return 0;
}

json verdict_json(const SolveResult& res, const RunConfig& cfg, bool absorption) {
    json v;
    v["version"] = kVersion;
    v["config"] = config_json(cfg);
    v["status"] = res.status == SolveStatus::solution_found ? "solution_found" : "no_bracket";
    v["multiplicity"] = res.multiplicity;
    v["brackets"] = json::array();
    for (auto [lo, hi] : res.brackets)
        v["brackets"].push_back({jnum(lo), jnum(hi)});
    v["warnings"] = res.warnings;
    if (res.status == SolveStatus::solution_found) {
        v["amplitude"] = jnum(res.amplitude);
        v["achieved_miss"] = jnum(res.achieved_miss);
        v["divergence_residual"] = jnum(divergence_residual(res.profile));
        if (absorption) {
            v["unique"] = res.unique_verified;
            v["multistart_max_distance"] = jnum(res.multistart_max_distance);
        }
    }
    return v;
}

int cmd_solve(const RunConfig& cfg) {
    const ProblemParams params = params_from(cfg);
    const CapGeometry geo = geometry_from(cfg);
    const SolveOptions opt = solve_options(cfg);
    const bool absorption = params.epsilon == -1;
    const SolveResult res =
        absorption ? solve_absorption(params, geo, opt) : solve_source(params, geo, opt);

    emit(verdict_json(res, cfg, absorption).dump(2) + "\n", cfg.verdict_out);
    if (res.status != SolveStatus::solution_found)
        return kExitNoBracket;
    if (!cfg.profile_out.empty())
        write_profile_csv(res.profile, cfg, cfg.profile_out);
    return 0;
}

int cmd_audit(const RunConfig& cfg) {
    if (cfg.theta0 > 0.5 * std::numbers::pi + 1e-12)
        throw std::invalid_argument("audit: requires theta0 <= pi/2");

    RadialProfile profile;
    if (!cfg.profile_in.empty()) {
        profile = load_profile_csv(cfg.profile_in);
        if (profile.geometry.theta0 > 0.5 * std::numbers::pi + 1e-12)
            throw std::invalid_argument("audit: stored profile has theta0 > pi/2");
    } else {
        const ProblemParams params = params_from(cfg);
        const CapGeometry geo = geometry_from(cfg);
        const SolveOptions opt = solve_options(cfg);
        const SolveResult res = params.epsilon == -1 ? solve_absorption(params, geo, opt)
                                                     : solve_source(params, geo, opt);
        if (res.status != SolveStatus::solution_found) {
            json fail;
            fail["version"] = kVersion;
            fail["config"] = config_json(cfg);
            fail["status"] = "no_bracket";
            emit(fail.dump(2) + "\n", cfg.out);
            return kExitNoBracket;
        }
        profile = res.profile;
    }

    const WeightedGrid grid = make_weighted_grid(profile.geometry, cfg.grid_n);
    const PohozaevReport rep = audit_identity(profile, grid);
    json j;
    j["version"] = kVersion;
    j["config"] = config_json(cfg);
    j["status"] = "ok";
    j["lhs"] = jnum(rep.lhs);
    j["rhs"] = jnum(rep.rhs);
    j["term_A"] = jnum(rep.term_A);
    j["term_B"] = jnum(rep.term_B);
    j["term_C"] = jnum(rep.term_C);
    j["A"] = jnum(rep.coeffs.A);
    j["B"] = jnum(rep.coeffs.B);
    j["C"] = jnum(rep.coeffs.C);
    j["abs_residual"] = jnum(rep.abs_residual);
    j["rel_residual"] = jnum(rep.rel_residual);
    j["grid_size"] = rep.grid_size;
    emit(j.dump(2) + "\n", cfg.out);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.steps < 0 || (cfg.steps > 0 && !(std::isfinite(cfg.q_min) && std::isfinite(cfg.q_max))))
        throw std::invalid_argument("sweep: need --q-min, --q-max, --steps");
    const CapGeometry geo = geometry_from(cfg);
    ProblemParams tmpl;
    tmpl.p = cfg.p;
    tmpl.q = std::isfinite(cfg.q_min) ? cfg.q_min : 2.0;
    tmpl.beta = 1.0;
    tmpl.epsilon = cfg.epsilon;
    tmpl.N = cfg.N;

    std::vector<double> qs;
    for (int i = 0; i < cfg.steps; ++i)
        qs.push_back(cfg.q_min + (cfg.q_max - cfg.q_min) * i / std::max(1, cfg.steps - 1));

    Table table;
    table.columns = {"param", "beta_q", "beta_S", "status", "amplitude", "residual"};
    if (qs.empty()) {
        write_table(table, cfg, "sweep");
        return 0;
    }

    const double bs = beta_S(cfg.p, geo, cfg.tol).value;
    const SolveOptions opt = solve_options(cfg);

    struct Row {
        std::string status;
        double beta_q = 0, amplitude = 0, residual = 0;
    };
    std::vector<Row> rows(qs.size());
    const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(qs.size())));
    auto work = [&](int start) {
        for (std::size_t i = start; i < qs.size(); i += workers) {
            Row& row = rows[i];
            try {
                const ExistenceVerdict v = classify_sample(qs[i], tmpl, geo, bs, opt);
                row.beta_q = v.beta_q;
                row.amplitude = v.amplitude;
                switch (v.status) {
                    case VerdictStatus::solution_found: row.status = "solution_found"; break;
                    case VerdictStatus::no_bracket: row.status = "no_bracket"; break;
                    case VerdictStatus::at_threshold: row.status = "at_threshold"; break;
                }
                if (v.status == VerdictStatus::solution_found) {
                    ProblemParams sample = tmpl;
                    sample.q = qs[i];
                    sample.beta = v.beta_q;
                    row.residual =
                        std::abs(miss_function(v.amplitude, sample, geo, opt.scan_integ).miss) /
                        v.amplitude;
                }
            } catch (const std::exception& e) {
                row.status = "error";
                row.beta_q = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }

    std::string flips;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (i > 0 && rows[i].status != rows[i - 1].status)
            flips += "# flip: between param " + fmt(qs[i - 1]) + " and " + fmt(qs[i]) + "\n";
        table.add_row({fmt(qs[i]), fmt(rows[i].beta_q), fmt(bs), rows[i].status,
                       rows[i].status == "solution_found" ? fmt(rows[i].amplitude) : "nan",
                       rows[i].status == "solution_found" ? fmt(rows[i].residual) : "nan"});
    }
    if (cfg.format == "json") {
        write_table(table, cfg, "sweep");
    } else {
        emit(table.to_csv(cfg, "sweep") + flips, cfg.out);
    }
    return 0;
}

std::string prescan_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0)
            return arg.substr(9);
    }
    return {};
}

} // namespace

int run(int argc, char** argv) {
    RunConfig cfg;
    if (const char* env = std::getenv("CAPSEP_WORKERS"))
        cfg.workers = std::max(1, std::atoi(env));

    const std::string config_path = prescan_config_path(argc, argv);
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "config error: cannot open " << config_path << "\n";
            return kExitConfig;
        }
        try {
            apply_json_config(cfg, json::parse(is));
        } catch (const json::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        }
    }

    CLI::App app{"separable Lane-Emden solutions on spherical cones"};
    app.set_version_flag("--version", kVersion);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file (flags override its values)");
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_dummy, "JSON config file (flags override its values)");
        sub->add_option("--p", cfg.p, "p-Laplacian exponent (> 1)");
        sub->add_option("--N", cfg.N, "ambient dimension (>= 2)");
        sub->add_option("--theta0", cfg.theta0, "cap half-angle in radians");
        sub->add_option("--q", cfg.q, "nonlinearity exponent");
        sub->add_option("--beta", cfg.beta, "decay exponent (default beta_q(q))");
        sub->add_option("--epsilon", cfg.epsilon, "+1 source, -1 absorption")
            ->check(CLI::IsMember({1, -1}));
        sub->add_option("--tol", cfg.tol, "root tolerance");
        sub->add_option("--rtol", cfg.rtol, "ODE relative tolerance");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out, "output path (default stdout)");
    };

    CLI::App* coeffs = app.add_subcommand("coeffs", "closed-form exponents and coefficients");
    add_common(coeffs);
    coeffs->add_option("--q-min", cfg.q_min, "grid start");
    coeffs->add_option("--q-max", cfg.q_max, "grid end");
    coeffs->add_option("--steps", cfg.steps, "grid size");

    CLI::App* spectral = app.add_subcommand("spectral", "spectral constants and eigenvalues");
    add_common(spectral);
    spectral->add_option("--kind", cfg.kind, "lambda-beta | beta-s | lambda-1")
        ->check(CLI::IsMember({"lambda-beta", "beta-s", "lambda-1"}));
    spectral->add_option("--rayleigh-n", cfg.rayleigh_n, "Rayleigh minimizer grid");

    CLI::App* continuation = app.add_subcommand("continuation", "beta_S along a p grid");
    add_common(continuation);
    continuation->add_option("--p-min", cfg.p_min, "grid start");
    continuation->add_option("--p-max", cfg.p_max, "grid end");
    continuation->add_option("--dp", cfg.dp, "grid step");

    CLI::App* solve = app.add_subcommand("solve", "amplitude shooting solve");
    add_common(solve);
    solve->add_option("--a-min", cfg.a_min, "amplitude scan start");
    solve->add_option("--a-max", cfg.a_max, "amplitude scan end");
    solve->add_option("--scan-points", cfg.scan_points, "amplitude scan size");
    solve->add_option("--ode-dense", cfg.ode_dense, "stored profile nodes");
    solve->add_option("--profile-out", cfg.profile_out, "profile CSV path");
    solve->add_option("--verdict-out", cfg.verdict_out, "verdict JSON path (default stdout)");

    CLI::App* audit = app.add_subcommand("audit", "integral identity audit");
    add_common(audit);
    audit->add_option("--grid-n", cfg.grid_n, "quadrature nodes");
    audit->add_option("--profile-in", cfg.profile_in, "stored profile CSV to audit");
    audit->add_option("--a-min", cfg.a_min, "amplitude scan start");
    audit->add_option("--a-max", cfg.a_max, "amplitude scan end");
    audit->add_option("--scan-points", cfg.scan_points, "amplitude scan size");

    CLI::App* sweep = app.add_subcommand("sweep", "existence sweep in q");
    add_common(sweep);
    sweep->add_option("--q-min", cfg.q_min, "sweep start");
    sweep->add_option("--q-max", cfg.q_max, "sweep end");
    sweep->add_option("--steps", cfg.steps, "sweep size");
    sweep->add_option("--workers", cfg.workers, "concurrent rows");
    sweep->add_option("--a-min", cfg.a_min, "amplitude scan start");
    sweep->add_option("--a-max", cfg.a_max, "amplitude scan end");
    sweep->add_option("--scan-points", cfg.scan_points, "amplitude scan size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (coeffs->parsed()) return cmd_coeffs(cfg);
        if (spectral->parsed()) return cmd_spectral(cfg);
        if (continuation->parsed()) return cmd_continuation(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (audit->parsed()) return cmd_audit(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        std::cerr << "no subcommand given\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BracketError& e) {
        std::cerr << "bracket failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace capsep::cli
