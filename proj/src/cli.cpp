#include "qsep/cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsep/chsh.hpp"
#include "qsep/collective.hpp"
#include "qsep/optimizer.hpp"
#include "qsep/selftest.hpp"
#include "qsep/separability.hpp"
#include "qsep/state_io.hpp"
#include "qsep/states.hpp"

namespace qsep {

namespace {

using nlohmann::json;

struct StateSpecOptions {
    std::string family;
    std::optional<double> x;
    double a_re = 1.0 / std::sqrt(2.0);
    double a_im = 0.0;
    double b_re = 1.0 / std::sqrt(2.0);
    double b_im = 0.0;
    std::string path;
};

void add_state_options(CLI::App* cmd, StateSpecOptions& spec) {
    cmd->add_option("--family", spec.family, "state family")
        ->required()
        ->check(CLI::IsMember({"werner", "gisin", "singlet-polarized", "singlet", "file"}));
    cmd->add_option("--x", spec.x, "mixing parameter in [0, 1]");
    cmd->add_option("--a-re", spec.a_re, "Re a (gisin)");
    cmd->add_option("--a-im", spec.a_im, "Im a (gisin)");
    cmd->add_option("--b-re", spec.b_re, "Re b (gisin)");
    cmd->add_option("--b-im", spec.b_im, "Im b (gisin)");
    cmd->add_option("--path", spec.path, "state file (family 'file')");
}

double require_x(const StateSpecOptions& spec) {
    if (!spec.x) {
        throw std::invalid_argument("family '" + spec.family + "' needs --x");
    }
    return *spec.x;
}

BipartiteDensity build_state(const StateSpecOptions& spec) {
    if (spec.family == "werner") return werner(require_x(spec));
    if (spec.family == "gisin") {
        return gisin_family(cplx(spec.a_re, spec.a_im), cplx(spec.b_re, spec.b_im),
                            require_x(spec));
    }
    if (spec.family == "singlet-polarized") return singlet_plus_polarized(require_x(spec));
    if (spec.family == "singlet") return singlet();
    if (spec.path.empty()) {
        throw std::invalid_argument("family 'file' needs --path");
    }
    return read_state_file(spec.path);
}

json inputs_json(const StateSpecOptions& spec) {
    json j;
    j["family"] = spec.family;
    if (spec.x) j["x"] = *spec.x;
    if (spec.family == "gisin") {
        j["a"] = {spec.a_re, spec.a_im};
        j["b"] = {spec.b_re, spec.b_im};
    }
    if (spec.family == "file") j["path"] = spec.path;
    return j;
}

json report_skeleton(const std::string& command) {
    json j;
    j["command"] = command;
    j["inputs"] = json::object();
    j["results"] = json::object();
    j["tolerances"] = json::object();
    j["seed"] = nullptr;
    j["version"] = kVersion;
    return j;
}

json rows_json(const LocalRows& rows) {
    json u0 = json::array(), u1 = json::array();
    for (const cplx& c : rows.u0()) u0.push_back({c.real(), c.imag()});
    for (const cplx& c : rows.u1()) u1.push_back({c.real(), c.imag()});
    return json{{"u0", u0}, {"u1", u1}};
}

void emit(std::ostream& out, const json& report) {
    out << report.dump(2) << "\n";
}

VMode parse_mode(const std::string& mode) {
    return mode == "independent" ? VMode::independent : VMode::mirrored;
}

std::vector<double> build_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || lo > hi) {
        throw std::invalid_argument("scan: need --x-min <= --x-max and --grid > 0");
    }
    std::vector<double> g;
    for (double x = lo; x < hi + step / 2; x += step) {
        g.push_back(std::min(x, hi));
    }
    return g;
}

} // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"partial-transpose separability tests, CHSH maxima and collective "
                 "postselection for two-qubit states"};
    app.name("qsep");
    app.require_subcommand(1);

    StateSpecOptions ppt_spec;
    double ppt_tol = kDefaultPptTol;
    CLI::App* ppt_cmd = app.add_subcommand("ppt", "partial-transpose separability verdict");
    add_state_options(ppt_cmd, ppt_spec);
    ppt_cmd->add_option("--tol", ppt_tol, "eigenvalue tolerance");

    StateSpecOptions chsh_spec;
    CLI::App* chsh_cmd = app.add_subcommand("chsh", "largest Bell-operator expectation");
    add_state_options(chsh_cmd, chsh_spec);

    double th_a_re = 1.0 / std::sqrt(2.0), th_a_im = 0.0;
    double th_b_re = 1.0 / std::sqrt(2.0), th_b_im = 0.0;
    CLI::App* th_cmd = app.add_subcommand("thresholds", "family boundary constants");
    th_cmd->add_option("--a-re", th_a_re, "Re a");
    th_cmd->add_option("--a-im", th_a_im, "Im a");
    th_cmd->add_option("--b-re", th_b_re, "Re b");
    th_cmd->add_option("--b-im", th_b_im, "Im b");

    std::size_t col_pairs = 2;
    double col_x = 0.5;
    std::string col_rows = "xor";
    std::string col_mode = "mirrored";
    int col_restarts = 64;
    std::uint64_t col_seed = 0;
    int col_threads = 1;
    CLI::App* col_cmd = app.add_subcommand("collective", "postselected n-pair run");
    col_cmd->add_option("--pairs", col_pairs, "number of pairs")->required();
    col_cmd->add_option("--x", col_x, "singlet fraction")->required();
    col_cmd->add_option("--rows", col_rows, "retained rows")
        ->check(CLI::IsMember({"xor", "optimize"}));
    col_cmd->add_option("--mode", col_mode, "Bob's rows")
        ->check(CLI::IsMember({"mirrored", "independent"}));
    col_cmd->add_option("--restarts", col_restarts, "optimizer restarts");
    col_cmd->add_option("--seed", col_seed, "optimizer seed");
    col_cmd->add_option("--threads", col_threads, "optimizer worker threads");

    std::size_t opt_pairs = 2;
    double opt_x = 0.5;
    std::string opt_mode = "mirrored";
    int opt_restarts = 64;
    std::uint64_t opt_seed = 0;
    int opt_threads = 1;
    CLI::App* opt_cmd = app.add_subcommand("optimize", "search the retained rows");
    opt_cmd->add_option("--pairs", opt_pairs, "number of pairs (5 is slow with many restarts)")
        ->required();
    opt_cmd->add_option("--x", opt_x, "singlet fraction")->required();
    opt_cmd->add_option("--mode", opt_mode, "Bob's rows")
        ->check(CLI::IsMember({"mirrored", "independent"}));
    opt_cmd->add_option("--restarts", opt_restarts, "random restarts");
    opt_cmd->add_option("--seed", opt_seed, "seed");
    opt_cmd->add_option("--threads", opt_threads, "worker threads");

    std::size_t scan_pairs = 2;
    double scan_lo = 0.0, scan_hi = 1.0, scan_step = 0.01;
    std::string scan_mode = "mirrored";
    std::string scan_format = "csv";
    int scan_restarts = 16;
    std::uint64_t scan_seed = 0;
    int scan_threads = 1;
    CLI::App* scan_cmd = app.add_subcommand("scan", "best value over a singlet-fraction grid");
    scan_cmd->add_option("--pairs", scan_pairs, "number of pairs")->required();
    scan_cmd->add_option("--x-min", scan_lo, "grid start");
    scan_cmd->add_option("--x-max", scan_hi, "grid end");
    scan_cmd->add_option("--grid", scan_step, "grid spacing");
    scan_cmd->add_option("--mode", scan_mode, "Bob's rows")
        ->check(CLI::IsMember({"mirrored", "independent"}));
    scan_cmd->add_option("--restarts", scan_restarts, "random restarts per point");
    scan_cmd->add_option("--seed", scan_seed, "seed");
    scan_cmd->add_option("--threads", scan_threads, "worker threads");
    scan_cmd->add_option("--format", scan_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    StateSpecOptions emit_spec;
    CLI::App* emit_cmd = app.add_subcommand("emit-state", "write the state file format");
    add_state_options(emit_cmd, emit_spec);

    std::string st_only;
    std::uint64_t st_seed = 20260808;
    int st_threads = 1;
    CLI::App* st_cmd = app.add_subcommand("selftest", "run the acceptance checks");
    st_cmd->add_option("--only", st_only, "comma-separated criterion ids");
    st_cmd->add_option("--seed", st_seed, "seed");
    st_cmd->add_option("--threads", st_threads, "worker threads");

    std::vector<std::string> argv = args;
    argv.insert(argv.begin(), "qsep");
    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const std::string& a : argv) cargv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());

        if (app.got_subcommand(ppt_cmd)) {
            const BipartiteDensity rho = build_state(ppt_spec);
            const PptVerdict verdict = ppt_check(rho, ppt_tol);
            json report = report_skeleton("ppt");
            report["inputs"] = inputs_json(ppt_spec);
            report["results"]["min_eigenvalue"] = verdict.min_eigenvalue;
            report["results"]["is_ppt"] = verdict.is_ppt;
            report["results"]["spectrum"] = verdict.spectrum.values;
            report["results"]["residual"] = verdict.spectrum.residual;
            report["tolerances"]["ppt_tol"] = verdict.tol;
            emit(out, report);
            return 0;
        }

        if (app.got_subcommand(chsh_cmd)) {
            const BipartiteDensity rho = build_state(chsh_spec);
            const CorrelationMatrix t = t_matrix(rho);
            json report = report_skeleton("chsh");
            report["inputs"] = inputs_json(chsh_spec);
            report["results"]["c_max"] = chsh_max(t);
            report["results"]["violated"] = chsh_max(t) > 2.0;
            report["results"]["t_matrix"] = {t.t[0], t.t[1], t.t[2]};
            emit(out, report);
            return 0;
        }

        if (app.got_subcommand(th_cmd)) {
            const cplx a(th_a_re, th_a_im), b(th_b_re, th_b_im);
            json report = report_skeleton("thresholds");
            report["inputs"]["a"] = {th_a_re, th_a_im};
            report["inputs"]["b"] = {th_b_re, th_b_im};
            auto entry = [](double value, const char* note) {
                return json{{"value", value}, {"note", note}};
            };
            report["results"]["werner_ppt_bound"] =
                entry(1.0 / 3.0, "closed form; the partial transpose turns indefinite above it");
            report["results"]["werner_bell_bound"] =
                entry(1.0 / std::sqrt(2.0), "closed form; chsh_max crosses 2 there");
            report["results"]["alpha_entropic_reference"] = entry(
                1.0 / std::sqrt(3.0), "quoted literature value, reported only, not computed here");
            report["results"]["gisin_ppt_threshold"] =
                entry(gisin_ppt_threshold(a, b), "closed form 1/(1+2|ab|) for the given a, b");
            report["results"]["gisin_filter_threshold"] =
                entry(gisin_filter_threshold(a, b),
                      "closed form 1/(1+2|ab|(sqrt(2)-1)), quoted filtered-Bell boundary");
            emit(out, report);
            return 0;
        }

        if (app.got_subcommand(col_cmd)) {
            json report = report_skeleton("collective");
            report["inputs"] = {{"pairs", col_pairs}, {"x", col_x},   {"rows", col_rows},
                                {"mode", col_mode},   {"restarts", col_restarts}};
            report["seed"] = col_seed;
            const BipartiteDensity rho = werner(col_x);
            LocalRows u = xor_rows(col_pairs);
            LocalRows v = mirror_rows(u);
            if (col_rows == "optimize") {
                OptimizerConfig cfg;
                cfg.restarts = col_restarts;
                cfg.seed = col_seed;
                cfg.mode = parse_mode(col_mode);
                cfg.threads = col_threads;
                const OptimizerReport opt = optimize(col_x, col_pairs, cfg);
                u = opt.best_rows;
                v = opt.best_rows_v ? *opt.best_rows_v : mirror_rows(u);
                report["results"]["xor_value"] = opt.xor_value;
            }
            const PostselectionOutcome outcome = postselect(rho, col_pairs, u, v);
            const double c_max = chsh_max(outcome.rho_new);
            report["results"]["c_max"] = c_max;
            report["results"]["success_probability"] = outcome.success_probability;
            report["results"]["violated"] = c_max > 2.0;
            emit(out, report);
            return 0;
        }

        if (app.got_subcommand(opt_cmd)) {
            OptimizerConfig cfg;
            cfg.restarts = opt_restarts;
            cfg.seed = opt_seed;
            cfg.mode = parse_mode(opt_mode);
            cfg.threads = opt_threads;
            const OptimizerReport opt = optimize(opt_x, opt_pairs, cfg);
            json report = report_skeleton("optimize");
            report["inputs"] = {{"pairs", opt_pairs}, {"x", opt_x},   {"mode", opt_mode},
                                {"restarts", opt_restarts}};
            report["seed"] = opt_seed;
            report["tolerances"] = {{"step_tol", cfg.step_tol},
                                    {"objective_tol", cfg.objective_tol},
                                    {"gradient_step", cfg.gradient_step}};
            report["results"]["best_value"] = opt.best_value;
            report["results"]["xor_value"] = opt.xor_value;
            report["results"]["used_xor_start"] = opt.used_xor_start;
            report["results"]["best_rows"] = rows_json(opt.best_rows);
            if (opt.best_rows_v) {
                report["results"]["best_rows_v"] = rows_json(*opt.best_rows_v);
            }
            json per = json::array();
            for (const RestartResult& r : opt.per_restart) {
                per.push_back({{"start_id", r.start_id},
                               {"value", r.value},
                               {"iterations", r.iterations}});
            }
            report["results"]["per_restart"] = per;
            emit(out, report);
            return 0;
        }

        if (app.got_subcommand(scan_cmd)) {
            OptimizerConfig cfg;
            cfg.restarts = scan_restarts;
            cfg.seed = scan_seed;
            cfg.mode = parse_mode(scan_mode);
            cfg.threads = scan_threads;
            const std::vector<ScanPoint> curve =
                scan_curve(scan_pairs, build_grid(scan_lo, scan_hi, scan_step), cfg);
            if (scan_format == "csv") {
                out << "x,c_max,xor_value,success_probability,pairs,mode\n";
                for (const ScanPoint& p : curve) {
                    out << format_double(p.x) << ',' << format_double(p.best_value) << ','
                        << format_double(p.xor_value) << ','
                        << format_double(p.success_probability) << ',' << scan_pairs << ','
                        << scan_mode << "\n";
                }
            } else {
                json report = report_skeleton("scan");
                report["inputs"] = {{"pairs", scan_pairs},     {"x_min", scan_lo},
                                    {"x_max", scan_hi},        {"grid", scan_step},
                                    {"mode", scan_mode},       {"restarts", scan_restarts}};
                report["seed"] = scan_seed;
                json points = json::array();
                for (const ScanPoint& p : curve) {
                    points.push_back({{"x", p.x},
                                      {"c_max", p.best_value},
                                      {"xor_value", p.xor_value},
                                      {"success_probability", p.success_probability}});
                }
                report["results"]["points"] = points;
                const std::optional<double> transition = detect_transition(curve);
                report["results"]["transition_x"] =
                    transition ? json(*transition) : json(nullptr);
                emit(out, report);
            }
            return 0;
        }

        if (app.got_subcommand(emit_cmd)) {
            write_state(out, build_state(emit_spec));
            return 0;
        }

        if (app.got_subcommand(st_cmd)) {
            SelftestOptions options;
            options.seed = st_seed;
            options.threads = st_threads;
            if (!st_only.empty()) {
                std::stringstream ss(st_only);
                std::string token;
                while (std::getline(ss, token, ',')) {
                    options.only.insert(std::stoi(token));
                }
            }
            const int failures = run_selftest(options, out);
            return failures == 0 ? 0 : 2;
        }

        err << "error: no subcommand\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace qsep
