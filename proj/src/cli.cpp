/*
   Copyright 2026 The gpreg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "gpreg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "gpreg/errors.hpp"
#include "gpreg/report.hpp"
#include "gpreg/verify.hpp"

namespace gpreg {

namespace {

struct Common {
    std::string kernel;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    int workers = -1;
};

void add_common(CLI::App* sub, Common& c, bool kernel_required) {
    auto* k = sub->add_option("--kernel", c.kernel, "kernel specification, e.g. sqexp:ell=1");
    if (kernel_required) k->required();
    sub->add_option("--out", c.out, "output file (default: standard output)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--workers", c.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

int resolve_workers(int flag) { return flag >= 0 ? flag : workers_from_environment(); }

RunConfig make_config(const std::string& command, const Common& c, const std::string& kernel) {
    RunConfig cfg;
    cfg.command = command;
    cfg.kernel = kernel;
    cfg.output_format = c.format;
    cfg.seed = c.seed;
    cfg.workers = resolve_workers(c.workers);
    return cfg;
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << csv_field(prefix) << ',' << csv_field(j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

std::string flat_csv(const Json& j) {
    std::ostringstream os;
    os << "field,value\n";
    flatten(j, "", os);
    return os.str();
}

std::string fit_path(const Common& c, const std::string& fit_out) {
    if (!fit_out.empty()) return fit_out;
    if (c.out.empty() || c.out == "-") return "";
    return c.out + ".fit.json";
}

// ---- conditions ----
struct ConditionsArgs {
    Common c;
    std::optional<double> delta;
};

int cmd_conditions(const ConditionsArgs& a, std::ostream& out) {
    const Kernel k = Kernel::parse(a.c.kernel);
    RunConfig cfg = make_config("conditions", a.c, k.name());
    if (a.delta) cfg.params["delta"] = *a.delta;
    const auto rep = check_conditions(k, a.delta);
    const Json j = condition_report_json(rep, cfg);
    emit(a.c.out, out, a.c.format == "csv" ? flat_csv(j) : dump(j));
    return kExitOk;
}

// ---- asymptotics ----
struct AsymptoticsArgs {
    Common c;
    double c_coef = 1.0;
    double c_prime = 1.0;
    int n_min = 1;
    int n_max = 400;
    int fit_min = 0;
    int fit_max = 0;
    std::string fit_out;
};

int cmd_asymptotics(const AsymptoticsArgs& a, std::ostream& out) {
    if (a.n_min < 1 || a.n_max <= a.n_min) throw DomainError("asymptotics: need 1 <= n-min < n-max");
    RunConfig cfg = make_config("asymptotics", a.c, "");
    cfg.params["c"] = a.c_coef;
    cfg.params["c-prime"] = a.c_prime;
    cfg.params["n-min"] = a.n_min;
    cfg.params["n-max"] = a.n_max;
    if (a.fit_min) cfg.params["fit-min"] = a.fit_min;
    if (a.fit_max) cfg.params["fit-max"] = a.fit_max;
    auto s = iter_integral_series(a.c_coef, a.c_prime, a.n_min, a.n_max);
    if (a.fit_min || a.fit_max) {
        const std::pair<int, int> w{a.fit_min ? a.fit_min : a.n_min, a.fit_max ? a.fit_max : a.n_max};
        auto refit = fit_decay_exponent(s.entries, w);
        refit.entries = s.entries;
        s = refit;
    }
    Json j = report_header("asymptotics-report/1", cfg);
    j["c"] = a.c_coef;
    j["c_prime"] = a.c_prime;
    j["fit"] = to_json(s, a.c.format == "json");
    if (a.c_coef == 1.0 && a.c_prime == 1.0) {
        Json cf = Json::array();
        for (int n = a.n_min; n <= std::min(a.n_max, 50); ++n) cf.push_back({n, iter_integral_closed_form(n)});
        j["closed_form"] = cf;
    }
    if (a.c.format == "csv") {
        std::ostringstream os;
        write_decay_csv(os, s);
        emit(a.c.out, out, os.str());
        const auto fp = fit_path(a.c, a.fit_out);
        if (!fp.empty()) emit(fp, out, dump(j));
    } else {
        emit(a.c.out, out, dump(j));
    }
    return kExitOk;
}

// ---- chaos ----
struct ChaosArgs {
    Common c;
    std::string functional;
    int n_min = 1;
    int n_max = 0;
    std::vector<double> alpha{-1.0, 0.0, 1.0};
    std::string fit_out;
};

int cmd_chaos(const ChaosArgs& a, std::ostream& out) {
    const Kernel k = Kernel::parse(a.c.kernel);
    const Functional f = parse_functional(a.functional);
    const bool two = f.two_dimensional();
    const int n_max = a.n_max > 0 ? a.n_max : (two ? 12 : 40);
    if (a.n_min < 0 || a.n_min >= n_max) throw DomainError("chaos: need 0 <= n-min < n-max");
    RunConfig cfg = make_config("chaos", a.c, k.name());
    cfg.params["functional"] = to_string(f);
    cfg.params["n-min"] = a.n_min;
    cfg.params["n-max"] = n_max;
    cfg.params["alpha"] = a.alpha;

    const auto sp = chaos_spectrum(f, k, n_max);
    DecaySeries weights;
    for (int n = 0; n <= n_max; ++n) {
        if (two) {
            if (n > 12) break;
            weights.entries.emplace_back(n, n == 0 ? 1.0 : integrated_weight_2d(k, (n + 1) / 2, n / 2));
        } else {
            weights.entries.emplace_back(n, integrated_weight_1d(k, f.axis, n));
        }
    }
    const double c_hat = regularization_constant(weights);

    Json j = report_header("chaos-report/1", cfg);
    j["kernel"] = k.name();
    j["functional"] = to_string(f);
    j["spectrum"] = to_json(sp);
    j["c_hat"] = c_hat;
    Json sob = Json::array();
    for (double alpha : a.alpha) {
        const auto p = sobolev_norm(sp.point_norms, alpha);
        const auto q = sobolev_norm(sp.integrated_norms, alpha + 0.5);
        sob.push_back({{"alpha", alpha},
                       {"point", to_json(p)},
                       {"integrated", to_json(q)},
                       {"bound", c_hat * p.value},
                       {"holds", q.value <= c_hat * p.value * (1.0 + 1e-12)}});
    }
    j["sobolev"] = sob;
    const Ladder ladder = two ? Ladder::Hermite2DDiagonal : Ladder::Hermite1D;
    const int hi = two ? std::min(n_max, 12) : n_max;
    try {
        j["ladder"] = to_json(regularization_exponent(k, ladder, a.n_min, hi));
    } catch (const ConditionFailure& e) {
        j["ladder"] = nullptr;
        j["ladder_skipped"] = e.what();
    } catch (const NotDifferentiable& e) {
        j["ladder"] = nullptr;
        j["ladder_skipped"] = e.what();
    }
    const auto d = r_derivatives_at_zero(k);
    j["laplace_constant"] = d.r2_available ? Json(2.0 * std::sqrt(std::numbers::pi / (2.0 * std::abs(d.r2)))) : Json(nullptr);

    if (a.c.format == "csv") {
        std::ostringstream os;
        write_spectrum_csv(os, sp);
        emit(a.c.out, out, os.str());
        const auto fp = fit_path(a.c, a.fit_out);
        if (!fp.empty()) emit(fp, out, dump(j));
    } else {
        emit(a.c.out, out, dump(j));
    }
    return kExitOk;
}

// ---- simulate ----
struct SimulateArgs {
    Common c;
    int paths = 10000;
    int grid = 2048;
    double level = 0.0;
    int refine = 1;
    std::vector<std::string> functionals;
    std::optional<double> h;
    std::string dump_paths;
    int dump_count = 16;
    std::string fit_out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const Kernel k = Kernel::parse(a.c.kernel);
    std::vector<Functional> fs;
    for (const auto& s : a.functionals) fs.push_back(parse_functional(s));
    if (a.paths < 1 || a.grid < 2 || a.refine < 1) throw DomainError("simulate: need paths >= 1, grid >= 2, refine >= 1");
    RunConfig cfg = make_config("simulate", a.c, k.name());
    cfg.params["paths"] = a.paths;
    cfg.params["grid"] = a.grid;
    cfg.params["level"] = a.level;
    cfg.params["refine"] = a.refine;
    if (!fs.empty()) {
        Json names = Json::array();
        for (const auto& f : fs) names.push_back(to_string(f));
        cfg.params["functional"] = names;
    }
    if (a.h) cfg.params["ms-step"] = *a.h;
    if (!a.dump_paths.empty()) {
        cfg.params["dump-paths"] = a.dump_paths;
        cfg.params["dump-count"] = a.dump_count;
    }
    MonteCarloOptions opt;
    opt.workers = cfg.workers;

    Json j = report_header("simulate-report/1", cfg);
    j["kernel"] = k.name();
    const auto cross = crossing_refinement(k, a.level, a.paths, a.grid, a.refine, a.c.seed, opt);
    Json cj = Json::array();
    for (const auto& s : cross) cj.push_back(to_json(s));
    j["crossings"] = cj;
    if (!fs.empty()) {
        Json mj = Json::array();
        for (const auto& m : mc_integrated_functionals(fs, k, a.paths, a.grid, a.c.seed, opt)) mj.push_back(to_json(m));
        j["moments"] = mj;
    }
    if (a.h) j["ms_residual"] = to_json(ms_derivative_residual(k, *a.h, a.paths, a.c.seed, opt));
    if (!a.dump_paths.empty()) {
        opt.with_derivative = true;
        const auto paths = sample_paths(k, a.grid, std::min(a.dump_count, a.paths), a.c.seed, opt);
        std::ofstream f(a.dump_paths, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + a.dump_paths + "' for writing");
        write_paths_binary(f, paths);
    }

    if (a.c.format == "csv") {
        std::ostringstream os;
        os << "grid_points,mean,std_error,variance,second_moment,second_moment_std_error,rice_mean\n";
        char buf[256];
        for (const auto& s : cross) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.grid_points, s.mean, s.std_error,
                          s.variance, s.second_moment, s.second_moment_std_error, s.rice_mean);
            os << buf;
        }
        emit(a.c.out, out, os.str());
        const auto fp = fit_path(a.c, a.fit_out);
        if (!fp.empty()) emit(fp, out, dump(j));
    } else {
        emit(a.c.out, out, dump(j));
    }
    return kExitOk;
}

// ---- verify-all ----
struct VerifyArgs {
    Common c;
    int paths = 100000;
    int grid = 2048;
    std::vector<int> criteria;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    VerifyOptions opt;
    std::string kernel;
    if (!a.c.kernel.empty()) {
        kernel = Kernel::parse(a.c.kernel).name();
        opt.kernel = kernel;
    }
    for (int id : a.criteria)
        if (id < 1 || id > kCriteria) throw DomainError("verify-all: criterion must be in [1, " + std::to_string(kCriteria) + "]");
    if (a.paths < 2 || a.grid < 2) throw DomainError("verify-all: need paths >= 2, grid >= 2");
    RunConfig cfg = make_config("verify-all", a.c, kernel);
    cfg.params["paths"] = a.paths;
    cfg.params["grid"] = a.grid;
    if (!a.criteria.empty()) cfg.params["criterion"] = a.criteria;
    opt.seed = a.c.seed;
    opt.workers = cfg.workers;
    opt.paths = a.paths;
    opt.grid = a.grid;

    std::vector<CriterionResult> results;
    std::vector<int> ids = a.criteria;
    if (ids.empty())
        for (int id = 1; id <= kCriteria; ++id) ids.push_back(id);
    for (int id : ids) {
        results.push_back(run_criterion(id, opt));
        const auto& r = results.back();
        char line[256];
        std::snprintf(line, sizeof line, "criterion %2d %-4s %s (%.1f s)%s%s\n", id,
                      r.skipped ? "SKIP" : (r.passed() ? "PASS" : "FAIL"), r.title.c_str(), r.seconds,
                      r.skipped ? ": " : "", r.skipped ? r.skip_reason.c_str() : "");
        err << line;
    }
    const Json j = verify_report_json(results, cfg);
    if (a.c.format == "csv") {
        std::ostringstream os;
        os << "id,title,status,checks_passed,seconds,budget_seconds\n";
        for (const auto& r : results) {
            os << r.id << ',' << csv_field(r.title) << ',' << (r.skipped ? "skipped" : (r.passed() ? "passed" : "failed"))
               << ',' << (r.checks_passed() ? 1 : 0) << ',' << r.seconds << ',' << r.budget_seconds << '\n';
        }
        emit(a.c.out, out, os.str());
    } else {
        emit(a.c.out, out, dump(j));
    }
    return kExitOk;
}

std::string format_number(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
}

// command line equivalent to an embedded run config
std::vector<std::string> replay_args(const RunConfig& cfg, const std::string& out_path) {
    std::vector<std::string> args{cfg.command};
    if (!cfg.kernel.empty()) args.insert(args.end(), {"--kernel", cfg.kernel});
    args.insert(args.end(), {"--seed", std::to_string(cfg.seed), "--workers", std::to_string(cfg.workers), "--format",
                             cfg.output_format});
    for (auto it = cfg.params.begin(); it != cfg.params.end(); ++it) {
        const std::string flag = "--" + it.key();
        const Json& v = it.value();
        auto one = [&](const Json& x) {
            args.push_back(flag);
            args.push_back(x.is_string() ? x.get<std::string>() : format_number(x));
        };
        if (v.is_array()) {
            for (const auto& x : v) one(x);
        } else {
            one(v);
        }
    }
    if (!out_path.empty()) args.insert(args.end(), {"--out", out_path});
    return args;
}

}  // namespace

int workers_from_environment() {
    const char* s = std::getenv("GPREG_WORKERS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 0 || v > 4096) throw ParseError(std::string("GPREG_WORKERS: expected a count, got '") + s + "'");
    return int(v);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regularity of Gaussian functionals: conditions, chaos spectra and Monte Carlo checks", "gpreg"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    ConditionsArgs ca;
    auto* sc = app.add_subcommand("conditions", "decide (A1), (A2) and the Geman condition");
    add_common(sc, ca.c, true);
    sc->add_option("--delta", ca.delta, "Geman integration limit (default min(1, ell))")->check(CLI::PositiveNumber);

    AsymptoticsArgs aa;
    auto* sa = app.add_subcommand("asymptotics", "iterated integral decay series and fit");
    add_common(sa, aa.c, false);
    sa->add_option("--c", aa.c_coef, "c")->check(CLI::PositiveNumber);
    sa->add_option("--c-prime", aa.c_prime, "c'")->check(CLI::PositiveNumber);
    sa->add_option("--n-min", aa.n_min);
    sa->add_option("--n-max", aa.n_max);
    sa->add_option("--fit-min", aa.fit_min);
    sa->add_option("--fit-max", aa.fit_max);
    sa->add_option("--fit-out", aa.fit_out, "fit JSON next to a CSV series");

    ChaosArgs xa;
    auto* sx = app.add_subcommand("chaos", "chaos spectrum, Sobolev norms and regularization fit");
    add_common(sx, xa.c, true);
    sx->add_option("--functional", xa.functional, "H:m, H2:a,b, sign, abs, ind:level, optional @x or @xdot")->required();
    sx->add_option("--n-min", xa.n_min);
    sx->add_option("--n-max", xa.n_max, "highest chaos (default 40, 12 for H2)");
    sx->add_option("--alpha", xa.alpha, "Sobolev indices")->expected(1, -1);
    sx->add_option("--fit-out", xa.fit_out, "fit JSON next to a CSV spectrum");

    SimulateArgs ma;
    auto* sm = app.add_subcommand("simulate", "Monte Carlo crossings, functional moments and mean-square residual");
    add_common(sm, ma.c, true);
    sm->add_option("--paths", ma.paths);
    sm->add_option("--grid", ma.grid, "grid points on [0, 1]");
    sm->add_option("--level", ma.level);
    sm->add_option("--refine", ma.refine, "grid doublings for the crossing statistics");
    sm->add_option("--functional", ma.functionals)->expected(1, -1);
    sm->add_option("--ms-step", ma.h, "mean-square residual step")->check(CLI::PositiveNumber);
    sm->add_option("--dump-paths", ma.dump_paths, "binary path dump");
    sm->add_option("--dump-count", ma.dump_count)->check(CLI::PositiveNumber);
    sm->add_option("--fit-out", ma.fit_out, "full JSON report next to a CSV crossing table");

    VerifyArgs va;
    auto* sv = app.add_subcommand("verify-all", "acceptance suite");
    add_common(sv, va.c, false);
    sv->add_option("--paths", va.paths);
    sv->add_option("--grid", va.grid);
    sv->add_option("--criterion", va.criteria, "run only these criteria")->expected(1, -1);

    std::string replay_file, replay_out;
    auto* sr = app.add_subcommand("replay", "re-run the configuration embedded in a report");
    sr->add_option("report", replay_file)->required()->check(CLI::ExistingFile);
    sr->add_option("--out", replay_out);

    std::vector<std::string> argv_store{"gpreg"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << library_version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gpreg: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*sc) return cmd_conditions(ca, out);
        if (*sa) return cmd_asymptotics(aa, out);
        if (*sx) return cmd_chaos(xa, out);
        if (*sm) return cmd_simulate(ma, out);
        if (*sv) return cmd_verify(va, out, err);
        if (*sr) {
            std::ifstream f(replay_file);
            Json j;
            try {
                j = Json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(std::string("replay: ") + e.what());
            }
            if (!j.contains("config")) throw ParseError("replay: report has no embedded config");
            return run_cli(replay_args(run_config_from_json(j.at("config")), replay_out), out, err);
        }
    } catch (const ParseError& e) {
        err << "gpreg: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "gpreg: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "gpreg: evaluation failed: " << e.what() << "\n";
        return kExitEvaluation;
    }
    return kExitUsage;
}

}  // namespace gpreg
