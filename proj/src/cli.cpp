#include "fixtime/cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fixtime/gain_aut.hpp"
#include "fixtime/gain_nonaut.hpp"
#include "fixtime/specfun.hpp"
#include "fixtime/verify.hpp"

namespace fixtime {

namespace {

int log_level() {
    static const int lvl = [] {
        const char* e = std::getenv("FIXTIME_LOG");
        if (!e) return 0;
        const std::string s(e);
        if (s == "debug") return 2;
        if (s == "info") return 1;
        return 0;
    }();
    return lvl;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw ValidationError("not a number: '" + tok + "'");
        }
        if (pos != tok.size()) throw ValidationError("not a number: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("empty number list");
    return out;
}

Eigen::VectorXd parse_x0(const std::string& s, int dim) {
    const std::vector<double> vals = parse_double_list(s);
    if (vals.size() == static_cast<std::size_t>(dim)) {
        return Eigen::Map<const Eigen::VectorXd>(vals.data(), dim);
    }
    if (vals.size() == 1) return vals[0] * Eigen::VectorXd::Unit(dim, 0);
    throw ValidationError("--x0 has " + std::to_string(vals.size()) +
                          " entries but the system dimension is " + std::to_string(dim));
}

AutFamily aut_family_from(const std::string& s) {
    if (s == "PolyBeta") return AutFamily::PolyBeta;
    if (s == "ExpSqrt") return AutFamily::ExpSqrt;
    if (s == "Exp") return AutFamily::Exp;
    if (s == "Sinusoid") return AutFamily::Sinusoid;
    throw ValidationError("unknown autonomous gain family: " + s);
}

NonAutFamily nonaut_family_from(const std::string& s) {
    if (s == "TBG") return NonAutFamily::TBG;
    if (s == "Secant") return NonAutFamily::Secant;
    if (s == "ErfInv") return NonAutFamily::ErfInv;
    if (s == "BetaInv") return NonAutFamily::BetaInv;
    throw ValidationError("unknown non-autonomous gain family: " + s);
}

double get_num(const ordered_json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw ValidationError(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

}  // namespace

SystemSpec spec_from_json(const ordered_json& j, double gain_cap) {
    if (!j.is_object()) throw ValidationError("system spec must be a JSON object");
    SystemSpec spec;
    spec.dim = j.contains("dim") ? j.at("dim").get<int>() : 1;
    spec.T_c = get_num(j, "T_c", 1.0);
    spec.t0 = get_num(j, "t0", 0.0);

    if (j.contains("base")) {
        const auto& b = j.at("base");
        const std::string kind = b.at("kind").get<std::string>();
        if (kind == "Identity") {
            spec.base = BaseKind::Identity;
        } else if (kind == "IdentityPlusRoot") {
            spec.base = BaseKind::IdentityPlusRoot;
            spec.root_a = get_num(b, "a", 0.5);
        } else if (kind == "LinearMatrix") {
            spec.base = BaseKind::LinearMatrix;
            const auto& rows = b.at("A");
            if (!rows.is_array() || rows.empty()) {
                throw ValidationError("base.A must be a non-empty array of rows");
            }
            const int n = static_cast<int>(rows.size());
            spec.A.resize(n, n);
            for (int r = 0; r < n; ++r) {
                const auto& row = rows.at(r);
                if (!row.is_array() || static_cast<int>(row.size()) != n) {
                    throw ValidationError("base.A must be square");
                }
                for (int c = 0; c < n; ++c) spec.A(r, c) = row.at(c).get<double>();
            }
        } else {
            throw ValidationError("unknown base kind: " + kind);
        }
    }

    const auto& g = j.at("gain");
    const std::string type = g.at("type").get<std::string>();
    const std::string shape_name =
        g.contains("shape") ? g.at("shape").get<std::string>() : "id";
    const ordered_json params =
        g.contains("params") ? g.at("params") : ordered_json::object();
    if (type == "autonomous") {
        AutParams ap;
        ap.alpha = get_num(params, "alpha", ap.alpha);
        ap.beta = get_num(params, "beta", ap.beta);
        ap.p = get_num(params, "p", ap.p);
        ap.q = get_num(params, "q", ap.q);
        ap.k = get_num(params, "k", ap.k);
        const ShapeFn h = make_shape(shape_name, spec.T_c);
        spec.aut = make_aut_gain(aut_family_from(g.at("family").get<std::string>()), ap, h);
    } else if (type == "nonautonomous") {
        NonAutParams np;
        np.alpha = get_num(params, "alpha", np.alpha);
        np.beta = get_num(params, "beta", np.beta);
        np.p = get_num(params, "p", np.p);
        np.q = get_num(params, "q", np.q);
        np.k = get_num(params, "k", np.k);
        const ShapeFn eta = make_shape(shape_name, spec.T_c);
        spec.nonaut = make_nonaut_gain(nonaut_family_from(g.at("family").get<std::string>()),
                                       np, eta, spec.T_c, gain_cap);
    } else {
        throw ValidationError("gain.type must be autonomous or nonautonomous");
    }

    finalize_system(spec);
    return spec;
}

ordered_json spec_to_json(const SystemSpec& spec) {
    ordered_json j;
    j["dim"] = spec.dim;
    j["T_c"] = spec.T_c;
    j["t0"] = spec.t0;
    ordered_json b;
    b["kind"] = base_kind_name(spec.base);
    if (spec.base == BaseKind::IdentityPlusRoot) b["a"] = spec.root_a;
    if (spec.base == BaseKind::LinearMatrix) {
        ordered_json rows = ordered_json::array();
        for (int r = 0; r < spec.A.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < spec.A.cols(); ++c) row.push_back(spec.A(r, c));
            rows.push_back(row);
        }
        b["A"] = rows;
    }
    j["base"] = b;

    ordered_json g;
    if (spec.autonomous()) {
        g["type"] = "autonomous";
        g["family"] = aut_family_name(spec.aut->family);
        const AutParams& ap = spec.aut->params;
        ordered_json params;
        if (spec.aut->family == AutFamily::PolyBeta) {
            params["alpha"] = ap.alpha;
            params["beta"] = ap.beta;
            params["p"] = ap.p;
            params["q"] = ap.q;
            params["k"] = ap.k;
        } else if (spec.aut->family == AutFamily::Sinusoid) {
            params["alpha"] = ap.alpha;
        }
        if (!params.empty()) g["params"] = params;
        g["shape"] = spec.aut->shape.name;
    } else {
        g["type"] = "nonautonomous";
        g["family"] = nonaut_family_name(spec.nonaut->family);
        const NonAutParams& np = spec.nonaut->params;
        ordered_json params;
        if (spec.nonaut->family == NonAutFamily::TBG) {
            params["alpha"] = np.alpha;
        } else if (spec.nonaut->family == NonAutFamily::BetaInv) {
            params["alpha"] = np.alpha;
            params["beta"] = np.beta;
            params["p"] = np.p;
            params["q"] = np.q;
            params["k"] = np.k;
        }
        if (!params.empty()) g["params"] = params;
        g["shape"] = spec.nonaut->eta.name;
    }
    j["gain"] = g;
    return j;
}

SystemSpec load_spec(const std::string& path, double gain_cap) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open spec file: " + path);
    ordered_json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad JSON in " + path + ": " + e.what());
    }
    return spec_from_json(j, gain_cap);
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ValidationError("cannot open for writing: " + tmp);
        os << content;
        os.flush();
        if (!os) throw ValidationError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ValidationError("cannot move " + tmp + " into place: " + path);
    }
}

std::string trajectory_csv(const SystemSpec& spec, const Trajectory& traj) {
    std::string out = "t";
    for (int i = 1; i <= spec.dim; ++i) out += ",x" + std::to_string(i);
    out += ",gain,V\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out += fmt17(traj.times[k]);
        for (int i = 0; i < spec.dim; ++i) out += "," + fmt17(traj.states[k][i]);
        out += "," + fmt17(traj.gains[k]);
        out += "," + fmt17(traj.lyap[k]);
        out += "\n";
    }
    return out;
}

namespace {

ordered_json settling_report_json(const SettlingReport& r) {
    ordered_json j;
    j["predicted"] = r.predicted;
    j["observed"] = r.observed;
    j["eps_settle"] = r.eps_settle;
    j["abs_gap"] = r.abs_gap;
    j["verdict"] = verdict_name(r.verdict);
    j["steps"] = r.steps;
    return j;
}

ordered_json sweep_report_json(const SweepReport& r) {
    ordered_json j;
    j["x0_norms"] = r.x0_norms;
    j["predicted"] = r.predicted;
    j["observed"] = r.observed;
    j["sup_observed"] = r.sup_observed;
    j["monotone_ok"] = r.monotone_ok;
    j["sup_gap"] = r.sup_gap;
    return j;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_atomic(out_path, content);
        log_info("wrote " + out_path);
    }
}

const char* kCatalog =
    "Gain catalog\n"
    "\n"
    "Autonomous families  (gain 1/(Phi(V) H(V)) from a normalized density Phi)\n"
    "  PolyBeta   Phi(z) = (1/gamma) (alpha*h^p + beta*h^q)^{-k} h'(z)\n"
    "             conditions: alpha>0, beta>0, p>0, q>0, k>0, kp<1, kq>1; h(z) is K_inf^inf\n"
    "             defaults:   alpha=1 beta=2 p=0.5 q=2 k=1 shape=log1p    [fig1_left.json]\n"
    "  ExpSqrt    Phi(z) = (2/pi) (exp(2h) - 1)^{-1/2} h'(z)\n"
    "             conditions: h(z) is K_inf^inf\n"
    "             defaults:   shape=id                                    [fig1_mid.json]\n"
    "  Exp        Phi(z) = exp(-h) h'(z)\n"
    "             conditions: h(z) is K_inf^inf with h'(0+) = inf\n"
    "             defaults:   shape=sqrt\n"
    "  Sinusoid   Phi(z) = (1/rho) (sin h + alpha) (1+h)^{-2} h'(z)\n"
    "             conditions: alpha>1; h(z) is K_inf^inf with h'(0+) = inf\n"
    "             defaults:   alpha=2 shape=pow:0.5                       [fig1_right.json]\n"
    "\n"
    "Non-autonomous families  (time-varying gain on [t0, t0+T_c))\n"
    "  TBG        gain(t^) = T_c eta'(t^) (1 - eta(t^))^{-(alpha+1)}\n"
    "             conditions: alpha>=0 and eta(z) is K_{T_c}^1\n"
    "             defaults:   alpha=0 shape=ramp                          [fig2_tbg.json]\n"
    "  Secant     gain(t^) = (pi/2) sec^2(pi t^/(2 T_c)) eta'(tan(pi t^/(2 T_c)))\n"
    "             conditions: eta(z) is K_inf^inf\n"
    "             defaults:   shape=id                                    [fig2_sec.json]\n"
    "  ErfInv     gain(t^) = (sqrt(pi)/2) eta'(u) exp(u^2), u = erf^{-1}(t^/T_c)\n"
    "             conditions: eta(z) is K_inf^inf\n"
    "             defaults:   shape=id\n"
    "  BetaInv    gain(t^) = gamma (alpha*P^p + beta*P^q)^k eta'(P), P from the\n"
    "             inverse incomplete Beta of t^/T_c\n"
    "             conditions: alpha>0, beta>0, p>0, q>0, k>0, kp<1, kq>1; eta(z) is K_inf^inf\n"
    "             defaults:   alpha=1 beta=2 p=0.5 q=2 k=1 shape=id       [fig2_beta.json]\n"
    "\n"
    "Bases: Identity (g(x)=x), IdentityPlusRoot (g(x)=x+|x|^{a-1}x, 0<a<1),\n"
    "       LinearMatrix (g(x)=Ax with -A Hurwitz; V from the Lyapunov solve).\n"
    "All shipped examples use T_c=1, t0=0, dim=1, Identity base.\n";

double specfun_dispatch(const std::string& fn, const std::vector<double>& a) {
    auto need = [&](std::size_t n) {
        if (a.size() != n) {
            throw ValidationError(fn + " takes " + std::to_string(n) + " argument(s), got " +
                                  std::to_string(a.size()));
        }
    };
    if (fn == "gamma") {
        need(1);
        return specfun::gamma(a[0]);
    }
    if (fn == "log_gamma") {
        need(1);
        return specfun::log_gamma(a[0]);
    }
    if (fn == "erf") {
        need(1);
        return specfun::erf(a[0]);
    }
    if (fn == "erf_inv") {
        need(1);
        return specfun::erf_inv(a[0]);
    }
    if (fn == "inc_beta") {
        need(3);
        return specfun::inc_beta(a[0], a[1], a[2]);
    }
    if (fn == "inc_beta_inv") {
        need(3);
        return specfun::inc_beta_inv(a[0], a[1], a[2]);
    }
    if (fn == "cosint") {
        need(1);
        return specfun::cosint(a[0]);
    }
    if (fn == "sinint_shifted") {
        need(1);
        return specfun::sinint_shifted(a[0]);
    }
    throw ValidationError(
        "unknown function: " + fn +
        " (have gamma, log_gamma, erf, erf_inv, inc_beta, inc_beta_inv, cosint, "
        "sinint_shifted)");
}

struct CommonOpts {
    std::string spec_path;
    std::string out_path;
    IntegratorConfig cfg;

    void attach(CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--spec", spec_path, "system spec JSON")->required();
        if (with_out) cmd->add_option("--out", out_path, "output file");
        cmd->add_option("--rel-tol", cfg.rel_tol, "relative step tolerance");
        cmd->add_option("--abs-tol", cfg.abs_tol, "absolute step tolerance");
        cmd->add_option("--eps-settle", cfg.eps_settle, "settling ball radius");
        cmd->add_option("--gain-cap", cfg.gain_cap, "gain saturation value");
        cmd->add_option("--horizon-guard", cfg.horizon_guard,
                        "fraction of T_c kept away from the horizon");
    }
};

}  // namespace

int cli_run(int argc, const char* const* argv) {
    CLI::App app{"fixed-time stabilization toolbox: simulate, certify and sweep "
                 "systems driven by catalog gains"};
    app.require_subcommand(1);

    CommonOpts sim, cert, swp;
    std::string sim_x0 = "1", cert_x0 = "1", swp_norms;

    CLI::App* c_sim = app.add_subcommand("simulate", "integrate one trajectory, write CSV");
    sim.attach(c_sim);
    c_sim->get_option("--out")->required();
    c_sim->add_option("--x0", sim_x0, "initial state (comma separated, or a single norm)");

    CLI::App* c_cert = app.add_subcommand("certify", "compare observed and predicted settling");
    cert.attach(c_cert);
    c_cert->add_option("--x0", cert_x0, "initial state (comma separated, or a single norm)");

    CLI::App* c_swp = app.add_subcommand("sweep", "settling sweep over initial norms");
    swp.attach(c_swp);
    c_swp->add_option("--norms", swp_norms, "comma separated increasing norms")->required();

    std::string sf_fn;
    std::vector<std::string> sf_args;
    CLI::App* c_sf = app.add_subcommand("specfun-eval", "evaluate a special function");
    c_sf->add_option("fn", sf_fn, "function name")->required();
    c_sf->add_option("args", sf_args, "numeric arguments");

    // `specfun eval <fn> <args...>` spelling, same behavior.
    std::string sf2_mode, sf2_fn;
    std::vector<std::string> sf2_args;
    CLI::App* c_sf2 = app.add_subcommand("specfun", "special function helpers");
    c_sf2->add_option("mode", sf2_mode, "only 'eval'")->required();
    c_sf2->add_option("fn", sf2_fn, "function name")->required();
    c_sf2->add_option("args", sf2_args, "numeric arguments");

    CLI::App* c_cat = app.add_subcommand("catalog", "list gain families and defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (c_sim->parsed()) {
            const SystemSpec spec = load_spec(sim.spec_path, sim.cfg.gain_cap);
            const Eigen::VectorXd x0 = parse_x0(sim_x0, spec.dim);
            const Trajectory traj = integrate(spec, x0, sim.cfg);
            emit(sim.out_path, trajectory_csv(spec, traj));
            log_debug("field evaluations: " + std::to_string(traj.field_evals));
            std::cout << "stop=" << stop_reason_name(traj.reason)
                      << " t_end=" << fmt17(traj.times.back())
                      << " steps=" << traj.steps << "\n";
            return traj.reason == StopReason::Budget ? 2 : 0;
        }
        if (c_cert->parsed()) {
            const SystemSpec spec = load_spec(cert.spec_path, cert.cfg.gain_cap);
            const Eigen::VectorXd x0 = parse_x0(cert_x0, spec.dim);
            const SettlingReport rep = certify_settling(spec, x0, cert.cfg);
            emit(cert.out_path, settling_report_json(rep).dump(2) + "\n");
            if (!cert.out_path.empty()) {
                std::printf("%-10s %-22s %-22s %s\n", "verdict", "predicted", "observed",
                            "abs_gap");
                std::printf("%-10s %-22.17g %-22.17g %.3g\n", verdict_name(rep.verdict),
                            rep.predicted, rep.observed, rep.abs_gap);
            }
            return rep.verdict == Verdict::Match ? 0 : 2;
        }
        if (c_swp->parsed()) {
            const SystemSpec spec = load_spec(swp.spec_path, swp.cfg.gain_cap);
            const std::vector<double> norms = parse_double_list(swp_norms);
            const SweepReport rep = least_ubst_sweep(spec, norms, swp.cfg);
            emit(swp.out_path, sweep_report_json(rep).dump(2) + "\n");
            if (!swp.out_path.empty()) {
                std::printf("%-14s %-22s %s\n", "x0_norm", "predicted", "observed");
                for (std::size_t i = 0; i < rep.x0_norms.size(); ++i) {
                    std::printf("%-14.6g %-22.17g %.17g\n", rep.x0_norms[i],
                                rep.predicted[i], rep.observed[i]);
                }
                std::printf("sup_observed=%.17g monotone_ok=%s sup_gap=%.3g\n",
                            rep.sup_observed, rep.monotone_ok ? "true" : "false",
                            rep.sup_gap);
            }
            return 0;
        }
        if (c_sf->parsed() || c_sf2->parsed()) {
            const std::string& fn = c_sf->parsed() ? sf_fn : sf2_fn;
            const std::vector<std::string>& raw = c_sf->parsed() ? sf_args : sf2_args;
            if (c_sf2->parsed() && sf2_mode != "eval") {
                throw ValidationError("unknown specfun mode: " + sf2_mode);
            }
            std::vector<double> args;
            for (const auto& s : raw) args.push_back(parse_double_list(s)[0]);
            std::cout << fmt17(specfun_dispatch(fn, args)) << "\n";
            return 0;
        }
        if (c_cat->parsed()) {
            std::cout << kCatalog;
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace fixtime
