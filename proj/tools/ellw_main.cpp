// ellw: elliptic Loewner flows, theta-function identity suites, and the
// hodograph solution of the reduced hydrodynamic hierarchy.
//
// Exit codes (stable across subcommands):
//   0  success / all residuals within tolerance
//   1  an identity or tolerance check failed
//   2  invalid input (CLI parse, config schema, domain, missing bracket)
//   3  numerical failure (pole cascade, blow-up, truncation, no convergence)

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellw/complex_parse.hpp"
#include "ellw/csv.hpp"
#include "ellw/curve.hpp"
#include "ellw/elliptic.hpp"
#include "ellw/faber.hpp"
#include "ellw/hodograph.hpp"
#include "ellw/hydro.hpp"
#include "ellw/loewner.hpp"
#include "ellw/report.hpp"
#include "ellw/run_config.hpp"
#include "ellw/theta.hpp"
#include "ellw/verify.hpp"

namespace {

using namespace ellw;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

SPrimeForm parse_sprime_form(const std::string& s) {
    if (s == "analytic") return SPrimeForm::analytic;
    if (s == "theta1theta4") return SPrimeForm::closed_theta1_theta4;
    if (s == "theta1theta2") return SPrimeForm::closed_theta1_theta2;
    throw ConfigError("unknown S' form '" + s + "'");
}

int cmd_theta(int a, const std::string& u_str, const std::string& tau_str, int du) {
    const ModularParam tau(parse_complex(tau_str));
    const ModularPoint p(parse_complex(u_str), tau);
    const cplx v = theta_eval(theta_index(a), p, du);
    std::cout << ordered_json{{"re", v.real()}, {"im", v.imag()}}.dump() << "\n";
    return 0;
}

int cmd_verify(const std::string& suite_str, long samples, uint64_t seed, double tol, int threads,
               const std::string& sprime_form, const std::string& out_path) {
    VerifyOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    opt.tol = tol;
    opt.threads = threads;
    opt.sprime_form = parse_sprime_form(sprime_form);

    std::vector<Suite> suites =
        suite_str == "all" ? all_suites() : std::vector<Suite>{parse_suite(suite_str)};
    ordered_json out = ordered_json::array();
    bool all_pass = true;
    for (Suite s : suites) {
        const ResidualReport rep = run_suite(s, opt);
        out.push_back(to_json(rep));
        for (const auto& st : rep.stats) {
            std::cout << "[" << rep.suite << "] " << st.name << ": max=" << st.max_residual
                      << " mean=" << st.mean_residual << " tol=" << st.tolerance
                      << " attempted=" << st.attempted << " rejected=" << st.rejected << " "
                      << (st.pass ? "PASS" : "FAIL") << "\n";
            all_pass = all_pass && st.pass;
        }
    }
    if (!out_path.empty()) write_text_file(out_path, out.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

ordered_json consistency_report(const LoewnerTrajectory& traj, int residual_samples, double tol,
                                double& max_res) {
    const ReductionState probe = traj.at(traj.y_begin());
    max_res = 0.0;
    if (probe.u_points.size() < 2 || probe.ubar_points.empty())
        return ordered_json("skipped: needs >= 2 u-points and >= 1 ubar-point");
    struct Agg {
        double max = 0.0, sum = 0.0;
    };
    std::vector<std::string> names;
    std::vector<Agg> aggs;
    const double y0 = traj.y_begin(), y1 = traj.y_end();
    const int n = std::max(residual_samples, 2);
    for (int i = 0; i < n; ++i) {
        const double y = y0 + (y1 - y0) * i / static_cast<double>(n - 1);
        const IdentityResiduals r = consistency_residuals(traj.at(y));
        if (names.empty()) {
            for (const auto& item : r.items) names.push_back(item.name);
            aggs.resize(names.size());
        }
        for (size_t j = 0; j < r.items.size(); ++j) {
            aggs[j].max = std::max(aggs[j].max, r.items[j].value);
            aggs[j].sum += r.items[j].value;
        }
    }
    ordered_json stats = ordered_json::array();
    for (size_t j = 0; j < names.size(); ++j) {
        max_res = std::max(max_res, aggs[j].max);
        stats.push_back(ordered_json{{"name", names[j]},
                                     {"max_residual", aggs[j].max},
                                     {"mean_residual", aggs[j].sum / n},
                                     {"tolerance", tol},
                                     {"pass", aggs[j].max < tol}});
    }
    return stats;
}

int cmd_loewner(const std::string& config_path) {
    const LoewnerRunConfig cfg = parse_loewner_config(load_json_file(config_path));
    const LoewnerOutcome outcome =
        loewner_integrate_partial(cfg.initial, cfg.kappa, cfg.y_end, cfg.options);
    const LoewnerTrajectory& traj = outcome.trajectory;

    if (!cfg.output_csv.empty()) {
        std::ostringstream os;
        write_trajectory_csv(os, traj, cfg.samples);
        write_text_file(cfg.output_csv, os.str());
    }

    double max_res = 0.0;
    ordered_json consistency = consistency_report(traj, cfg.residual_samples, cfg.residual_tol, max_res);
    ordered_json report{{"y_start", traj.y_begin()},
                        {"y_end_requested", cfg.y_end},
                        {"y_end_reached", outcome.blew_up ? outcome.last_good_y : cfg.y_end},
                        {"blow_up", outcome.blew_up},
                        {"blowup_detail", outcome.blowup_detail},
                        {"residual_tol", cfg.residual_tol},
                        {"consistency", consistency}};
    if (!cfg.report_json.empty()) write_text_file(cfg.report_json, report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    if (outcome.blew_up) return 3;
    return max_res < cfg.residual_tol ? 0 : 1;
}

int cmd_faber(const std::string& c_str, const std::string& cbar_str, const std::string& v_str,
              const std::string& tau_str, int order, bool want_velocities, double eta, double kappa,
              const std::string& out_path) {
    std::vector<cplx> c;
    {
        std::stringstream ss(c_str);
        std::string item;
        while (std::getline(ss, item, ',')) c.push_back(parse_complex(item));
    }
    if (c.empty()) throw ConfigError("faber: --c needs at least one coefficient");
    const ModularParam tau(parse_complex(tau_str));
    if (order <= 0) order = static_cast<int>(c.size());
    c.resize(static_cast<size_t>(order), cplx{0.0, 0.0});

    ordered_json out;
    if (want_velocities) {
        std::vector<cplx> cbar;
        if (!cbar_str.empty()) {
            std::stringstream ss(cbar_str);
            std::string item;
            while (std::getline(ss, item, ',')) cbar.push_back(parse_complex(item));
            cbar.resize(static_cast<size_t>(order), cplx{0.0, 0.0});
        } else {
            for (const cplx& z : c) cbar.push_back(std::conj(z));
        }
        const VelocityTable vt = velocity_table(eta, kappa, c, cbar, tau, order);
        ordered_json phi, psi;
        for (int k = 0; k <= vt.order; ++k) {
            phi[std::to_string(k)] = complex_json(vt.phi[static_cast<size_t>(k)]);
            psi[std::to_string(k)] = complex_json(vt.psi[static_cast<size_t>(k)]);
        }
        out = ordered_json{{"order", vt.order},
                           {"xi", complex_json(vt.xi)},
                           {"xibar", complex_json(vt.xibar)},
                           {"sprime_xi", complex_json(vt.sprime_xi)},
                           {"sprime_xibar", complex_json(vt.sprime_xibar)},
                           {"phi", phi},
                           {"psi", psi}};
    } else {
        const FaberCoefficients fc = faber_coeffs(TailSeries(c), parse_complex(v_str), tau);
        ordered_json bp;
        for (int k = 1; k <= fc.order; ++k)
            bp[std::to_string(k)] = complex_json(fc.bprime[static_cast<size_t>(k) - 1]);
        out = ordered_json{{"order", fc.order},
                           {"v", complex_json(fc.v)},
                           {"sprime_v", complex_json(fc.sprime_v)},
                           {"bprime", bp}};
    }
    const std::string text = out.dump(2) + "\n";
    if (!out_path.empty()) write_text_file(out_path, text);
    std::cout << text;
    return 0;
}

int cmd_hodograph(const std::string& config_path) {
    const HodographRunConfig cfg = parse_hodograph_config(load_json_file(config_path));
    const LoewnerRunConfig red_cfg = parse_loewner_config(cfg.loewner);
    const LoewnerTrajectory traj =
        loewner_integrate(red_cfg.initial, red_cfg.kappa, red_cfg.y_end, red_cfg.options);
    const ReductionProvider provider(traj, cfg.velocity_order);

    const std::vector<TimesVector> grid = expand_grid(cfg.times, cfg.axes);
    HydroOptions opts;
    opts.fd_step = cfg.fd_step;
    HydroReport rep;
    try {
        rep = hydrodynamic_residuals(grid, cfg.phi, provider, cfg.bracket_lo, cfg.bracket_hi, opts);
    } catch (const NoBracketError& e) {
        std::cerr << e.what() << "\nscan of Re(lhs - Phi) for the first grid node:\n";
        const TimesVector& tv = grid.front();
        for (int i = 0; i <= 32; ++i) {
            const double y = cfg.bracket_lo + (cfg.bracket_hi - cfg.bracket_lo) * i / 32.0;
            const double r = (hodograph_lhs(tv, y, provider) - cfg.phi(y)).real();
            std::cerr << "  y=" << csv_num(y) << "  r=" << csv_num(r) << "\n";
        }
        return 2;
    }

    if (!cfg.output_csv.empty()) {
        std::ostringstream os;
        write_hodograph_csv(os, rep);
        write_text_file(cfg.output_csv, os.str());
    }

    const double tol = cfg.residual_tol_factor * rep.h * rep.h;
    bool pass = true;
    ordered_json eqs = ordered_json::array();
    for (const auto& e : rep.equations) {
        pass = pass && e.max_h < tol;
        eqs.push_back(ordered_json{{"name", e.name},
                                   {"max_residual_h", e.max_h},
                                   {"max_residual_h2", e.max_h2},
                                   {"median_order", e.median_order},
                                   {"order_samples", e.order_samples}});
    }
    ordered_json report{{"h", rep.h},
                        {"K", rep.K},
                        {"nodes", rep.nodes.size()},
                        {"tolerance", tol},
                        {"equations", eqs},
                        {"pass", pass}};
    if (rep.cross_checked) {
        report["cross_derivative"] = ordered_json{{"residual_h", rep.cross_res_h},
                                                  {"residual_h2", rep.cross_res_h2},
                                                  {"order", rep.cross_order}};
    }
    if (!cfg.report_json.empty()) write_text_file(cfg.report_json, report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return pass ? 0 : 1;
}

int classify(const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const RangeError*>(&e) || dynamic_cast<const NoBracketError*>(&e))
        return 2;
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic Loewner / dispersionless hierarchy toolkit"};
    app.require_subcommand(1);

    // theta
    auto* th = app.add_subcommand("theta", "evaluate d^du/du^du theta_a(u|tau), JSON {re,im}");
    int a = 3, du = 0;
    std::string u_str, tau_str;
    th->add_option("--a", a, "theta index in {1,2,3,4}")->required();
    th->add_option("--u", u_str, "argument, e.g. 0.2+0.1i")->required();
    th->add_option("--tau", tau_str, "modular parameter, e.g. 1.0i")->required();
    th->add_option("--du", du, "u-derivative order (0..4)");

    // verify
    auto* vf = app.add_subcommand("verify", "run residual suites over random admissible samples");
    std::string suite = "all", sprime_form = "analytic", verify_out;
    long samples = 1000;
    uint64_t seed = 0;
    double tol = 0.0;
    int threads = 0;
    vf->add_option("--suite", suite, "all|ss2|ss3|curve|quotient|ap|landen")->required();
    vf->add_option("--samples", samples, "samples per suite (default 1000)");
    vf->add_option("--seed", seed, "RNG seed (mandatory for reproducibility)")->required();
    vf->add_option("--tol", tol, "tolerance override (0 = per-suite default)");
    vf->add_option("--threads", threads, "worker cap (0 = auto; env ELL_LOEWNER_THREADS also caps)");
    vf->add_option("--sprime-form", sprime_form,
                   "S' evaluation: analytic|theta1theta4|theta1theta2 (mutation hook for "
                   "harness sensitivity tests)");
    vf->add_option("--out", verify_out, "write the JSON report here");

    // loewner
    auto* lw = app.add_subcommand("loewner", "integrate a reduction and emit CSV + residual report");
    std::string loewner_config;
    lw->add_option("--config", loewner_config, "JSON run configuration")->required();

    // faber
    auto* fb = app.add_subcommand("faber", "Faber coefficients / velocity tables as JSON");
    std::string c_str, cbar_str, v_str = "0", faber_tau, faber_out;
    int order = 0;
    bool want_velocities = false;
    double eta = 0.0, kappa = 0.0;
    fb->add_option("--c", c_str, "series c_1,c_2,... (comma-separated complex)")->required();
    fb->add_option("--cbar", cbar_str, "conjugate series (default: conj of --c)");
    fb->add_option("--v", v_str, "expansion base point");
    fb->add_option("--tau", faber_tau, "modular parameter")->required();
    fb->add_option("--order", order, "truncation order (default: length of --c)");
    fb->add_flag("--velocities", want_velocities, "emit phi/psi table at xi = eta/2 + i kappa");
    fb->add_option("--eta", eta, "eta for --velocities");
    fb->add_option("--kappa", kappa, "kappa for --velocities");
    fb->add_option("--out", faber_out, "also write the JSON here");

    // hodograph
    auto* hg = app.add_subcommand("hodograph", "solve the hodograph relation on a times grid");
    std::string hodo_config;
    hg->add_option("--config", hodo_config, "JSON run configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (th->parsed()) return cmd_theta(a, u_str, tau_str, du);
        if (vf->parsed())
            return cmd_verify(suite, samples, seed, tol, threads, sprime_form, verify_out);
        if (lw->parsed()) return cmd_loewner(loewner_config);
        if (fb->parsed())
            return cmd_faber(c_str, cbar_str, v_str, faber_tau, order, want_velocities, eta, kappa,
                             faber_out);
        if (hg->parsed()) return cmd_hodograph(hodo_config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
