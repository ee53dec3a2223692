#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spinspin/compare.hpp"
#include "spinspin/jobs.hpp"
#include "spinspin/kepler.hpp"
#include "spinspin/params.hpp"
#include "spinspin/poincare.hpp"
#include "spinspin/resonance.hpp"

using namespace spinspin;

namespace {

constexpr double PI = 3.14159265358979323846264338327950288;

struct ParamFlags {
    double e = 0.0, C1 = 0.5, lambda1 = 0.0, lambda2 = 0.0, sigma1 = 0.0, qhat1 = 0.0,
           qhat2 = 0.0;
    double a = 0.0;  // 0 = derive

    void attach(CLI::App* cmd) {
        cmd->add_option("--e", e, "orbit eccentricity");
        cmd->add_option("--C1", C1, "polar moment of body 1 (C2 = 1 - C1)");
        cmd->add_option("--lambda1", lambda1, "equatorial oblateness of body 1 (signed)");
        cmd->add_option("--lambda2", lambda2, "equatorial oblateness of body 2 (signed)");
        cmd->add_option("--sigma1", sigma1, "moment ratio of body 1");
        cmd->add_option("--qhat1", qhat1, "flattening ratio of body 1");
        cmd->add_option("--qhat2", qhat2, "flattening ratio of body 2");
        cmd->add_option("--a", a, "semi-major axis (default: derive from sigma1, equal masses)");
    }

    void defaults_from(const Config& cfg, const std::string& sec) {
        e = cfg.get_double(sec, "e", e);
        C1 = cfg.get_double(sec, "C1", C1);
        lambda1 = cfg.get_double(sec, "lambda1", lambda1);
        lambda2 = cfg.get_double(sec, "lambda2", lambda2);
        sigma1 = cfg.get_double(sec, "sigma1", sigma1);
        qhat1 = cfg.get_double(sec, "qhat1", qhat1);
        qhat2 = cfg.get_double(sec, "qhat2", qhat2);
        a = cfg.get_double(sec, "a", a);
    }

    DimensionlessParams build() const {
        DimensionlessParams p;
        p.e = e;
        p.C1 = C1;
        p.lambda1 = lambda1;
        p.lambda2 = lambda2;
        p.sigma1 = sigma1;
        p.qhat1 = qhat1;
        p.qhat2 = qhat2;
        if (a > 0.0) p.a = a;
        p.validate();
        return p;
    }
};

struct SpecFlags {
    int m1 = 1, n1 = 2, m2 = 0, n2 = 0;
    std::string flavor = "balanced";
    double alpha = 0.0, beta1 = 0.0, beta2 = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--m1", m1, "body-1 resonance numerator");
        cmd->add_option("--n1", n1, "body-1 resonance denominator");
        cmd->add_option("--m2", m2, "body-2 resonance numerator (two-body specs)");
        cmd->add_option("--n2", n2, "body-2 resonance denominator (0 = single body)");
        cmd->add_option("--flavor", flavor, "balanced | standard");
        cmd->add_option("--alpha", alpha, "symmetry time: 0 or pi (standard specs)");
        cmd->add_option("--beta1", beta1, "body-1 symmetry angle: 0 or pi/2");
        cmd->add_option("--beta2", beta2, "body-2 symmetry angle: 0 or pi/2");
    }

    ResonanceSpec build() const {
        ResonanceSpec s;
        s.order = {m1, n1, m2, n2};
        s.flavor = flavor == "standard" ? ResonanceFlavor::Standard : ResonanceFlavor::Balanced;
        s.type = {alpha, beta1, beta2};
        s.validate();
        return s;
    }
};

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    Rational r;
    if (slash == std::string::npos) {
        r.num = std::stoll(s);
        r.den = 1;
    } else {
        r.num = std::stoll(s.substr(0, slash));
        r.den = std::stoll(s.substr(slash + 1));
    }
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar two-ellipsoid spin models: resonances, stability and "
                 "full-vs-Keplerian comparison"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file with [job] sections");

    Config cfg;

    // kepler-solve ----------------------------------------------------------
    auto* ks = app.add_subcommand("kepler-solve", "solve the elliptic anomaly equation");
    double ks_e = 0.0, ks_t = 0.0, ks_a = 1.0;
    ks->add_option("--e", ks_e, "eccentricity")->required();
    ks->add_option("--t", ks_t, "mean anomaly")->required();
    ks->add_option("--a", ks_a, "semi-major axis");

    // resonance-find --------------------------------------------------------
    auto* rf = app.add_subcommand("resonance-find", "shoot one symmetric periodic solution");
    ParamFlags rf_params;
    SpecFlags rf_spec;
    rf_params.attach(rf);
    rf_spec.attach(rf);
    std::string rf_model = "spin-spin", rf_output;
    std::vector<double> rf_guess;
    rf->add_option("--model", rf_model, "spin-orbit | spherical-companion | spin-spin");
    rf->add_option("--guess", rf_guess, "initial velocity guess (1 or 2 values)");
    rf->add_option("--output", rf_output, "JSON output path (default: stdout)");

    // resonance-enumerate ----------------------------------------------------
    auto* re = app.add_subcommand("resonance-enumerate",
                                  "gamma-scan all solutions of a balanced resonance");
    ParamFlags re_params;
    re_params.attach(re);
    int re_m = 3, re_steps = 2000;
    double re_gmin = 0.0, re_gmax = 0.0;
    std::string re_model = "spin-orbit", re_output = "solutions.csv";
    re->add_option("--m", re_m, "balanced order m (resonance m:2)");
    re->add_option("--model", re_model, "spin-orbit | spherical-companion | spin-spin");
    re->add_option("--gamma-min", re_gmin, "scan lower bound (default m/2 - 3)");
    re->add_option("--gamma-max", re_gmax, "scan upper bound (default m/2 + 3)");
    re->add_option("--gamma-steps", re_steps, "scan resolution");
    re->add_option("--output", re_output, "CSV output path");

    // stability-scan ---------------------------------------------------------
    auto* sc = app.add_subcommand("stability-scan",
                                  "linear-stability diagram of a balanced resonance");
    StabilityScanJob sc_job;
    sc->add_option("--m", sc_job.m, "balanced order m");
    sc->add_option("--e-min", sc_job.e_min);
    sc->add_option("--e-max", sc_job.e_max);
    sc->add_option("--e-steps", sc_job.e_steps);
    sc->add_option("--lambda-min", sc_job.lambda_min);
    sc->add_option("--lambda-max", sc_job.lambda_max);
    sc->add_option("--lambda-steps", sc_job.lambda_steps);
    sc->add_option("--gamma-steps", sc_job.gamma_steps);
    sc->add_option("--model", sc_job.model, "spin-orbit | spherical-companion | spin-spin");
    sc->add_option("--qhat", sc_job.qhat);
    sc->add_option("--sigma", sc_job.sigma);
    sc->add_option("--workers", sc_job.workers, "parallel workers (0 = logical cores)");
    sc->add_flag("--resume", sc_job.resume, "reuse the completed-cell manifest");
    sc->add_option("--output", sc_job.output);

    // poincare ----------------------------------------------------------------
    auto* pc = app.add_subcommand("poincare", "stroboscopic map projections");
    ParamFlags pc_params;
    pc_params.attach(pc);
    std::string pc_model = "spin-spin", pc_output = "poincare.csv";
    int pc_kmax = 2000;
    bool pc_modpi = false;
    double pc_th1 = 0.0, pc_th2 = 0.0;
    std::vector<double> pc_v1_list, pc_v2_list;
    pc->add_option("--model", pc_model);
    pc->add_option("--k-max", pc_kmax, "map iterates");
    pc->add_flag("--mod-pi", pc_modpi, "apply the ellipsoid theta ~ theta + pi identification");
    pc->add_option("--theta1", pc_th1);
    pc->add_option("--theta2", pc_th2);
    pc->add_option("--theta-dot1", pc_v1_list, "initial body-1 velocities (one orbit each)")
        ->required();
    pc->add_option("--theta-dot2", pc_v2_list, "initial body-2 velocities (match --theta-dot1)");
    pc->add_option("--output", pc_output);

    // compare ------------------------------------------------------------------
    auto* cp = app.add_subcommand("compare", "full vs Keplerian trajectories and deltas");
    ParamFlags cp_params;
    SpecFlags cp_spec;
    cp_spec.m1 = 2;
    cp_spec.n1 = 2;
    cp_spec.m2 = 3;
    cp_spec.n2 = 2;
    cp_params.attach(cp);
    cp_spec.attach(cp);
    int cp_revs = 100, cp_spr = 32;
    std::string cp_output = "compare.csv";
    cp->add_option("--revolutions", cp_revs, "horizon in orbital revolutions");
    cp->add_option("--samples-per-rev", cp_spr);
    cp->add_option("--output", cp_output);

    // compare-grid ---------------------------------------------------------------
    auto* cg = app.add_subcommand("compare-grid", "circular-orbit comparison over (lambda, sigma)");
    CompareGridJob cg_job;
    cg_job.spec = make_default_compare_spec();
    cg->add_option("--lambda-min", cg_job.lambda_min);
    cg->add_option("--lambda-max", cg_job.lambda_max);
    cg->add_option("--lambda-steps", cg_job.lambda_steps);
    cg->add_option("--sigma-min", cg_job.sigma_min);
    cg->add_option("--sigma-max", cg_job.sigma_max);
    cg->add_option("--sigma-steps", cg_job.sigma_steps);
    cg->add_option("--revolutions", cg_job.horizon_revs);
    cg->add_option("--samples-per-rev", cg_job.samples_per_rev);
    cg->add_option("--workers", cg_job.workers);
    cg->add_flag("--resume", cg_job.resume);
    cg->add_option("--output", cg_job.output);

    // floquet-table -----------------------------------------------------------------
    auto* ft = app.add_subcommand("floquet-table",
                                  "Floquet multipliers of the Keplerian and full linearizations");
    ParamFlags ft_params;
    SpecFlags ft_spec;
    ft_spec.m1 = 2;
    ft_spec.n1 = 2;
    ft_spec.m2 = 3;
    ft_spec.n2 = 2;
    ft_params.attach(ft);
    ft_spec.attach(ft);
    std::string ft_output = "floquet.csv";
    ft->add_option("--output", ft_output);

    // diophantine-check ---------------------------------------------------------------
    auto* dc = app.add_subcommand("diophantine-check",
                                  "frequency vector from a cubic algebraic number");
    std::string dc_b = "0,0", dc_A = "1,0;0,1", dc_cubic = "1,0,-1,-1";
    int dc_K = 50;
    dc->add_option("--b", dc_b, "rational 2-vector, e.g. 1/2,0");
    dc->add_option("--A", dc_A, "rational 2x2 matrix rows ; separated, e.g. 1,0;0,1");
    dc->add_option("--cubic", dc_cubic, "integer coefficients c3,c2,c1,c0");
    dc->add_option("--K", dc_K, "scan bound on |k|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) cfg = Config::load(config_path);
    } catch (const std::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    }

    try {
        if (*ks) {
            const double u = solve_kepler(ks_e, ks_t);
            KeplerOrbit orb{ks_a, ks_e, 0.25};
            std::cout << "{\n  \"u\": " << num17(u) << ",\n  \"r\": "
                      << num17(orbit_radius(orb, u)) << ",\n  \"f\": "
                      << num17(true_anomaly(ks_e, u)) << "\n}\n";
            return 0;
        }

        if (*rf) {
            rf_params.defaults_from(cfg, "resonance-find");
            const auto params = rf_params.build();
            const auto spec = rf_spec.build();
            const int nb = spec.order.two_body() ? 2 : 1;
            std::vector<double> guess = rf_guess;
            if (guess.empty()) {
                guess.push_back(spec.order.m1 / static_cast<double>(spec.order.n1));
                if (nb == 2) guess.push_back(spec.order.m2 / static_cast<double>(spec.order.n2));
            }
            if (static_cast<int>(guess.size()) != nb) {
                std::cerr << "config error: --guess needs " << nb << " values\n";
                return 1;
            }
            const ModelKind kind = rf_model == "spin-orbit" ? ModelKind::KeplerianSpinOrbit
                                   : rf_model == "spherical-companion"
                                       ? ModelKind::SphericalCompanion
                                       : ModelKind::KeplerianSpinSpin;
            const auto sol = spec.flavor == ResonanceFlavor::Balanced
                                 ? shoot_balanced(params, spec, guess, kind)
                                 : shoot_standard(params, spec, guess, kind);
            const std::string json = solution_json(sol);
            if (rf_output.empty()) {
                std::cout << json << "\n";
            } else {
                std::ofstream out(rf_output);
                out << json << "\n";
            }
            return sol.converged ? 0 : 2;
        }

        if (*re) {
            re_params.defaults_from(cfg, "resonance-enumerate");
            const auto params = re_params.build();
            ResonanceSpec spec;
            spec.order = {re_m, 2, 0, 0};
            spec.flavor = ResonanceFlavor::Balanced;
            spec.validate();
            auto range = default_gamma_range(spec);
            if (re->count("--gamma-min")) range.first = re_gmin;
            if (re->count("--gamma-max")) range.second = re_gmax;
            const ModelKind kind = re_model == "spin-orbit" ? ModelKind::KeplerianSpinOrbit
                                   : re_model == "spherical-companion"
                                       ? ModelKind::SphericalCompanion
                                       : ModelKind::KeplerianSpinSpin;
            const auto sols =
                enumerate_solutions(params, spec, kind, range.first, range.second, re_steps);
            write_solutions_csv(re_output, sols);
            std::cout << sols.size() << " solution(s) -> " << re_output << "\n";
            return 0;
        }

        if (*sc) {
            if (sc_job.workers == 0) sc_job.workers = default_workers();
            return run_stability_scan(sc_job);
        }

        if (*pc) {
            pc_params.defaults_from(cfg, "poincare");
            PoincareJob job;
            job.params = pc_params.build();
            job.model = pc_model;
            job.k_max = pc_kmax;
            job.mod_pi = pc_modpi;
            job.output = pc_output;
            if (!pc_v2_list.empty() && pc_v2_list.size() != pc_v1_list.size()) {
                std::cerr << "config error: --theta-dot2 must match --theta-dot1 in length\n";
                return 1;
            }
            for (std::size_t i = 0; i < pc_v1_list.size(); ++i) {
                SpinState s;
                s.theta1 = pc_th1;
                s.theta2 = pc_th2;
                s.p1 = job.params.C1 * pc_v1_list[i];
                s.p2 = job.params.C2() * (pc_v2_list.empty() ? pc_v1_list[i] : pc_v2_list[i]);
                job.initials.push_back(s);
            }
            return run_poincare(job);
        }

        if (*cp) {
            cp_params.defaults_from(cfg, "compare");
            const auto params = cp_params.build();
            const auto spec = cp_spec.build();
            ComparisonConfig ccfg;
            ccfg.samples_per_rev = cp_spr;
            const auto run = run_comparison(params, spec, cp_revs, ccfg);
            std::ofstream csv(cp_output);
            csv << "t,delta_a,delta_e,delta_res1,delta_res2,a_F,e_F,omega_F\n";
            for (const auto& s : run.series)
                csv << num17(s.t) << ',' << num17(s.delta_a) << ',' << num17(s.delta_e) << ','
                    << num17(s.delta_res1) << ',' << num17(s.delta_res2) << ',' << num17(s.a_F)
                    << ',' << num17(s.e_F) << ','
                    << (s.omega_defined ? num17(s.omega_F) : "undefined") << '\n';
            std::cout << (run.collision
                              ? "collision at t = " + num17(run.collision_time)
                              : "no collision over " + std::to_string(cp_revs) + " revolutions")
                      << "; series -> " << cp_output << "\n";
            return run.ok ? 0 : 2;
        }

        if (*cg) {
            if (cg_job.workers == 0) cg_job.workers = default_workers();
            return run_compare_grid(cg_job);
        }

        if (*ft) {
            ft_params.defaults_from(cfg, "floquet-table");
            const auto params = ft_params.build();
            const auto spec = ft_spec.build();
            const auto fc = floquet_of_comparison(params, spec);
            write_floquet_csv(ft_output, fc);
            auto show = [](const char* name, const std::vector<std::complex<double>>& ms) {
                std::printf("%s:\n", name);
                for (const auto& m : ms)
                    std::printf("  argument % .6e   modulus %.6f\n", std::arg(m), std::abs(m));
            };
            show("Keplerian spin block", fc.keplerian_spin.multipliers);
            show("Keplerian orbit block (analytic)", fc.keplerian_orbit);
            show("full linearization", fc.full.multipliers);
            return 0;
        }

        if (*dc) {
            const auto bs = split(dc_b, ',');
            const auto rows = split(dc_A, ';');
            if (bs.size() != 2 || rows.size() != 2) {
                std::cerr << "config error: --b needs 2 rationals, --A needs 2 rows\n";
                return 1;
            }
            std::array<Rational, 2> b{parse_rational(bs[0]), parse_rational(bs[1])};
            std::array<std::array<Rational, 2>, 2> A;
            for (int i = 0; i < 2; ++i) {
                const auto cols = split(rows[i], ',');
                if (cols.size() != 2) {
                    std::cerr << "config error: --A rows need 2 rationals\n";
                    return 1;
                }
                A[i] = {parse_rational(cols[0]), parse_rational(cols[1])};
            }
            const auto cs = split(dc_cubic, ',');
            if (cs.size() != 4) {
                std::cerr << "config error: --cubic needs 4 integers\n";
                return 1;
            }
            std::array<std::int64_t, 4> cubic{std::stoll(cs[0]), std::stoll(cs[1]),
                                              std::stoll(cs[2]), std::stoll(cs[3])};
            const auto res = diophantine_omega(b, A, cubic, dc_K);
            std::printf("alpha      = %s\n", num17(res.alpha).c_str());
            std::printf("omega      = (1, %s, %s)\n", num17(res.omega[1]).c_str(),
                        num17(res.omega[2]).c_str());
            std::printf("certificate = %s at k = (%d, %d, %d), K = %d\n",
                        num17(res.certificate).c_str(), res.worst_k[0], res.worst_k[1],
                        res.worst_k[2], res.K);
            std::printf("%s\n", res.resonant ? "RESONANT within K" : "no resonance within K");
            return res.resonant ? 2 : 0;
        }
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "fatal: " << ex.what() << "\n";
        return 3;
    }
    (void)PI;
    return 0;
}
