#include "spinspin/compare.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "spinspin/kepler.hpp"

namespace spinspin {

namespace {
constexpr double TWO_PI = 6.283185307179586476925286766559;

ResonanceSolution solve_resonance(const DimensionlessParams& params, const ResonanceSpec& spec,
                                  const ComparisonConfig& cfg) {
    spec.validate();
    if (!spec.order.two_body() || spec.flavor != ResonanceFlavor::Balanced)
        throw std::invalid_argument("run_comparison: balanced two-body spec required");
    ShootOptions opt;
    opt.integ = cfg.integ;
    auto sol = shoot_balanced(params, spec,
                              {spec.order.m1 / 2.0, spec.order.m2 / 2.0},
                              ModelKind::KeplerianSpinSpin, opt);
    if (!sol.converged)
        throw std::invalid_argument("run_comparison: resonance did not converge (residual " +
                                    std::to_string(sol.residual) + ")");
    return sol;
}

}  // namespace

ComparisonRun run_comparison(const DimensionlessParams& params, const ResonanceSpec& spec,
                             int horizon_revs, const ComparisonConfig& cfg) {
    if (horizon_revs < 1) throw std::invalid_argument("run_comparison: horizon_revs >= 1");

    ComparisonRun run;
    run.params = params;
    run.spec = spec;
    run.horizon_revs = horizon_revs;
    run.phys = to_physical(params, /*allow_unphysical=*/true);
    run.solution = solve_resonance(params, spec, cfg);

    const double a = std::cbrt(run.phys.G);
    if (std::abs(run.phys.G - a * a * a) > 1e-12 * run.phys.G)
        throw std::logic_error("run_comparison: G = a^3 consistency lost");
    const double e = params.e;
    const double mu = run.phys.M1 * run.phys.M2;
    const double C1 = run.phys.C1, C2 = run.phys.C2;
    const double r_coll = collision_radius(run.phys);

    FullSystem full(run.phys, PotentialTruncation::V2V4, false);
    FullSystem kep(run.phys, PotentialTruncation::V2V4, true);

    // identical initial conditions: orbital periapsis data + resonance spin data
    std::vector<double> z = {a * (1.0 - e), 0.0, spec.type.beta1, spec.type.beta2,
                             0.0,           mu * a * a * std::sqrt(1.0 - e * e),
                             C1 * run.solution.v0[0], C2 * run.solution.v0[1]};
    std::vector<double> zeta = z;

    auto event = [r_coll](double, const double* y) { return y[0] - r_coll; };

    const int spr = std::max(1, cfg.samples_per_rev);
    const int n_samples = horizon_revs * spr;
    const double dt = TWO_PI / spr;

    auto record = [&](double t) {
        ComparisonSample s;
        s.t = t;
        std::array<double, 2> pos, vel;
        polar_to_cartesian(z[0], z[1], z[4], z[5], mu, pos, vel);
        const auto el = osculating_elements(pos, vel, run.phys.G);
        s.a_F = el.a;
        s.e_F = el.e;
        s.omega_F = el.omega;
        s.omega_defined = el.omega_defined;
        s.delta_a = (el.a - a) / a;
        s.delta_e = el.e - e;
        // modified resonant angles psi_j = m_j f - 2 theta_j, Keplerian minus full
        s.delta_res1 = (spec.order.m1 * zeta[1] - 2.0 * zeta[2]) -
                       (spec.order.m1 * z[1] - 2.0 * z[2]);
        s.delta_res2 = (spec.order.m2 * zeta[1] - 2.0 * zeta[3]) -
                       (spec.order.m2 * z[1] - 2.0 * z[3]);
        run.series.push_back(s);
    };

    record(0.0);
    if (z[0] <= r_coll) {
        run.collision = true;
        run.collision_time = 0.0;
        run.collision_r = z[0];
        return run;
    }

    for (int j = 1; j <= n_samples; ++j) {
        const double t0 = (j - 1) * dt, t1 = j * dt;
        auto traj = integrate_with_event(full.rhs_fn(), z, t0, t1, event, cfg.integ);
        if (traj.status == IntegrationStatus::EventStop) {
            run.collision = true;
            run.collision_time = traj.events.front().t;
            run.collision_r = traj.events.front().y[0];
            return run;
        }
        if (traj.status != IntegrationStatus::Ok) {
            run.ok = false;
            return run;
        }
        z = traj.final_state();
        if (integrate_final(kep.rhs_fn(), zeta, t0, t1, cfg.integ) != IntegrationStatus::Ok) {
            run.ok = false;
            return run;
        }
        record(t1);
    }
    return run;
}

FloquetComparison floquet_of_comparison(const DimensionlessParams& params,
                                        const ResonanceSpec& spec,
                                        const ComparisonConfig& cfg) {
    const auto sol = solve_resonance(params, spec, cfg);
    const auto phys = to_physical(params, /*allow_unphysical=*/true);
    const double a = std::cbrt(phys.G);

    FloquetComparison out;
    SpinSystem spin(params, ModelKind::KeplerianSpinSpin);
    SpinState s0;
    s0.t = 0.0;
    s0.theta1 = spec.type.beta1;
    s0.theta2 = spec.type.beta2;
    s0.p1 = params.C1 * sol.v0[0];
    s0.p2 = params.C2() * sol.v0[1];
    out.keplerian_spin = monodromy_lph(spin, s0, TWO_PI, cfg.integ);

    FullSystem hom(phys, cfg.hom_linear_trunc, true);
    KeplerOrbit orb{a, params.e, phys.M1 * phys.M2};
    out.full = monodromy_keplerian_form(hom, orb, s0, TWO_PI, cfg.integ);
    return out;
}

ComparisonGridCell compare_grid_cell(double lambda, double sigma, const ResonanceSpec& spec,
                                     int horizon_revs, const ComparisonConfig& cfg) {
    ComparisonGridCell cell;
    cell.lambda = lambda;
    cell.sigma = sigma;
    try {
        DimensionlessParams p;
        p.e = 0.0;
        p.C1 = 0.5;
        p.lambda1 = p.lambda2 = lambda;
        p.sigma1 = sigma;
        p.qhat1 = p.qhat2 = 0.0;
        const auto run = run_comparison(p, spec, horizon_revs, cfg);
        if (run.collision) {
            cell.status = GridCellStatus::Collision;
            cell.collision_time = run.collision_time;
        } else if (!run.ok) {
            cell.status = GridCellStatus::Failed;
            cell.error = "integration failure";
        } else {
            double mda = 0.0, mde = 0.0;
            for (const auto& s : run.series) {
                mda = std::max(mda, std::abs(s.delta_a));
                mde = std::max(mde, std::abs(s.delta_e));
            }
            cell.status = GridCellStatus::Ok;
            cell.log10_max_abs_delta_a = std::log10(std::max(mda, 1e-300));
            cell.log10_max_abs_delta_e = std::log10(std::max(mde, 1e-300));
        }
    } catch (const std::exception& ex) {
        cell.status = GridCellStatus::Failed;
        cell.error = ex.what();
    }
    return cell;
}

ComparisonGridResult scan_comparison_grid(const std::vector<double>& lambdas,
                                          const std::vector<double>& sigmas,
                                          const ResonanceSpec& spec, int horizon_revs,
                                          int workers, const ComparisonConfig& cfg) {
    ComparisonGridResult grid;
    grid.lambdas = lambdas;
    grid.sigmas = sigmas;
    grid.cells.resize(lambdas.size() * sigmas.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= grid.cells.size()) return;
            const std::size_t is = idx / lambdas.size();
            const std::size_t il = idx % lambdas.size();
            grid.cells[idx] =
                compare_grid_cell(lambdas[il], sigmas[is], spec, horizon_revs, cfg);
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return grid;
}

}  // namespace spinspin
