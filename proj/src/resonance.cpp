#include "spinspin/resonance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spinspin/kepler.hpp"

namespace spinspin {

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;

bool lattice_alpha(double a) { return a == 0.0 || std::abs(a - PI) < 1e-14; }
bool lattice_beta(double b) { return b == 0.0 || std::abs(b - PI / 2.0) < 1e-14; }
}  // namespace

void ResonanceSpec::validate() const {
    if (!lattice_alpha(type.alpha))
        throw std::invalid_argument("ResonanceSpec: alpha must be 0 or pi");
    if (!lattice_beta(type.beta1) || !lattice_beta(type.beta2))
        throw std::invalid_argument("ResonanceSpec: beta must be 0 or pi/2");
    if (flavor == ResonanceFlavor::Balanced) {
        if (order.n1 != 2 || (order.two_body() && order.n2 != 2))
            throw std::invalid_argument("ResonanceSpec: balanced resonances have n = 2");
        if (type.alpha != 0.0)
            throw std::invalid_argument("ResonanceSpec: balanced types are taken at alpha = 0");
    } else {
        if (order.n1 == 0 || (order.two_body() && order.n2 != order.n1))
            throw std::invalid_argument(
                "ResonanceSpec: standard two-body orders must share a nonzero n");
    }
}

double ResonanceSpec::horizon() const {
    return flavor == ResonanceFlavor::Balanced ? PI : std::abs(order.n1) * PI;
}

double ResonanceSpec::target_increment(int body) const {
    const int m = body == 1 ? order.m1 : order.m2;
    return flavor == ResonanceFlavor::Balanced ? m * PI / 2.0 : m * PI;
}

std::string ResonanceSpec::str() const {
    std::ostringstream os;
    os << (flavor == ResonanceFlavor::Balanced ? "balanced" : "standard") << " " << order.m1
       << ":" << order.n1;
    if (order.two_body()) os << "," << order.m2 << ":" << order.n2;
    os << " type(";
    if (flavor == ResonanceFlavor::Standard) os << (type.alpha == 0.0 ? "0" : "pi") << ";";
    os << (type.beta1 == 0.0 ? "0" : "pi/2");
    if (order.two_body()) os << "," << (type.beta2 == 0.0 ? "0" : "pi/2");
    os << ")";
    return os.str();
}

namespace {

// Boundary propagation with the tangent block needed by Newton: end angles,
// end velocities and the Jacobian d theta_end / d v0.
struct Propagated {
    double theta_end[2];
    double v_end[2];
    double J[2][2];
    bool ok = false;
};

// single-body (dim 2) with one tangent column
Propagated propagate_single(const SingleSpinSystem& sys, double beta, double v, double t0,
                            double t1, const IntegratorConfig& cfg) {
    auto rhs = [&sys](double t, const double* y, double* dy) {
        sys.rhs(t, y, dy);
        sys.tangent_rhs(t, y[0], y + 2, dy + 2);
    };
    std::vector<double> y = {beta, sys.C() * v, 0.0, 1.0};  // tangent in (y, ydot) chart
    const auto st = integrate_final(rhs, y, t0, t1, cfg);
    Propagated p;
    p.ok = st == IntegrationStatus::Ok;
    p.theta_end[0] = y[0];
    p.v_end[0] = y[1] / sys.C();
    p.J[0][0] = y[2];
    return p;
}

// coupled (dim 4) with two tangent columns, d/d(v1, v2)
Propagated propagate_coupled(const SpinSystem& sys, const double beta[2], const double v[2],
                             double t0, double t1, const IntegratorConfig& cfg) {
    const double C1 = sys.params().C1, C2 = sys.params().C2();
    auto rhs = [&sys](double t, const double* y, double* dy) {
        sys.rhs(t, y, dy);
        for (int col = 0; col < 2; ++col) {
            double yc[4], dyc[4];
            for (int i = 0; i < 4; ++i) yc[i] = y[4 + 2 * i + col];
            sys.tangent_rhs(t, y[0], y[1], yc, dyc);
            for (int i = 0; i < 4; ++i) dy[4 + 2 * i + col] = dyc[i];
        }
    };
    std::vector<double> y(12, 0.0);
    y[0] = beta[0];
    y[1] = beta[1];
    y[2] = C1 * v[0];
    y[3] = C2 * v[1];
    y[4 + 2 * 2 + 0] = C1;  // d p1 / d v1
    y[4 + 2 * 3 + 1] = C2;  // d p2 / d v2
    const auto st = integrate_final(rhs, y, t0, t1, cfg);
    Propagated p;
    p.ok = st == IntegrationStatus::Ok;
    p.theta_end[0] = y[0];
    p.theta_end[1] = y[1];
    p.v_end[0] = y[2] / C1;
    p.v_end[1] = y[3] / C2;
    p.J[0][0] = y[4 + 0 + 0];
    p.J[0][1] = y[4 + 0 + 1];
    p.J[1][0] = y[4 + 2 + 0];
    p.J[1][1] = y[4 + 2 + 1];
    return p;
}

struct ShootProblem {
    const DimensionlessParams& params;
    const ResonanceSpec& spec;
    ModelKind kind;
    int nb;  // number of unknowns (1 or 2)

    Propagated run(const double v[2], double t0, double t1, const IntegratorConfig& cfg) const {
        const double beta[2] = {spec.type.beta1, spec.type.beta2};
        if (spec.order.two_body() || kind == ModelKind::KeplerianSpinSpin) {
            SpinSystem sys(params, spec.order.two_body() ? kind : ModelKind::KeplerianSpinSpin);
            double vv[2] = {v[0], spec.order.two_body() ? v[1] : 0.0};
            return propagate_coupled(sys, beta, vv, t0, t1, cfg);
        }
        SingleSpinSystem sys(params, 1, kind == ModelKind::SphericalCompanion);
        return propagate_single(sys, beta[0], v[0], t0, t1, cfg);
    }
};

ResonanceSolution newton_shoot(const ShootProblem& prob, const std::vector<double>& v_guess,
                               const ShootOptions& opt) {
    const auto& spec = prob.spec;
    const int nb = prob.nb;
    const double t0 = spec.type.alpha;
    const double t1 = t0 + spec.horizon();

    ResonanceSolution sol;
    sol.spec = spec;
    sol.params = prob.params;
    sol.kind = prob.kind;
    sol.v0.assign(v_guess.begin(), v_guess.end());

    double v[2] = {v_guess[0], nb > 1 ? v_guess[1] : 0.0};
    double target[2] = {spec.type.beta1 + spec.target_increment(1),
                        spec.type.beta2 + spec.target_increment(2)};

    double best_res = 1e300;
    double best_v[2] = {v[0], v[1]};

    for (int it = 0; it < opt.max_newton; ++it) {
        const auto p = prob.run(v, t0, t1, opt.integ);
        if (!p.ok) break;

        double G[2] = {p.theta_end[0] - target[0], nb > 1 ? p.theta_end[1] - target[1] : 0.0};
        double res = std::max(std::abs(G[0]), std::abs(G[1]));
        if (res < best_res) {
            best_res = res;
            best_v[0] = v[0];
            best_v[1] = v[1];
        }
        if (res < opt.tol) break;

        // Newton step on the boundary defect
        double det, dv[2];
        double scale;
        if (nb == 1) {
            det = p.J[0][0];
            scale = std::max(1.0, std::abs(p.J[0][0]));
        } else {
            det = p.J[0][0] * p.J[1][1] - p.J[0][1] * p.J[1][0];
            scale = std::max({1.0, std::abs(p.J[0][0]), std::abs(p.J[0][1]),
                              std::abs(p.J[1][0]), std::abs(p.J[1][1])});
            scale *= scale;
        }
        if (std::abs(det) < opt.singular_factor * scale) {
            sol.at_bifurcation = true;
            break;
        }
        if (nb == 1) {
            dv[0] = G[0] / p.J[0][0];
            dv[1] = 0.0;
        } else {
            dv[0] = (G[0] * p.J[1][1] - G[1] * p.J[0][1]) / det;
            dv[1] = (G[1] * p.J[0][0] - G[0] * p.J[1][0]) / det;
        }

        // guard against wild steps far from the basin
        double v_try[2];
        for (int halve = 0;; ++halve) {
            v_try[0] = v[0] - dv[0];
            v_try[1] = v[1] - dv[1];
            if (halve >= 3) break;
            const auto pt = prob.run(v_try, t0, t1, opt.integ);
            if (!pt.ok) break;
            const double rt = std::max(std::abs(pt.theta_end[0] - target[0]),
                                       nb > 1 ? std::abs(pt.theta_end[1] - target[1]) : 0.0);
            if (rt < 10.0 * res || rt < 1e-6) break;
            dv[0] *= 0.5;
            dv[1] *= 0.5;
        }
        v[0] = v_try[0];
        v[1] = v_try[1];
    }

    // evaluate at the best iterate
    const auto p = prob.run(best_v, t0, t1, opt.integ);
    if (p.ok) {
        double G[2] = {p.theta_end[0] - target[0], nb > 1 ? p.theta_end[1] - target[1] : 0.0};
        best_res = std::max(std::abs(G[0]), std::abs(G[1]));
        sol.jac_det = nb == 1 ? p.J[0][0] : p.J[0][0] * p.J[1][1] - p.J[0][1] * p.J[1][0];
    }
    sol.v0.assign(best_v, best_v + nb);
    sol.residual = best_res;
    sol.converged = best_res <= opt.converged_tol;
    return sol;
}

}  // namespace

ResonanceSolution shoot_balanced(const DimensionlessParams& params, const ResonanceSpec& spec,
                                 const std::vector<double>& v_guess, ModelKind kind,
                                 const ShootOptions& opt) {
    spec.validate();
    if (spec.flavor != ResonanceFlavor::Balanced)
        throw std::invalid_argument("shoot_balanced: spec must be balanced");
    if (!is_keplerian_kind(kind))
        throw std::invalid_argument("shoot_balanced: full model kinds rejected");
    const int nb = spec.order.two_body() ? 2 : 1;
    if (static_cast<int>(v_guess.size()) != nb)
        throw std::invalid_argument("shoot_balanced: wrong v_guess size");
    ShootProblem prob{params, spec, kind, nb};
    return newton_shoot(prob, v_guess, opt);
}

ResonanceSolution shoot_standard(const DimensionlessParams& params, const ResonanceSpec& spec,
                                 const std::vector<double>& v_guess, ModelKind kind,
                                 const ShootOptions& opt) {
    spec.validate();
    if (spec.flavor != ResonanceFlavor::Standard)
        throw std::invalid_argument("shoot_standard: spec must be standard");
    if (!is_keplerian_kind(kind))
        throw std::invalid_argument("shoot_standard: full model kinds rejected");
    const int nb = spec.order.two_body() ? 2 : 1;
    if (static_cast<int>(v_guess.size()) != nb)
        throw std::invalid_argument("shoot_standard: wrong v_guess size");
    ShootProblem prob{params, spec, kind, nb};
    return newton_shoot(prob, v_guess, opt);
}

std::pair<double, double> default_gamma_range(const ResonanceSpec& spec) {
    const double center = spec.flavor == ResonanceFlavor::Balanced
                              ? spec.order.m1 / 2.0
                              : static_cast<double>(spec.order.m1) / spec.order.n1;
    return {center - 3.0, center + 3.0};
}

std::vector<ResonanceSolution> enumerate_solutions(const DimensionlessParams& params,
                                                   const ResonanceSpec& spec, ModelKind kind,
                                                   double gamma_min, double gamma_max,
                                                   int gamma_steps, const ShootOptions& opt) {
    spec.validate();
    if (spec.flavor != ResonanceFlavor::Balanced || spec.order.two_body())
        throw std::invalid_argument("enumerate_solutions: single-body balanced specs only");
    std::vector<ResonanceSolution> out;
    if (gamma_steps < 2 || gamma_max <= gamma_min) return out;

    const double beta = spec.type.beta1;
    const double theta_pi = beta + spec.target_increment(1);
    const bool embedded = kind == ModelKind::KeplerianSpinSpin;

    // backward defect D(gamma) = theta1(0) - beta with data posed at t = pi
    SingleSpinSystem single(params, 1, kind == ModelKind::SphericalCompanion);
    SpinSystem coupled(params, ModelKind::KeplerianSpinSpin);

    auto defect_and_v0 = [&](double gamma, double* v0_out) {
        if (embedded) {
            std::vector<double> y = {theta_pi, 0.0, coupled.params().C1 * gamma, 0.0};
            integrate_final(coupled.rhs_fn(), y, PI, 0.0, opt.integ);
            if (v0_out) *v0_out = y[2] / coupled.params().C1;
            return y[0] - beta;
        }
        std::vector<double> y = {theta_pi, single.C() * gamma};
        integrate_final(single.rhs_fn(), y, PI, 0.0, opt.integ);
        if (v0_out) *v0_out = y[1] / single.C();
        return y[0] - beta;
    };

    // defect derivative dD/dgamma for the polish
    auto defect_slope = [&](double gamma) {
        if (embedded) {
            const double betas[2] = {theta_pi, 0.0};
            const double vv[2] = {gamma, 0.0};
            const auto p = propagate_coupled(coupled, betas, vv, PI, 0.0, opt.integ);
            return p.J[0][0];
        }
        const auto p = propagate_single(single, theta_pi, gamma, PI, 0.0, opt.integ);
        return p.J[0][0];
    };

    const double dg = (gamma_max - gamma_min) / gamma_steps;
    std::vector<double> roots;

    double g_prev = gamma_min;
    double D_prev = defect_and_v0(g_prev, nullptr);
    for (int i = 1; i <= gamma_steps; ++i) {
        const double g = gamma_min + i * dg;
        const double D = defect_and_v0(g, nullptr);
        if (D_prev == 0.0) roots.push_back(g_prev);
        if ((D_prev < 0.0 && D > 0.0) || (D_prev > 0.0 && D < 0.0)) {
            // Newton polish from the secant estimate, bisection fallback
            double lo = g_prev, hi = g, Dlo = D_prev;
            double x = g_prev - D_prev * (g - g_prev) / (D - D_prev);
            bool ok = false;
            for (int it = 0; it < 30; ++it) {
                const double Dx = defect_and_v0(x, nullptr);
                if (std::abs(Dx) < opt.tol) {
                    ok = true;
                    break;
                }
                if ((Dlo < 0.0) != (Dx < 0.0))
                    hi = x;
                else {
                    lo = x;
                    Dlo = Dx;
                }
                const double slope = defect_slope(x);
                double xn = slope != 0.0 ? x - Dx / slope : 0.5 * (lo + hi);
                if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
                x = xn;
            }
            if (!ok) {
                for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double Dm = defect_and_v0(mid, nullptr);
                    if ((Dlo < 0.0) == (Dm < 0.0)) {
                        lo = mid;
                        Dlo = Dm;
                    } else
                        hi = mid;
                }
                x = 0.5 * (lo + hi);
            }
            roots.push_back(x);
        }
        g_prev = g;
        D_prev = D;
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-8; }),
                roots.end());

    for (double g : roots) {
        double v0 = 0.0;
        const double D = defect_and_v0(g, &v0);
        ResonanceSolution sol;
        sol.spec = spec;
        sol.params = params;
        sol.kind = kind;
        sol.v0 = {v0};
        sol.residual = std::abs(D);
        sol.converged = sol.residual <= opt.converged_tol;
        out.push_back(std::move(sol));
    }
    return out;
}

ContinuationResult continue_solution(const ResonanceSolution& start,
                                     const DimensionlessParams& target, int steps,
                                     const ShootOptions& opt) {
    if (steps < 1) throw std::invalid_argument("continue_solution: steps must be >= 1");
    ContinuationResult res;

    const auto& p0 = start.params;
    auto blend = [&](double s) {
        DimensionlessParams p = p0;
        p.e = (1.0 - s) * p0.e + s * target.e;
        p.C1 = (1.0 - s) * p0.C1 + s * target.C1;
        p.lambda1 = (1.0 - s) * p0.lambda1 + s * target.lambda1;
        p.lambda2 = (1.0 - s) * p0.lambda2 + s * target.lambda2;
        p.sigma1 = (1.0 - s) * p0.sigma1 + s * target.sigma1;
        p.qhat1 = (1.0 - s) * p0.qhat1 + s * target.qhat1;
        p.qhat2 = (1.0 - s) * p0.qhat2 + s * target.qhat2;
        return p;
    };

    auto equal_params = [](const DimensionlessParams& a, const DimensionlessParams& b) {
        return a.e == b.e && a.C1 == b.C1 && a.lambda1 == b.lambda1 && a.lambda2 == b.lambda2 &&
               a.sigma1 == b.sigma1 && a.qhat1 == b.qhat1 && a.qhat2 == b.qhat2;
    };
    if (equal_params(p0, target)) {
        res.path.push_back(start);
        res.completed = true;
        return res;
    }

    auto solve_at = [&](const DimensionlessParams& p, const std::vector<double>& guess) {
        return start.spec.flavor == ResonanceFlavor::Balanced
                   ? shoot_balanced(p, start.spec, guess, start.kind, opt)
                   : shoot_standard(p, start.spec, guess, start.kind, opt);
    };

    ResonanceSolution cur = solve_at(p0, start.v0);
    if (!cur.converged) cur = start;
    res.path.push_back(cur);
    double s = 0.0;
    double ds = 1.0 / steps;
    const double ds_min = ds / 1024.0;
    double det_scale = std::abs(cur.jac_det);

    while (s < 1.0) {
        const double s_next = std::min(1.0, s + ds);
        auto sol = solve_at(blend(s_next), cur.v0);
        if (sol.converged) {
            cur = sol;
            res.path.push_back(cur);
            s = s_next;
            det_scale = std::max(det_scale, std::abs(cur.jac_det));
            if (ds < 1.0 / steps) ds = std::min(2.0 * ds, 1.0 / steps);
            continue;
        }
        ds *= 0.5;
        if (ds < ds_min) {
            // stalled: a boundary-map Jacobian collapsing along the path is
            // the numerical signature of a fold (it vanishes like the square
            // root of the parameter distance)
            res.fold = sol.at_bifurcation ||
                       std::abs(cur.jac_det) < 0.2 * std::max(det_scale, 1e-300);
            return res;
        }
    }
    res.completed = true;
    return res;
}

double resonant_angle(int m, int n, double t, double theta, bool true_anomaly_variant,
                      double e) {
    const double base = true_anomaly_variant ? true_anomaly(e, solve_kepler(e, t)) : t;
    return m * base - n * theta;
}

std::vector<std::pair<double, double>> resonant_angle_series(
    int m, int n, const Trajectory& traj, int theta_index, bool true_anomaly_variant,
    double e) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.points.size());
    for (const auto& pt : traj.points)
        out.emplace_back(pt.t,
                         resonant_angle(m, n, pt.t, pt.y[theta_index], true_anomaly_variant, e));
    return out;
}

namespace {

using int128 = __int128;

bool is_rational_root_free(const std::array<std::int64_t, 4>& c) {
    // c = (c3, c2, c1, c0) for c3 x^3 + c2 x^2 + c1 x + c0
    const std::int64_t c3 = c[0], c0 = c[3];
    if (c0 == 0) return false;  // x = 0 is a root
    auto divisors = [](std::int64_t v) {
        v = std::abs(v);
        std::vector<std::int64_t> d;
        for (std::int64_t i = 1; i * i <= v; ++i)
            if (v % i == 0) {
                d.push_back(i);
                d.push_back(v / i);
            }
        return d;
    };
    for (std::int64_t p : divisors(c0))
        for (std::int64_t q : divisors(c3)) {
            if (std::gcd(p, q) != 1) continue;
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                const int128 pp = static_cast<int128>(sgn) * p;
                const int128 val = static_cast<int128>(c[0]) * pp * pp * pp +
                                   static_cast<int128>(c[1]) * pp * pp * q +
                                   static_cast<int128>(c[2]) * pp * q * q +
                                   static_cast<int128>(c[3]) * q * q * q;
                if (val == 0) return false;
            }
        }
    return true;
}

}  // namespace

DiophantineResult diophantine_omega(const std::array<Rational, 2>& b,
                                    const std::array<std::array<Rational, 2>, 2>& A,
                                    const std::array<std::int64_t, 4>& cubic, int K) {
    for (const auto& r : {b[0], b[1], A[0][0], A[0][1], A[1][0], A[1][1]})
        if (r.den == 0) throw std::invalid_argument("diophantine_omega: zero denominator");
    // det A != 0, exactly: a00*a11*d01*d10 != a01*a10*d00*d11 cross-multiplied
    const int128 lhs = static_cast<int128>(A[0][0].num) * A[1][1].num *
                       static_cast<int128>(A[0][1].den) * A[1][0].den;
    const int128 rhs = static_cast<int128>(A[0][1].num) * A[1][0].num *
                       static_cast<int128>(A[0][0].den) * A[1][1].den;
    if (lhs == rhs) throw std::invalid_argument("diophantine_omega: det A = 0");
    if (cubic[0] == 0)
        throw std::invalid_argument("diophantine_omega: leading cubic coefficient is zero");
    if (!is_rational_root_free(cubic))
        throw std::invalid_argument("diophantine_omega: cubic is reducible over the rationals");

    // largest real root via the companion matrix, polished by Newton
    const double c3 = static_cast<double>(cubic[0]), c2 = static_cast<double>(cubic[1]),
                 c1 = static_cast<double>(cubic[2]), c0 = static_cast<double>(cubic[3]);
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 2) = -c0 / c3;
    comp(1, 2) = -c1 / c3;
    comp(2, 2) = -c2 / c3;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
    double alpha = -1e300;
    for (int i = 0; i < 3; ++i) {
        const auto ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) < 1e-9 * (1.0 + std::abs(ev.real())))
            alpha = std::max(alpha, ev.real());
    }
    for (int it = 0; it < 8; ++it) {
        const double f = ((c3 * alpha + c2) * alpha + c1) * alpha + c0;
        const double fp = (3.0 * c3 * alpha + 2.0 * c2) * alpha + c1;
        if (fp == 0.0) break;
        alpha -= f / fp;
    }

    auto res = diophantine_certificate(
        {1.0, b[0].value() + A[0][0].value() * alpha + A[0][1].value() * alpha * alpha,
         b[1].value() + A[1][0].value() * alpha + A[1][1].value() * alpha * alpha},
        K);
    res.alpha = alpha;
    return res;
}

DiophantineResult diophantine_certificate(const std::array<double, 3>& omega, int K) {
    DiophantineResult res;
    res.K = K;
    res.omega = omega;
    double best = 1e300;
    for (int k0 = -K; k0 <= K; ++k0)
        for (int k1 = -K; k1 <= K; ++k1)
            for (int k2 = -K; k2 <= K; ++k2) {
                if (k0 == 0 && k1 == 0 && k2 == 0) continue;
                const double dot =
                    std::abs(k0 * omega[0] + k1 * omega[1] + k2 * omega[2]);
                if (dot < 1e-12) res.resonant = true;
                const int knorm = std::max({std::abs(k0), std::abs(k1), std::abs(k2)});
                const double cert = dot * knorm * knorm;
                if (cert < best) {
                    best = cert;
                    res.worst_k = {k0, k1, k2};
                }
            }
    res.certificate = best;
    return res;
}

}  // namespace spinspin
