#include "spinspin/kepler.hpp"

#include <cmath>
#include <stdexcept>

namespace spinspin {

namespace {
constexpr double TWO_PI = 6.283185307179586476925286766559;
}

double KeplerOrbit::p_f() const {
    return mu * a * a * std::sqrt(1.0 - e * e);
}

void KeplerOrbit::validate() const {
    if (!(e >= 0.0 && e < 1.0))
        throw std::invalid_argument("KeplerOrbit: eccentricity must be in [0,1)");
    if (!(a > 0.0))
        throw std::invalid_argument("KeplerOrbit: semi-major axis must be positive");
    if (!(mu > 0.0 && mu <= 0.25))
        throw std::invalid_argument("KeplerOrbit: reduced mass must be in (0, 1/4]");
}

double solve_kepler(double e, double t) {
    if (!(e >= 0.0 && e < 1.0))
        throw std::invalid_argument("solve_kepler: eccentricity must be in [0,1)");
    if (e == 0.0) return t;

    // reduce to tr in [-pi, pi]; the branch k is restored on return
    const double k = std::round(t / TWO_PI);
    const double tr = t - k * TWO_PI;

    double u = tr + e * std::sin(tr);
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const double g = u - e * std::sin(u) - tr;
        const double gp = 1.0 - e * std::cos(u);
        const double du = g / gp;
        u -= du;
        if (std::abs(du) < 1e-15) {
            converged = true;
            break;
        }
    }
    if (!converged || std::abs(u - e * std::sin(u) - tr) > 1e-13) {
        // bisection on [tr - e, tr + e]; g is strictly increasing in u
        double lo = tr - e, hi = tr + e;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid - e * std::sin(mid) - tr < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        u = 0.5 * (lo + hi);
    }
    return u + k * TWO_PI;
}

double orbit_radius(const KeplerOrbit& orb, double u) {
    return orb.a * (1.0 - orb.e * std::cos(u));
}

double true_anomaly(double e, double u) {
    if (!(e >= 0.0 && e < 1.0))
        throw std::invalid_argument("true_anomaly: eccentricity must be in [0,1)");
    if (e == 0.0) return u;
    const double cu = std::cos(u), su = std::sin(u);
    // principal value from both quotient formulas (quadrant safe)
    const double fp = std::atan2(std::sqrt(1.0 - e * e) * su, cu - e);
    // unwrap: f and u advance together within each revolution, |f - u| < pi
    return fp + TWO_PI * std::round((u - fp) / TWO_PI);
}

OrbitPoint orbit_state(const KeplerOrbit& orb, double t) {
    const double u = solve_kepler(orb.e, t);
    const double cu = std::cos(u), su = std::sin(u);
    const double one_me = 1.0 - orb.e * cu;
    OrbitPoint pt;
    pt.r = orb.a * one_me;
    pt.f = true_anomaly(orb.e, u);
    // dr/dt = a e sin(u) * du/dt, du/dt = 1/(1 - e cos u)
    pt.p_r = orb.mu * orb.a * orb.e * su / one_me;
    pt.p_f = orb.p_f();
    return pt;
}

OrbitGeometry orbit_geometry_u(const KeplerOrbit& orb, double u) {
    const double one_me = 1.0 - orb.e * std::cos(u);
    return {orb.a * one_me, true_anomaly(orb.e, u), 1.0 / one_me};
}

OsculatingElements osculating_elements(const std::array<double, 2>& pos,
                                       const std::array<double, 2>& vel,
                                       double G) {
    const double r = std::hypot(pos[0], pos[1]);
    if (!(r > 0.0))
        throw std::invalid_argument("osculating_elements: zero radius");
    const double v2 = vel[0] * vel[0] + vel[1] * vel[1];
    const double h = pos[0] * vel[1] - pos[1] * vel[0];

    OsculatingElements el;
    el.h = h;
    const double inv_a = 2.0 / r - v2 / G;
    if (!(inv_a > 0.0)) {
        el.elliptic = false;
        el.a = 0.0;
        el.e = 0.0;
        el.omega_defined = false;
        return el;
    }
    el.a = 1.0 / inv_a;

    // eccentricity vector e = (v x h)/G - r/|r|; planar, h along z
    const double ex = (vel[1] * h) / G - pos[0] / r;
    const double ey = (-vel[0] * h) / G - pos[1] / r;
    el.e = std::hypot(ex, ey);
    if (el.e < 1e-12) {
        el.omega_defined = false;
        el.omega = 0.0;
    } else {
        el.omega = std::atan2(ey, ex);
        if (el.omega >= 3.14159265358979323846)
            el.omega -= TWO_PI;
    }
    return el;
}

void polar_to_cartesian(double r, double f, double p_r, double p_f, double mu,
                        std::array<double, 2>& pos, std::array<double, 2>& vel) {
    const double cf = std::cos(f), sf = std::sin(f);
    const double rdot = p_r / mu;
    const double fdot = p_f / (mu * r * r);
    pos = {r * cf, r * sf};
    vel = {rdot * cf - r * fdot * sf, rdot * sf + r * fdot * cf};
}

}  // namespace spinspin
