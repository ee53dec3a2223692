#ifndef SPINSPIN_KEPLER_HPP
#define SPINSPIN_KEPLER_HPP

#include <array>

namespace spinspin {

/// Fixed two-body ellipse in the normalized units of the model
/// (orbital period 2*pi, so the mean motion is 1 and t is the mean anomaly).
struct KeplerOrbit {
    double a  = 1.0;   // semi-major axis
    double e  = 0.0;   // eccentricity, 0 <= e < 1
    double mu = 0.25;  // reduced mass M1*M2, in (0, 1/4]

    // orbital angular momentum, constant along the orbit
    double p_f() const;
    // throws std::invalid_argument on invalid (a, e, mu)
    void validate() const;
};

/// Solves t = u - e*sin(u) for the eccentric anomaly u.
/// Newton from u0 = t + e*sin(t), bisection fallback; u - t is 2*pi-periodic
/// in t and the residual is below 1e-13 after branch reduction.
double solve_kepler(double e, double t);

/// r = a*(1 - e*cos u)
double orbit_radius(const KeplerOrbit& orb, double u);

/// True anomaly from the eccentric anomaly, unwrapped so that f and u stay
/// in the same revolution (f(0) = 0, f(pi) = pi).
double true_anomaly(double e, double u);

/// Orbital state (r, f, p_r, p_f) at mean anomaly t for the initial
/// conditions r(0) = a(1-e), f(0) = 0, p_r(0) = 0.
struct OrbitPoint {
    double r, f, p_r, p_f;
};
OrbitPoint orbit_state(const KeplerOrbit& orb, double t);

/// (r, f) and the factor a/r at eccentric anomaly u; cheaper entry point for
/// the eccentric-anomaly formulation.
struct OrbitGeometry {
    double r, f, a_over_r;
};
OrbitGeometry orbit_geometry_u(const KeplerOrbit& orb, double u);

/// Instantaneous Keplerian elements fitted to a planar position/velocity.
struct OsculatingElements {
    double a = 0.0;      // osculating semi-major axis
    double e = 0.0;      // osculating eccentricity (>= 0)
    double omega = 0.0;  // argument of periapsis in [-pi, pi); see omega_defined
    double h = 0.0;      // angular momentum per unit mass, r x v
    bool elliptic = true;        // false when 2/r - v^2/G <= 0
    bool omega_defined = true;   // false when e < 1e-12 (omega is meaningless)
};

/// pos, vel are the relative position/velocity in the inertial frame,
/// G the gravitational parameter of the relative motion (G = a^3 in model units).
OsculatingElements osculating_elements(const std::array<double, 2>& pos,
                                       const std::array<double, 2>& vel,
                                       double G);

/// Inertial position/velocity of the relative motion for the orbital state
/// (r, f, p_r, p_f) with reduced mass mu.
void polar_to_cartesian(double r, double f, double p_r, double p_f, double mu,
                        std::array<double, 2>& pos, std::array<double, 2>& vel);

}  // namespace spinspin

#endif
