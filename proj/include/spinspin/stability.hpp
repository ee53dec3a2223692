#ifndef SPINSPIN_STABILITY_HPP
#define SPINSPIN_STABILITY_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spinspin/dynamics.hpp"
#include "spinspin/integrator.hpp"
#include "spinspin/kepler.hpp"

namespace spinspin {

enum class StabilityClass {
    Elliptic,
    Hyperbolic,
    ParabolicBand,  // |Tr| within tolerance of 2, or coincident unit-circle
                    // multipliers (no Jordan/Krein sub-classification)
};

struct MonodromyResult {
    int dim = 0;
    Eigen::MatrixXd matrix;  // Phi(t0 + period) with Phi(t0) = identity
    std::vector<std::complex<double>> multipliers;
    StabilityClass cls = StabilityClass::Elliptic;
    bool hyperbolic = false;
    double max_modulus = 0.0;
    double det = 0.0;
    double symplectic_residual = 0.0;  // ||M^T J M - J||_inf
    bool ok = true;                    // integration succeeded
};

/// Monodromy of the single-body variational (Hill) equation along the spin
/// solution with theta(t0) = theta0, dtheta/dt(t0) = v0.
MonodromyResult monodromy_hill(const SingleSpinSystem& sys, double theta0, double v0,
                               double t0, double period, const IntegratorConfig& cfg);

/// Monodromy of the 4-dim linear periodic Hamiltonian system along the
/// two-body Keplerian spin solution started at s0 (s0.t is the start time).
MonodromyResult monodromy_lph(const SpinSystem& sys, const SpinState& s0,
                              double period, const IntegratorConfig& cfg);

/// Monodromy of the 8-dim linearization of the full model along its own
/// integrated trajectory from z0 at t0.
MonodromyResult monodromy_full(const FullSystem& sys, const FullState& z0, double t0,
                               double period, const IntegratorConfig& cfg);

/// Monodromy of the 8-dim linearization of the full Hamiltonian along the
/// Keplerian-model solution (orbital part analytic on orb, spin part
/// integrated from s0). This is the comparison module's "full side".
MonodromyResult monodromy_keplerian_form(const FullSystem& sys, const KeplerOrbit& orb,
                                         const SpinState& s0, double period,
                                         const IntegratorConfig& cfg);

/// Hill trace test. Elliptic iff |Tr| < 2 - tol, Hyperbolic iff |Tr| > 2 + tol,
/// ParabolicBand otherwise.
StabilityClass classify_hill(const Eigen::Matrix2d& M, double tol_parabolic = 1e-6);
StabilityClass classify_hill_trace(double trace, double tol_parabolic = 1e-6);

struct FloquetVerdict {
    bool hyperbolic = false;
    double max_modulus = 0.0;
    bool indeterminate_on_unit_circle = false;  // coincident unit-circle multipliers
};

/// Hyperbolic iff max_k |phi_k| > 1 + eps.
FloquetVerdict classify_floquet(const std::vector<std::complex<double>>& multipliers,
                                double eps = 1e-6);

}  // namespace spinspin

#endif
