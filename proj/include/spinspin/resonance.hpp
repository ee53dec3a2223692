#ifndef SPINSPIN_RESONANCE_HPP
#define SPINSPIN_RESONANCE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinspin/dynamics.hpp"
#include "spinspin/integrator.hpp"
#include "spinspin/params.hpp"

namespace spinspin {

enum class ResonanceFlavor { Standard, Balanced };

/// Resonance order (m1:n1, m2:n2); n2 = 0 marks a single-body problem.
struct ResonanceOrder {
    int m1 = 1, n1 = 1;
    int m2 = 0, n2 = 0;
    bool two_body() const { return n2 != 0; }
};

/// Which reversing-symmetry fixed set the orbit crosses:
/// alpha in {0, pi} (periapsis/apoapsis), beta_j in {0, pi/2}.
struct ResonanceTypeTag {
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

struct ResonanceSpec {
    ResonanceOrder order;
    ResonanceFlavor flavor = ResonanceFlavor::Balanced;
    ResonanceTypeTag type;

    void validate() const;  // lattice values; Balanced => n_j = 2
    /// Shooting horizon: pi for balanced, n*pi for standard.
    double horizon() const;
    /// Boundary target theta_j(alpha + horizon) - beta_j.
    double target_increment(int body) const;
    std::string str() const;
};

struct ResonanceSolution {
    ResonanceSpec spec;
    DimensionlessParams params;
    ModelKind kind = ModelKind::KeplerianSpinOrbit;
    std::vector<double> v0;  // dtheta_j/dt at t = alpha (size 1 or 2)
    double residual = 1e300;
    bool converged = false;
    bool at_bifurcation = false;  // shooting Jacobian near-singular
    double jac_det = 0.0;         // boundary-map Jacobian determinant at v0
};

struct ShootOptions {
    IntegratorConfig integ;
    int max_newton = 30;
    double tol = 1e-12;            // Newton target on the boundary defect
    double converged_tol = 1e-10;  // threshold for the converged flag
    double singular_factor = 1e-8; // |det J| < factor * scale(J) flags a fold
};

/// Newton shooting on the balanced Dirichlet conditions
/// theta_j(0) = beta_j, theta_j(pi) = beta_j + m_j*pi/2.
ResonanceSolution shoot_balanced(const DimensionlessParams& params, const ResonanceSpec& spec,
                                 const std::vector<double>& v_guess, ModelKind kind,
                                 const ShootOptions& opt = {});

/// Newton shooting on the standard conditions
/// theta_j(alpha) = beta_j, theta_j(alpha + n*pi) = beta_j + m_j*pi
/// (two-body orders must share n).
ResonanceSolution shoot_standard(const DimensionlessParams& params, const ResonanceSpec& spec,
                                 const std::vector<double>& v_guess, ModelKind kind,
                                 const ShootOptions& opt = {});

/// All solutions of a single-body balanced resonance found by the gamma-scan:
/// initial data theta(pi) = beta + m*pi/2, dtheta/dt(pi) = gamma, integrated
/// back to t = 0; roots of theta(0) - beta are bracketed on the grid and
/// polished by Newton. Results are ordered by gamma.
std::vector<ResonanceSolution> enumerate_solutions(const DimensionlessParams& params,
                                                   const ResonanceSpec& spec, ModelKind kind,
                                                   double gamma_min, double gamma_max,
                                                   int gamma_steps,
                                                   const ShootOptions& opt = {});

/// Default gamma-scan window around the resonant velocity m/2.
std::pair<double, double> default_gamma_range(const ResonanceSpec& spec);

struct ContinuationResult {
    std::vector<ResonanceSolution> path;  // converged solutions, start to end
    bool fold = false;                    // terminated at a Jacobian singularity
    bool completed = false;               // reached the target parameters
};

/// Linear parameter homotopy with Newton re-convergence per step and
/// step-halving on failure; stops with the fold flag at a detected
/// singularity of the shooting Jacobian.
ContinuationResult continue_solution(const ResonanceSolution& start,
                                     const DimensionlessParams& target, int steps,
                                     const ShootOptions& opt = {});

/// Resonant angle psi^{m:n}(t) = m t - n theta (mean-anomaly variant) or
/// m f(t;e) - n theta (true-anomaly variant of the comparison diagnostics).
double resonant_angle(int m, int n, double t, double theta, bool true_anomaly_variant,
                      double e);

/// psi along an integrated trajectory; theta_index selects the state component.
std::vector<std::pair<double, double>> resonant_angle_series(
    int m, int n, const Trajectory& traj, int theta_index, bool true_anomaly_variant,
    double e);

/// Exact rational, used for the frequency-vector construction.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct DiophantineResult {
    std::array<double, 3> omega{};  // (1, omega1, omega2)
    double alpha = 0.0;             // the cubic's real root used
    double certificate = 0.0;       // min over 0<|k|<=K of |k.omega| |k|^2
    std::array<int, 3> worst_k{};   // argmin k
    int K = 50;
    bool resonant = false;          // some |k.omega| vanished within K
};

/// Frequency vector (1, omega1, omega2) = (1, b + A (alpha, alpha^2)) from a
/// real root alpha of an irreducible integer cubic, with the empirical
/// Diophantine constant at exponent xi = 2 scanned up to |k|_inf <= K.
/// Throws on det A = 0 or a rationally reducible cubic.
DiophantineResult diophantine_omega(const std::array<Rational, 2>& b,
                                    const std::array<std::array<Rational, 2>, 2>& A,
                                    const std::array<std::int64_t, 4>& cubic,
                                    int K = 50);

/// Certificate scan alone, for externally supplied frequency vectors
/// (rational ones are flagged resonant when some |k.omega| vanishes).
DiophantineResult diophantine_certificate(const std::array<double, 3>& omega, int K = 50);

}  // namespace spinspin

#endif
