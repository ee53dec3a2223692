#ifndef SPINSPIN_DYNAMICS_HPP
#define SPINSPIN_DYNAMICS_HPP

#include <array>

#include "spinspin/integrator.hpp"
#include "spinspin/kepler.hpp"
#include "spinspin/params.hpp"
#include "spinspin/potential.hpp"

namespace spinspin {

/// Phase-space point of the Keplerian spin systems. Angles are stored
/// unwrapped; consumers wrap for display.
struct SpinState {
    double t = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
    double p1 = 0.0, p2 = 0.0;  // p_j = C_j * dtheta_j/dt
};

/// Point of the 8-dimensional full system, z = (r, f, th1, th2, p_r, p_f, p1, p2).
struct FullState {
    double r = 1.0, f = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
    double p_r = 0.0, p_f = 0.0;
    double p1 = 0.0, p2 = 0.0;

    std::array<double, 8> to_array() const {
        return {r, f, theta1, theta2, p_r, p_f, p1, p2};
    }
    static FullState from_array(const double* z) {
        return {z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7]};
    }
};

enum class ModelKind {
    KeplerianSpinOrbit,  // two uncoupled driven pendulum equations (1/r^3)
    KeplerianSpinSpin,   // coupled system with the 1/r^5 terms
    SphericalCompanion,  // body 1 only, body 2 spherical (single 1/r^5 pendulum)
    FullSpinOrbit,       // 8-dim Hamiltonian flow, V_per = V2
    FullSpinSpin,        // 8-dim Hamiltonian flow, V_per = V2 + V4
    KeplerianFullForm,   // full form with the perturbing force removed from
                         // the orbital momenta (orbit stays Keplerian)
};

bool is_keplerian_kind(ModelKind k);
bool is_full_kind(ModelKind k);

/// Keplerian spin dynamics of both bodies; state vector (th1, th2, p1, p2),
/// time is the mean anomaly of the fixed 2*pi-periodic orbit.
class SpinSystem {
  public:
    SpinSystem(const DimensionlessParams& p, ModelKind kind);

    const DimensionlessParams& params() const { return p_; }
    ModelKind kind() const { return kind_; }
    static constexpr int dim = 4;

    void rhs(double t, const double* y, double* dy) const;
    RhsFn rhs_fn() const;

    /// K_{ji} = d(-dp_j/dt)/d(theta_i), the angle block of the Hessian of the
    /// spin Hamiltonian; symmetric by the sigma constraint.
    void torque_jacobian(double t, double th1, double th2, double K[2][2]) const;

    /// Tangent flow d/dt (y_th, y_p) along a base angle configuration.
    void tangent_rhs(double t, double th1, double th2, const double* y, double* dy) const;

  private:
    DimensionlessParams p_;
    ModelKind kind_;
    bool coupled_;
    double C_[2], lambda_[2], sigma_[2], qhat_[2];
};

/// Single-body Keplerian spin dynamics (spin-orbit, or body 1 with a
/// spherical companion when the 1/r^5 flag is set); state (theta, p).
class SingleSpinSystem {
  public:
    /// body selects which body's (lambda, sigma, qhat) drive the equation.
    SingleSpinSystem(const DimensionlessParams& p, int body, bool with_r5_terms);

    static constexpr int dim = 2;
    double C() const { return C_; }
    double lambda() const { return lambda_; }

    void rhs(double t, const double* y, double* dy) const;
    RhsFn rhs_fn() const;

    /// ddot(y) + hill_coefficient(t, theta*(t)) y = 0 is the first variation.
    double hill_coefficient(double t, double theta) const;
    void tangent_rhs(double t, double theta, const double* y, double* dy) const;

  private:
    double e_, C_, lambda_, sigma_, qhat_self_, qhat_other_, dhat_self_;
    bool r5_;
};

/// The 8-dimensional models: Hamilton's equations of the full Hamiltonian,
/// optionally in the Keplerian form (perturbing force removed from dp_r, dp_f).
class FullSystem {
  public:
    FullSystem(const PhysicalParams& p, PotentialTruncation trunc, bool keplerian_form);

    static constexpr int dim = 8;
    const PhysicalParams& params() const { return p_; }
    const Potential& potential() const { return pot_; }
    double mu() const { return mu_; }

    void rhs(double t, const double* z, double* dz) const;
    RhsFn rhs_fn() const;

    double hamiltonian(const double* z) const;
    double total_angular_momentum(const double* z) const;  // P_f = p_f + p1 + p2

    /// Hessian of the full Hamiltonian at z (symmetric 8x8, row-major).
    void hessian(const double* z, double* H) const;

    /// Tangent flow dy/dt = J4 Hess(H)(z) y.
    void tangent_rhs(const double* z, const double* y, double* dy) const;

  private:
    PhysicalParams p_;
    Potential pot_;
    double mu_;
    bool keplerian_form_;
};

FullSystem make_full_system(const PhysicalParams& p, ModelKind kind,
                            PotentialTruncation keplerian_form_trunc = PotentialTruncation::V2V4);

/// Spec-level single evaluations.
SpinState spin_rhs(const DimensionlessParams& p, ModelKind kind, const SpinState& s);
FullState full_rhs(const PhysicalParams& p, ModelKind kind, const FullState& z);

/// Appendix-style eccentric-anomaly formulation of the spin-spin problem:
/// state (x1, x2, y1, y2) with x_j(u) = theta_j(u - e sin u), y_j = dx_j/du.
class EccentricSpinSystem {
  public:
    explicit EccentricSpinSystem(const DimensionlessParams& p) : p_(p) {}
    static constexpr int dim = 4;
    void rhs(double u, const double* x, double* dx) const;
    RhsFn rhs_fn() const;

  private:
    DimensionlessParams p_;
};

}  // namespace spinspin

#endif
