#ifndef SPINSPIN_POTENTIAL_HPP
#define SPINSPIN_POTENTIAL_HPP

#include <array>
#include <utility>
#include <vector>

#include "spinspin/params.hpp"

namespace spinspin {

enum class PotentialTruncation {
    V0,    // Kepler only
    V2,    // spin-orbit coupling, 1/r^3
    V2V4,  // spin-spin coupling, 1/r^5
};

/// One additive piece coeff * r^rpow * cos(nf*f + n1*theta1 + n2*theta2).
/// Every potential in the hierarchy is a short sum of these, which makes
/// gradients and Hessians mechanical.
struct PotentialTerm {
    double coeff;
    int rpow;  // -1, -3 or -5
    int nf, n1, n2;
};

std::vector<PotentialTerm> potential_terms(const PhysicalParams& p,
                                           PotentialTruncation trunc);

/// Symmetric 4x4 matrix of second derivatives in (r, f, theta1, theta2).
using Hess4 = std::array<std::array<double, 4>, 4>;

class Potential {
  public:
    Potential(const PhysicalParams& p, PotentialTruncation trunc)
        : terms_(potential_terms(p, trunc)) {}

    double value(double r, double f, double th1, double th2) const;
    // (dV/dr, dV/df, dV/dth1, dV/dth2)
    std::array<double, 4> grad(double r, double f, double th1, double th2) const;
    Hess4 hess(double r, double f, double th1, double th2) const;

    /// Value and gradient of the perturbing part only (terms with 1/r^3 and
    /// 1/r^5); used by the Keplerian-form equations that subtract it.
    std::array<double, 4> grad_perturbation(double r, double f, double th1,
                                            double th2) const;

    const std::vector<PotentialTerm>& terms() const { return terms_; }

  private:
    std::vector<PotentialTerm> terms_;
};

double eval_V(const PhysicalParams& p, PotentialTruncation trunc, double r,
              double f, double th1, double th2);
std::array<double, 4> grad_V(const PhysicalParams& p, PotentialTruncation trunc,
                             double r, double f, double th1, double th2);

/// Dimensionless torque functions of the eccentric-anomaly formulation:
/// d(theta_j)/dt momenta evolve as C_j dd(theta_j) = -(a/r)^5 (lambda_j C_j/2) F_j.
/// u is the eccentric anomaly, x1/x2 the rotation angles.
std::pair<double, double> eval_F12(const DimensionlessParams& p, double u,
                                   double x1, double x2);

/// One term of the eccentricity expansion of V2/V4:
/// coeff * e^order * cos(kt*t + n1*theta1 + n2*theta2) (coeff already includes
/// the parameter product and the 1/a^3 or 1/a^5 factor).
struct SeriesTerm {
    int order;  // power of e: 0, 1 or 2
    double coeff;
    int kt, n1, n2;
};

std::vector<SeriesTerm> series_terms_V2(const PhysicalParams& p);
std::vector<SeriesTerm> series_terms_V4(const PhysicalParams& p);

/// Eccentricity expansion of (V2, V4) truncated at e^order, order in {0,1,2}.
/// Intended as a cross-check around small e (the expansion degrades above
/// e ~ 0.3); t is the mean anomaly.
std::pair<double, double> series_V(const PhysicalParams& p, double e, double t,
                                   double th1, double th2, int order);

}  // namespace spinspin

#endif
