#ifndef SPINSPIN_PARAMS_HPP
#define SPINSPIN_PARAMS_HPP

#include <optional>
#include <string>
#include <vector>

namespace spinspin {

/// Full-model parameter set in normalized units (M1+M2 = 1, C1+C2 = 1,
/// orbital period 2*pi, G = a^3).
struct PhysicalParams {
    double M1 = 0.5, M2 = 0.5;  // masses
    double C1 = 0.5, C2 = 0.5;  // polar moments of inertia
    double A1 = 0.5, B1 = 0.5;  // remaining principal moments, A <= B <= C
    double A2 = 0.5, B2 = 0.5;
    double d1 = 0.0, d2 = 0.0;  // d_j = B_j - A_j
    double q1 = 0.0, q2 = 0.0;  // q_j = 2C_j - B_j - A_j
    double G = 1.0;             // gravitational constant (= a^3)
    double sa1 = 0.0, sa2 = 0.0;  // longest semi-axes, M_j sa_j^2 = (5/2)(C_j + d_j)

    std::vector<std::string> warnings;  // non-fatal constraint notes

    /// Builds the set from the independent parameters (mass split, polar
    /// moments, d_j, q_j, G); A_j, B_j, semi-axes are derived. Throws on
    /// violated parameter bounds unless allow_unphysical, in which case the
    /// violations are recorded as warnings.
    static PhysicalParams make(double M1, double C1, double d1, double d2,
                               double q1, double q2, double G,
                               bool allow_unphysical = false);

    /// Violated parameter inequalities, empty when the set is admissible.
    std::vector<std::string> violations() const;
};

/// Parameter set of the Keplerian spin models:
/// (e; C1, lambda1, lambda2, sigma1, qhat1, qhat2), optionally with the
/// semi-major axis needed to recover the full-model parameters.
struct DimensionlessParams {
    double e = 0.0;        // orbit eccentricity
    double C1 = 0.5;       // polar moment of body 1 (C2 = 1 - C1)
    double lambda1 = 0.0;  // equatorial oblateness; may be negative (the
    double lambda2 = 0.0;  // type-pi/2 boundary conditions at -lambda)
    double sigma1 = 0.0;   // moment ratio of body 1; sigma2 = sigma1*C2/C1
    double qhat1 = 0.0;    // flattening ratios
    double qhat2 = 0.0;
    std::optional<double> a;  // semi-major axis; derived on conversion if unset

    double C2() const { return 1.0 - C1; }
    double sigma2() const { return sigma1 * C2() / C1; }

    void validate() const;  // throws std::invalid_argument
};

/// Recovers the full-model parameters. mu = C1/(3*sigma1*a^2); when p.a is
/// unset, a is derived by imposing the equal-mass split mu = 1/4. M1 <= 1/2
/// by convention. Throws when mu > 1/4 (no real mass split) or, unless
/// allow_unphysical, when the derived moments violate the parameter bounds.
PhysicalParams to_physical(const DimensionlessParams& p, bool allow_unphysical = false);

/// Inverse conversion at the given orbit (a, e).
DimensionlessParams to_dimensionless(const PhysicalParams& p, double a, double e);

/// sa1 + sa2: the bodies touch when the orbital radius drops to this value.
double collision_radius(const PhysicalParams& p);

}  // namespace spinspin

#endif
