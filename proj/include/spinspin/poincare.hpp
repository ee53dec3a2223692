#ifndef SPINSPIN_POINCARE_HPP
#define SPINSPIN_POINCARE_HPP

#include <utility>
#include <vector>

#include "spinspin/dynamics.hpp"
#include "spinspin/integrator.hpp"

namespace spinspin {

/// Stroboscopic samples of one body's (theta, dtheta/dt) projection at
/// t = 2*pi*k; theta wrapped to [-pi, pi) at output only.
struct MapOrbit {
    int body = 1;
    std::vector<std::pair<double, double>> points;  // (theta_wrapped, theta_dot)
    int k_max = 0;
    SpinState initial;
    bool truncated = false;  // integration failed before k_max
};

/// Wrap to [-pi, pi) by subtracting the nearest multiple of 2*pi.
double wrap_angle(double theta);
/// Additional ellipsoid identification theta ~ theta + pi, to [-pi/2, pi/2).
double wrap_angle_pi(double theta);

/// Stroboscopic Poincare-map projections of both bodies from the initial
/// state; mod_pi applies the ellipsoid pi-identification when requested.
std::pair<MapOrbit, MapOrbit> poincare_map(const DimensionlessParams& params, ModelKind kind,
                                           const SpinState& initial, int k_max,
                                           const IntegratorConfig& cfg, bool mod_pi = false);

/// (theta_dot_min, theta_dot_max) over the orbit's samples; requires at least
/// 100 points.
std::pair<double, double> ring_extent(const MapOrbit& orbit);

}  // namespace spinspin

#endif
