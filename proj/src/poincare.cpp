#include "spinspin/poincare.hpp"

#include <cmath>
#include <stdexcept>

namespace spinspin {

namespace {
constexpr double TWO_PI = 6.283185307179586476925286766559;
constexpr double PI = 3.14159265358979323846264338327950288;
}  // namespace

double wrap_angle(double theta) {
    double w = theta - TWO_PI * std::round(theta / TWO_PI);
    if (w >= PI) w -= TWO_PI;   // round() ties can land on +pi
    if (w < -PI) w += TWO_PI;
    return w;
}

double wrap_angle_pi(double theta) {
    double w = theta - PI * std::round(theta / PI);
    if (w >= PI / 2.0) w -= PI;
    if (w < -PI / 2.0) w += PI;
    return w;
}

std::pair<MapOrbit, MapOrbit> poincare_map(const DimensionlessParams& params, ModelKind kind,
                                           const SpinState& initial, int k_max,
                                           const IntegratorConfig& cfg, bool mod_pi) {
    if (!is_keplerian_kind(kind))
        throw std::invalid_argument("poincare_map: Keplerian kinds only");
    SpinSystem sys(params, kind);
    const double C1 = params.C1, C2 = params.C2();

    const std::vector<double> y0 = {initial.theta1, initial.theta2, initial.p1, initial.p2};
    auto strobe = sample_stroboscopic(sys.rhs_fn(), y0, k_max, cfg);

    MapOrbit o1, o2;
    o1.body = 1;
    o2.body = 2;
    o1.k_max = o2.k_max = k_max;
    o1.initial = o2.initial = initial;
    o1.truncated = o2.truncated = strobe.status != IntegrationStatus::Ok;
    auto wrap = mod_pi ? wrap_angle_pi : wrap_angle;
    for (const auto& s : strobe.states) {
        o1.points.emplace_back(wrap(s[0]), s[2] / C1);
        o2.points.emplace_back(wrap(s[1]), s[3] / C2);
    }
    return {std::move(o1), std::move(o2)};
}

std::pair<double, double> ring_extent(const MapOrbit& orbit) {
    if (orbit.points.size() < 100)
        throw std::invalid_argument("ring_extent: need at least 100 map points");
    double lo = orbit.points.front().second, hi = lo;
    for (const auto& p : orbit.points) {
        lo = std::min(lo, p.second);
        hi = std::max(hi, p.second);
    }
    return {lo, hi};
}

}  // namespace spinspin
