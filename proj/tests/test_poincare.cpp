#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "spinspin/poincare.hpp"
#include "spinspin/resonance.hpp"

using namespace spinspin;

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;

DimensionlessParams map_params() {
    DimensionlessParams p;
    p.e = 0.06;
    p.C1 = 0.5;
    p.lambda1 = p.lambda2 = 0.05;
    p.sigma1 = 0.01;
    p.qhat1 = p.qhat2 = 0.001;
    return p;
}
}  // namespace

TEST_CASE("angle wrapping conventions") {
    CHECK(wrap_angle(0.3) == 0.3);
    CHECK(wrap_angle(2.0 * PI + 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(wrap_angle(-PI) == doctest::Approx(-PI));
    CHECK(wrap_angle(PI) == doctest::Approx(-PI));  // half-open [-pi, pi)
    CHECK(wrap_angle_pi(PI / 2.0 + 0.1) == doctest::Approx(0.1 - PI / 2.0));
}

TEST_CASE("a converged synchronous pair strobes to a fixed point") {
    auto p = map_params();
    ResonanceSpec spec;
    spec.order = {2, 2, 2, 2};
    spec.flavor = ResonanceFlavor::Balanced;
    const auto sol = shoot_balanced(p, spec, {1.0, 1.0}, ModelKind::KeplerianSpinSpin);
    REQUIRE(sol.converged);

    SpinState s0;
    s0.p1 = p.C1 * sol.v0[0];
    s0.p2 = p.C2() * sol.v0[1];
    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-12;
    const auto [o1, o2] = poincare_map(p, ModelKind::KeplerianSpinSpin, s0, 200, cfg);
    REQUIRE(!o1.truncated);
    REQUIRE(o1.points.size() == 201);
    for (const auto& orb : {o1, o2}) {
        const auto [lo, hi] = ring_extent(orb);
        CHECK(hi - lo < 1e-7);
        for (const auto& pt : orb.points) CHECK(std::abs(pt.first) < 1e-7);
    }
}

TEST_CASE("free rotation keeps the velocity line exactly") {
    DimensionlessParams p;
    p.e = 0.2;
    p.lambda1 = p.lambda2 = 0.0;
    SpinState s0;
    s0.p1 = p.C1 * 0.77;
    s0.p2 = p.C2() * 1.31;
    IntegratorConfig cfg;
    const auto [o1, o2] = poincare_map(p, ModelKind::KeplerianSpinOrbit, s0, 150, cfg);
    for (const auto& pt : o1.points) CHECK(std::abs(pt.second - 0.77) < 1e-10);
    for (const auto& pt : o2.points) CHECK(std::abs(pt.second - 1.31) < 1e-10);
}

TEST_CASE("rotational tori confine spin-orbit map orbits to disjoint velocity bands") {
    DimensionlessParams p;
    p.e = 0.06;
    p.lambda1 = 0.05;
    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-10;

    std::vector<std::pair<double, double>> bands;
    for (double v0 : {0.5, 1.0, 1.5, 2.0}) {
        SpinState s0;
        s0.p1 = p.C1 * v0;
        const auto [o1, o2] = poincare_map(p, ModelKind::KeplerianSpinOrbit, s0, 2000, cfg);
        REQUIRE(!o1.truncated);
        bands.push_back(ring_extent(o1));
    }
    for (std::size_t i = 0; i + 1 < bands.size(); ++i) CHECK(bands[i].second < bands[i + 1].first);
}

TEST_CASE("uncoupled map equals the product of single-body maps") {
    auto p = map_params();
    p.sigma1 = 0.0;
    p.qhat1 = p.qhat2 = 0.0;
    SpinState s0;
    s0.theta1 = 0.2;
    s0.theta2 = -0.4;
    s0.p1 = p.C1 * 1.1;
    s0.p2 = p.C2() * 1.45;
    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-12;
    const auto [o1, o2] = poincare_map(p, ModelKind::KeplerianSpinSpin, s0, 100, cfg);

    SingleSpinSystem b1(p, 1, false), b2(p, 2, false);
    auto s1 = sample_stroboscopic(b1.rhs_fn(), {0.2, p.C1 * 1.1}, 100, cfg);
    auto s2 = sample_stroboscopic(b2.rhs_fn(), {-0.4, p.C2() * 1.45}, 100, cfg);
    REQUIRE(s1.status == IntegrationStatus::Ok);
    REQUIRE(s2.status == IntegrationStatus::Ok);
    for (int k = 0; k <= 100; ++k) {
        CHECK(std::abs(o1.points[k].first - wrap_angle(s1.states[k][0])) < 1e-8);
        CHECK(std::abs(o1.points[k].second - s1.states[k][1] / p.C1) < 1e-8);
        CHECK(std::abs(o2.points[k].first - wrap_angle(s2.states[k][0])) < 1e-8);
        CHECK(std::abs(o2.points[k].second - s2.states[k][1] / p.C2()) < 1e-8);
    }
}

TEST_CASE("map points are independent of the launch sample (semigroup property)") {
    const auto p = map_params();
    SpinState s0;
    s0.p1 = p.C1 * 0.92;
    s0.p2 = p.C2() * 1.05;
    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-12;
    const auto [o1, o2] = poincare_map(p, ModelKind::KeplerianSpinSpin, s0, 40, cfg);

    // relaunch from the 10th sample; poincare_map wraps output angles, so
    // rebuild the unwrapped state from a direct stroboscopic run
    SpinSystem sys(p, ModelKind::KeplerianSpinSpin);
    auto raw = sample_stroboscopic(sys.rhs_fn(), {0.0, 0.0, s0.p1, s0.p2}, 40, cfg);
    SpinState mid;
    mid.theta1 = raw.states[10][0];
    mid.theta2 = raw.states[10][1];
    mid.p1 = raw.states[10][2];
    mid.p2 = raw.states[10][3];
    const auto [m1, m2] = poincare_map(p, ModelKind::KeplerianSpinSpin, mid, 30, cfg);
    for (int k = 0; k <= 30; ++k) {
        CHECK(std::abs(wrap_angle(m1.points[k].first - o1.points[k + 10].first)) < 1e-7);
        CHECK(std::abs(m1.points[k].second - o1.points[k + 10].second) < 1e-7);
    }
}

TEST_CASE("ring extent requires enough points") {
    MapOrbit tiny;
    tiny.points.assign(50, {0.0, 1.0});
    CHECK_THROWS_AS(ring_extent(tiny), std::invalid_argument);
}
