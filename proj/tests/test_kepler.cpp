#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "spinspin/integrator.hpp"
#include "spinspin/kepler.hpp"

using namespace spinspin;

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;
constexpr double TWO_PI = 2.0 * PI;

// independent oracle: bisection on the monotone anomaly residual
double bisect_kepler(double e, double t) {
    double lo = t - e, hi = t + e;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid - e * std::sin(mid) - t < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("anomaly equation: fixed points and degenerate cases") {
    CHECK(solve_kepler(0.0, 1.3) == 1.3);
    CHECK(std::abs(solve_kepler(0.5, PI) - PI) < 1e-14);
    CHECK_THROWS_AS(solve_kepler(1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(solve_kepler(-0.1, 0.3), std::invalid_argument);
}

TEST_CASE("anomaly equation matches the bisection oracle") {
    const double u = solve_kepler(0.1, 1.0);
    CHECK(std::abs(u - bisect_kepler(0.1, 1.0)) < 1e-14);
}

TEST_CASE("anomaly residual below 1e-13 over random draws, branch preserved") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ue(0.0, 0.99), ut(-50.0, 50.0);
    for (int i = 0; i < 10000; ++i) {
        const double e = ue(rng), t = ut(rng);
        const double u = solve_kepler(e, t);
        CHECK(std::abs(u - e * std::sin(u) - t) <= 1e-13);
    }
    // u - t is 2*pi-periodic in t
    const double u0 = solve_kepler(0.4, 0.9);
    const double u7 = solve_kepler(0.4, 0.9 + 7.0 * TWO_PI);
    CHECK(std::abs((u7 - 7.0 * TWO_PI) - u0) < 1e-12);
}

TEST_CASE("eccentric anomaly is strictly increasing in the mean anomaly") {
    for (double e : {0.1, 0.5, 0.9}) {
        double prev = solve_kepler(e, -1.0);
        for (int i = 1; i <= 200; ++i) {
            const double u = solve_kepler(e, -1.0 + i * 0.05);
            CHECK(u > prev);
            prev = u;
        }
    }
}

TEST_CASE("orbit radius") {
    CHECK(orbit_radius({1.0, 0.0, 0.25}, 2.0) == 1.0);
    CHECK(orbit_radius({1.0, 0.3, 0.25}, 0.0) == doctest::Approx(0.7));
    CHECK(orbit_radius({2.0, 0.1, 0.25}, PI / 3.0) == doctest::Approx(1.9));
}

TEST_CASE("true anomaly: quadrants, continuity, trig identity") {
    CHECK(true_anomaly(0.0, 0.7) == 0.7);
    CHECK(std::abs(true_anomaly(0.5, PI) - PI) < 1e-14);
    CHECK(true_anomaly(0.2, PI / 2.0) ==
          doctest::Approx(std::atan2(std::sqrt(1.0 - 0.04), -0.2)));

    // f and u stay in the same revolution; the two quotient formulas agree
    for (double e : {0.0, 0.2, 0.6, 0.95}) {
        double prev_f = true_anomaly(e, -0.5);
        for (int i = 1; i <= 400; ++i) {
            const double u = -0.5 + i * 0.05;
            const double f = true_anomaly(e, u);
            CHECK(f > prev_f);  // continuity (no 2*pi jumps), monotone in u
            CHECK(std::abs(f - u) < PI);
            const double cf = (std::cos(u) - e) / (1.0 - e * std::cos(u));
            const double sf = std::sqrt(1.0 - e * e) * std::sin(u) / (1.0 - e * std::cos(u));
            CHECK(std::abs(std::cos(f) - cf) < 1e-13);
            CHECK(std::abs(std::sin(f) - sf) < 1e-13);
            CHECK(std::abs(sf * sf + cf * cf - 1.0) < 1e-14);
            prev_f = f;
        }
    }
}

TEST_CASE("orbit state at the periapsis and on the circle") {
    const KeplerOrbit orb{1.0, 0.3, 0.25};
    const auto p0 = orbit_state(orb, 0.0);
    CHECK(p0.r == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(p0.f == 0.0);
    CHECK(p0.p_r == 0.0);
    CHECK(p0.p_f == doctest::Approx(0.25 * std::sqrt(0.91)).epsilon(1e-15));

    const KeplerOrbit circ{1.0, 0.0, 0.25};
    for (double t : {0.0, 1.1, 4.8}) {
        const auto p = orbit_state(circ, t);
        CHECK(p.r == 1.0);
        CHECK(p.f == t);
        CHECK(p.p_r == 0.0);
    }
}

TEST_CASE("orbit stateagrees with direct integration of the orbital equations") {
    const KeplerOrbit orb{1.0, 0.1, 0.25};
    const double G = 1.0;  // a^3 in model units
    // polar two-body equations with the Kepler potential only
    auto rhs = [&](double, const double* y, double* dy) {
        const double r = y[0], pr = y[2], pf = y[3];
        dy[0] = pr / orb.mu;
        dy[1] = pf / (orb.mu * r * r);
        dy[2] = pf * pf / (orb.mu * r * r * r) - G * orb.mu / (r * r);
        dy[3] = 0.0;
    };
    std::vector<double> y = {orb.a * (1.0 - orb.e), 0.0, 0.0, orb.p_f()};
    IntegratorConfig cfg;
    REQUIRE(integrate_final(rhs, y, 0.0, 2.0, cfg) == IntegrationStatus::Ok);
    const auto p = orbit_state(orb, 2.0);
    CHECK(std::abs(y[0] - p.r) < 1e-9);
    CHECK(std::abs(y[1] - p.f) < 1e-9);
    CHECK(std::abs(y[2] - p.p_r) < 1e-9);
}

TEST_CASE("orbit symmetry about the periapsis") {
    const KeplerOrbit orb{1.0, 0.35, 0.25};
    for (double t : {0.3, 1.2, 2.8}) {
        const auto fwd = orbit_state(orb, t);
        const auto bwd = orbit_state(orb, TWO_PI - t);
        CHECK(std::abs(fwd.r - bwd.r) < 1e-12);
        CHECK(std::abs(bwd.f - (TWO_PI - fwd.f)) < 1e-12);
    }
}

TEST_CASE("osculating elements: circular point and non-elliptic flag") {
    const auto el = osculating_elements({1.0, 0.0}, {0.0, 1.0}, 1.0);
    CHECK(el.elliptic);
    CHECK(el.a == doctest::Approx(1.0));
    CHECK(el.e == doctest::Approx(0.0).scale(1.0));
    CHECK_FALSE(el.omega_defined);

    const auto hyper = osculating_elements({1.0, 0.0}, {0.0, 2.0}, 1.0);
    CHECK_FALSE(hyper.elliptic);
}

TEST_CASE("osculating round trip over a grid of orbits") {
    for (double a : {0.5, 1.0, 2.0})
        for (double e : {0.0, 0.1, 0.3, 0.7})
            for (double t : {0.3, 1.7, 4.0}) {
                const KeplerOrbit orb{a, e, 0.25};
                const double G = a * a * a;
                const auto p = orbit_state(orb, t);
                std::array<double, 2> pos, vel;
                polar_to_cartesian(p.r, p.f, p.p_r, p.p_f, orb.mu, pos, vel);
                const auto el = osculating_elements(pos, vel, G);
                CHECK(std::abs(el.a - a) < 1e-10);
                CHECK(std::abs(el.e - e) < 1e-10);
                if (e > 0.0) {
                    CHECK(el.omega_defined);
                    CHECK(std::abs(el.omega) < 1e-10);
                }
            }
}

TEST_CASE("osculating eccentricity: vector formula equals the modulus formula") {
    const KeplerOrbit orb{1.0, 0.3, 0.25};
    const double G = 1.0;
    for (double t : {0.4, 1.7, 3.3, 5.9}) {
        const auto p = orbit_state(orb, t);
        std::array<double, 2> pos, vel;
        polar_to_cartesian(p.r, p.f, p.p_r, p.p_f, orb.mu, pos, vel);
        const auto el = osculating_elements(pos, vel, G);
        // e_F = sqrt(1 - r^4 fdot^2 / (G a_F)), the scalar route
        const double r = p.r;
        const double fdot = p.p_f / (orb.mu * r * r);
        const double e_mod = std::sqrt(1.0 - r * r * r * r * fdot * fdot / (G * el.a));
        CHECK(std::abs(el.e - e_mod) < 1e-12);
    }
}

TEST_CASE("invalid orbits are rejected") {
    CHECK_THROWS_AS((KeplerOrbit{1.0, 1.0, 0.25}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((KeplerOrbit{-1.0, 0.1, 0.25}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((KeplerOrbit{1.0, 0.1, 0.3}.validate()), std::invalid_argument);
    const std::array<double, 2> origin{0.0, 0.0}, unit_v{0.0, 1.0};
    CHECK_THROWS_AS(osculating_elements(origin, unit_v, 1.0), std::invalid_argument);
}
