#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "spinspin/params.hpp"

using namespace spinspin;

TEST_CASE("equal bodies give the symmetric mass split") {
    DimensionlessParams p;
    p.C1 = 0.5;
    p.sigma1 = 1e-3;
    const auto phys = to_physical(p);
    CHECK(phys.M1 == doctest::Approx(0.5));
    CHECK(phys.M2 == doctest::Approx(0.5));
}

TEST_CASE("semi-major axis derived from sigma1 for equal bodies") {
    // mu = C1/(3 sigma1 a^2) with mu = 1/4 gives a = sqrt(2/(3 sigma1))
    DimensionlessParams p;
    p.C1 = 0.5;
    p.sigma1 = 1e-3;
    auto phys = to_physical(p);
    CHECK(std::cbrt(phys.G) == doctest::Approx(std::sqrt(2.0 / 3.0e-3)).epsilon(1e-12));

    p.sigma1 = 1e-7;
    phys = to_physical(p);
    CHECK(std::cbrt(phys.G) == doctest::Approx(std::sqrt(2.0 / 3.0e-7)).epsilon(1e-12));
}

TEST_CASE("explicit semi-major axis fixes the mass split") {
    DimensionlessParams p;
    p.C1 = 0.5;
    p.sigma1 = 1e-3;
    p.a = 39.0;  // smaller mu than the equal split
    const auto phys = to_physical(p);
    const double mu = p.C1 / (3.0 * p.sigma1 * 39.0 * 39.0);
    CHECK(phys.M1 * phys.M2 == doctest::Approx(mu).epsilon(1e-12));
    CHECK(phys.M1 <= 0.5);

    p.a = 10.0;  // mu > 1/4: no real mass split
    CHECK_THROWS_AS(to_physical(p), std::invalid_argument);
}

TEST_CASE("round trip dimensionless -> physical -> dimensionless") {
    DimensionlessParams p;
    p.e = 0.06;
    p.C1 = 0.4;
    p.lambda1 = 0.05;
    p.lambda2 = 0.03;
    p.sigma1 = 1e-3;
    p.qhat1 = 2e-4;  // above lambda1*sigma1 so d <= q holds
    p.qhat2 = 1e-4;
    const auto phys = to_physical(p);
    const double a = std::cbrt(phys.G);
    const auto q = to_dimensionless(phys, a, p.e);
    CHECK(q.C1 == doctest::Approx(p.C1).epsilon(1e-12));
    CHECK(q.lambda1 == doctest::Approx(p.lambda1).epsilon(1e-12));
    CHECK(q.lambda2 == doctest::Approx(p.lambda2).epsilon(1e-12));
    CHECK(q.sigma1 == doctest::Approx(p.sigma1).epsilon(1e-12));
    CHECK(q.qhat1 == doctest::Approx(p.qhat1).epsilon(1e-12));
    CHECK(q.qhat2 == doctest::Approx(p.qhat2).epsilon(1e-12));
}

TEST_CASE("spherical body 2 has lambda2 = qhat2 = 0") {
    auto phys = PhysicalParams::make(0.5, 0.5, 0.01, 0.0, 0.02, 0.0, 8.0);
    const auto d = to_dimensionless(phys, 2.0, 0.0);
    CHECK(d.lambda2 == 0.0);
    CHECK(d.qhat2 == 0.0);
    CHECK(d.lambda1 > 0.0);
}

TEST_CASE("identical bodies map to identical dimensionless parameters") {
    auto phys = PhysicalParams::make(0.5, 0.5, 0.01, 0.01, 0.02, 0.02, 27.0);
    const auto d = to_dimensionless(phys, 3.0, 0.1);
    CHECK(d.lambda1 == doctest::Approx(d.lambda2).epsilon(1e-14));
    CHECK(d.qhat1 == doctest::Approx(d.qhat2).epsilon(1e-14));
    CHECK(d.sigma1 == doctest::Approx(d.sigma2()).epsilon(1e-14));
}

TEST_CASE("parameter bounds enforced at construction") {
    // d > C
    CHECK_THROWS_AS(PhysicalParams::make(0.5, 0.5, 0.6, 0.0, 0.7, 0.0, 1.0),
                    std::invalid_argument);
    // q < d
    CHECK_THROWS_AS(PhysicalParams::make(0.5, 0.5, 0.1, 0.0, 0.05, 0.0, 1.0),
                    std::invalid_argument);
    // q > 2C
    CHECK_THROWS_AS(PhysicalParams::make(0.5, 0.5, 0.1, 0.0, 1.5, 0.0, 1.0),
                    std::invalid_argument);
    // the same instance is accepted with warnings when explicitly allowed
    const auto p = PhysicalParams::make(0.5, 0.5, 0.1, 0.0, 1.5, 0.0, 1.0, true);
    CHECK(!p.warnings.empty());
}

TEST_CASE("prolate degenerate d = q accepted with a warning") {
    const auto p = PhysicalParams::make(0.5, 0.5, 0.1, 0.0, 0.1, 0.0, 1.0);
    REQUIRE(p.violations().empty());
    bool flagged = false;
    for (const auto& w : p.warnings)
        if (w.find("prolate") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("collision radius") {
    // equal spheres: 2 * sqrt(5 * 0.5 / (2 * 0.5)) = 2 sqrt(2.5)
    const auto spheres = PhysicalParams::make(0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 1.0);
    CHECK(collision_radius(spheres) == doctest::Approx(2.0 * std::sqrt(2.5)).epsilon(1e-14));

    // d1 > 0 lengthens body 1
    const auto tri = PhysicalParams::make(0.5, 0.5, 0.05, 0.0, 0.05, 0.0, 1.0);
    CHECK(collision_radius(tri) > collision_radius(spheres));

    // never above 2*sqrt(5) under the moment bounds
    const auto extreme = PhysicalParams::make(0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0);
    CHECK(collision_radius(extreme) <= 2.0 * std::sqrt(5.0) + 1e-12);
}

TEST_CASE("stored principal moments stay consistent with d and q") {
    const auto p = PhysicalParams::make(0.4, 0.45, 0.02, 0.01, 0.05, 0.03, 1.0);
    CHECK(p.B1 - p.A1 == doctest::Approx(p.d1).epsilon(1e-14));
    CHECK(2.0 * p.C1 - p.B1 - p.A1 == doctest::Approx(p.q1).epsilon(1e-14));
    CHECK(p.B2 - p.A2 == doctest::Approx(p.d2).epsilon(1e-14));
    CHECK(2.0 * p.C2 - p.B2 - p.A2 == doctest::Approx(p.q2).epsilon(1e-14));
    CHECK(p.M1 * p.sa1 * p.sa1 == doctest::Approx(2.5 * (p.C1 + p.d1)).epsilon(1e-14));
}

TEST_CASE("signed lambda uses |lambda| for the physical oblateness") {
    DimensionlessParams p;
    p.C1 = 0.5;
    p.sigma1 = 1e-3;
    p.lambda1 = -0.05;
    p.qhat1 = 1e-4;  // keep d <= q with |lambda1|*sigma1 = 5e-5
    const auto phys = to_physical(p);
    CHECK(phys.d1 > 0.0);
    const auto back = to_dimensionless(phys, std::cbrt(phys.G), 0.0);
    CHECK(back.lambda1 == doctest::Approx(0.05).epsilon(1e-12));
}
