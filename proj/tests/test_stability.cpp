#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "spinspin/resonance.hpp"
#include "spinspin/stability.hpp"

using namespace spinspin;

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;
constexpr double TWO_PI = 2.0 * PI;

// reciprocal-conjugate pairing within tolerance
void check_quadruple_symmetry(const std::vector<std::complex<double>>& ms, double tol) {
    for (const auto& m : ms) {
        double best_inv = 1e300, best_conj = 1e300;
        for (const auto& n : ms) {
            best_inv = std::min(best_inv, std::abs(m * n - 1.0));
            best_conj = std::min(best_conj, std::abs(std::conj(m) - n));
        }
        CHECK(best_inv < tol);
        CHECK(best_conj < tol);
    }
}
}  // namespace

TEST_CASE("free single-body tangent flow is parabolic") {
    DimensionlessParams p;
    p.e = 0.2;
    p.lambda1 = 0.0;
    SingleSpinSystem sys(p, 1, false);
    IntegratorConfig cfg;
    const auto mono = monodromy_hill(sys, 0.0, 0.7, 0.0, TWO_PI, cfg);
    REQUIRE(mono.ok);
    CHECK(std::abs(mono.matrix.trace() - 2.0) < 1e-10);
    CHECK(mono.cls == StabilityClass::ParabolicBand);
    CHECK(std::abs(mono.det - 1.0) < 1e-10);
}

TEST_CASE("circular synchronous solution has the closed-form trace") {
    for (double lam : {0.1, 0.5, 2.0}) {
        DimensionlessParams p;
        p.e = 0.0;
        p.lambda1 = lam;
        SingleSpinSystem sys(p, 1, false);
        IntegratorConfig cfg;
        const auto mono = monodromy_hill(sys, 0.0, 1.0, 0.0, TWO_PI, cfg);
        REQUIRE(mono.ok);
        CHECK(std::abs(mono.matrix.trace() - 2.0 * std::cos(TWO_PI * std::sqrt(lam))) < 1e-8);
    }
    // the parabolic anchors and an elliptic point in between
    auto cls_at = [](double lam) {
        DimensionlessParams p;
        p.e = 0.0;
        p.lambda1 = lam;
        SingleSpinSystem sys(p, 1, false);
        IntegratorConfig cfg;
        return monodromy_hill(sys, 0.0, 1.0, 0.0, TWO_PI, cfg).cls;
    };
    CHECK(cls_at(0.25) == StabilityClass::ParabolicBand);
    CHECK(cls_at(1.0) == StabilityClass::ParabolicBand);
    CHECK(cls_at(2.25) == StabilityClass::ParabolicBand);
    CHECK(cls_at(0.5) == StabilityClass::Elliptic);
}

TEST_CASE("trace classification bands") {
    CHECK(classify_hill_trace(-0.54) == StabilityClass::Elliptic);
    CHECK(classify_hill_trace(2.5) == StabilityClass::Hyperbolic);
    CHECK(classify_hill_trace(-2.0 + 1e-9) == StabilityClass::ParabolicBand);
    CHECK(classify_hill_trace(2.0 - 1e-3, 1e-6) == StabilityClass::Elliptic);
}

TEST_CASE("monodromy over two periods is the square of one period") {
    DimensionlessParams p;
    p.e = 0.06;
    p.lambda1 = 0.05;
    const auto sol = shoot_balanced(p, []{
        ResonanceSpec s;
        s.order = {3, 2, 0, 0};
        s.flavor = ResonanceFlavor::Balanced;
        return s;
    }(), {1.5}, ModelKind::KeplerianSpinOrbit);
    REQUIRE(sol.converged);
    SingleSpinSystem sys(p, 1, false);
    IntegratorConfig cfg;
    const auto one = monodromy_hill(sys, 0.0, sol.v0[0], 0.0, TWO_PI, cfg);
    const auto two = monodromy_hill(sys, 0.0, sol.v0[0], 0.0, 2.0 * TWO_PI, cfg);
    CHECK((two.matrix - one.matrix * one.matrix).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("free coupled tangent flow has unit multipliers") {
    DimensionlessParams p;
    p.e = 0.1;
    p.lambda1 = p.lambda2 = 0.0;
    p.sigma1 = 0.01;
    SpinSystem sys(p, ModelKind::KeplerianSpinSpin);
    IntegratorConfig cfg;
    SpinState s0;
    s0.p1 = p.C1 * 0.8;
    s0.p2 = p.C2() * 1.3;
    const auto mono = monodromy_lph(sys, s0, TWO_PI, cfg);
    REQUIRE(mono.ok);
    for (const auto& m : mono.multipliers) CHECK(std::abs(m - 1.0) < 1e-9);
    const auto fl = classify_floquet(mono.multipliers);
    CHECK(!fl.hyperbolic);
    CHECK(fl.max_modulus == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fl.indeterminate_on_unit_circle);
}

TEST_CASE("spherical bodies: the full monodromy is the Kepler block, all multipliers 1") {
    DimensionlessParams p;
    p.e = 0.1;
    p.sigma1 = 1e-2;
    const auto phys = to_physical(p);
    FullSystem sys(phys, PotentialTruncation::V2V4, true);
    KeplerOrbit orb{std::cbrt(phys.G), p.e, phys.M1 * phys.M2};
    SpinState s0;
    s0.p1 = phys.C1 * 1.0;
    s0.p2 = phys.C2 * 1.0;
    IntegratorConfig cfg;
    const auto mono = monodromy_keplerian_form(sys, orb, s0, TWO_PI, cfg);
    REQUIRE(mono.ok);
    for (const auto& m : mono.multipliers) CHECK(std::abs(m - 1.0) < 1e-6);
    CHECK(mono.symplectic_residual < 1e-7);
}

TEST_CASE("symplectic residual and multiplier symmetry across dimensions") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ue(0.0, 0.3), ul(0.01, 0.4);
    IntegratorConfig cfg;

    for (int rep = 0; rep < 6; ++rep) {
        DimensionlessParams p;
        p.e = ue(rng);
        p.C1 = 0.5;
        p.lambda1 = ul(rng);
        p.lambda2 = ul(rng);
        p.sigma1 = 1e-3;
        p.qhat1 = p.qhat2 = 1e-3;

        // dim 2
        ResonanceSpec s1;
        s1.order = {3, 2, 0, 0};
        s1.flavor = ResonanceFlavor::Balanced;
        const auto sol1 = shoot_balanced(p, s1, {1.5}, ModelKind::KeplerianSpinOrbit);
        if (sol1.converged) {
            SingleSpinSystem sys(p, 1, false);
            const auto mono = monodromy_hill(sys, 0.0, sol1.v0[0], 0.0, TWO_PI, cfg);
            CHECK(mono.symplectic_residual <= 1e-7);
            CHECK(std::abs(mono.det - 1.0) <= 1e-8);
            check_quadruple_symmetry(mono.multipliers, 1e-6);
        }

        // dim 4
        ResonanceSpec s2;
        s2.order = {2, 2, 3, 2};
        s2.flavor = ResonanceFlavor::Balanced;
        const auto sol2 = shoot_balanced(p, s2, {1.0, 1.5}, ModelKind::KeplerianSpinSpin);
        if (sol2.converged) {
            SpinSystem sys(p, ModelKind::KeplerianSpinSpin);
            SpinState st;
            st.p1 = p.C1 * sol2.v0[0];
            st.p2 = p.C2() * sol2.v0[1];
            const auto mono = monodromy_lph(sys, st, TWO_PI, cfg);
            CHECK(mono.symplectic_residual <= 1e-7);
            CHECK(std::abs(mono.det - 1.0) <= 1e-8);
            check_quadruple_symmetry(mono.multipliers, 1e-6);

            // dim 8 along the same solution
            const auto phys = to_physical(p, true);
            FullSystem full(phys, PotentialTruncation::V2V4, true);
            KeplerOrbit orb{std::cbrt(phys.G), p.e, phys.M1 * phys.M2};
            const auto m8 = monodromy_keplerian_form(full, orb, st, TWO_PI, cfg);
            CHECK(m8.symplectic_residual <= 1e-7);
            check_quadruple_symmetry(m8.multipliers, 1e-5);
        }
    }
}

TEST_CASE("hyperbolic verdicts from the multiplier moduli") {
    const auto on_circle = std::vector<std::complex<double>>{
        {0.5, std::sqrt(0.75)}, {0.5, -std::sqrt(0.75)}, {1.0, 0.0}, {1.0, 0.0}};
    auto fl = classify_floquet(on_circle);
    CHECK(!fl.hyperbolic);
    CHECK(fl.max_modulus == doctest::Approx(1.0));

    const auto off = std::vector<std::complex<double>>{
        {1.09, 0.0}, {0.9174, 0.0}, {0.5, std::sqrt(0.75)}, {0.5, -std::sqrt(0.75)}};
    fl = classify_floquet(off);
    CHECK(fl.hyperbolic);
    CHECK(fl.max_modulus == doctest::Approx(1.09));
}
