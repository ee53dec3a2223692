#include "spinspin/stability.hpp"

#include <cmath>

namespace spinspin {

namespace {

// standard symplectic form J for dim 2l
Eigen::MatrixXd sympl(int dim) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
    const int l = dim / 2;
    for (int i = 0; i < l; ++i) {
        J(i, l + i) = 1.0;
        J(l + i, i) = -1.0;
    }
    return J;
}

void finalize(MonodromyResult& res, double tol_parabolic = 1e-6, double eps = 1e-6) {
    const int n = res.dim;
    res.det = res.matrix.determinant();
    const Eigen::MatrixXd J = sympl(n);
    res.symplectic_residual =
        (res.matrix.transpose() * J * res.matrix - J).cwiseAbs().maxCoeff();

    Eigen::EigenSolver<Eigen::MatrixXd> es(res.matrix);
    res.multipliers.clear();
    for (int i = 0; i < n; ++i) res.multipliers.push_back(es.eigenvalues()(i));

    const auto fl = classify_floquet(res.multipliers, eps);
    res.hyperbolic = fl.hyperbolic;
    res.max_modulus = fl.max_modulus;
    if (n == 2) {
        res.cls = classify_hill_trace(res.matrix.trace(), tol_parabolic);
    } else if (fl.hyperbolic) {
        res.cls = StabilityClass::Hyperbolic;
    } else if (fl.indeterminate_on_unit_circle) {
        res.cls = StabilityClass::ParabolicBand;
    } else {
        res.cls = StabilityClass::Elliptic;
    }
}

}  // namespace

MonodromyResult monodromy_hill(const SingleSpinSystem& sys, double theta0, double v0,
                               double t0, double period, const IntegratorConfig& cfg) {
    // state: (theta, p, Y[0..3]) with Y columns of the (y, dy) tangent matrix
    auto rhs = [&sys](double t, const double* y, double* dy) {
        sys.rhs(t, y, dy);
        const double c = sys.hill_coefficient(t, y[0]);
        dy[2] = y[4];  // d/dt y-row
        dy[3] = y[5];
        dy[4] = -c * y[2];  // d/dt ydot-row
        dy[5] = -c * y[3];
    };
    std::vector<double> y = {theta0, sys.C() * v0, 1.0, 0.0, 0.0, 1.0};
    const auto status = integrate_final(rhs, y, t0, t0 + period, cfg);

    MonodromyResult res;
    res.dim = 2;
    res.ok = status == IntegrationStatus::Ok;
    res.matrix = Eigen::Matrix2d{{y[2], y[3]}, {y[4], y[5]}};
    finalize(res);
    return res;
}

MonodromyResult monodromy_lph(const SpinSystem& sys, const SpinState& s0,
                              double period, const IntegratorConfig& cfg) {
    auto rhs = [&sys](double t, const double* y, double* dy) {
        sys.rhs(t, y, dy);
        for (int col = 0; col < 4; ++col) {
            double yc[4], dyc[4];
            for (int i = 0; i < 4; ++i) yc[i] = y[4 + 4 * i + col];
            sys.tangent_rhs(t, y[0], y[1], yc, dyc);
            for (int i = 0; i < 4; ++i) dy[4 + 4 * i + col] = dyc[i];
        }
    };
    std::vector<double> y(20, 0.0);
    y[0] = s0.theta1;
    y[1] = s0.theta2;
    y[2] = s0.p1;
    y[3] = s0.p2;
    for (int i = 0; i < 4; ++i) y[4 + 4 * i + i] = 1.0;
    const auto status = integrate_final(rhs, y, s0.t, s0.t + period, cfg);

    MonodromyResult res;
    res.dim = 4;
    res.ok = status == IntegrationStatus::Ok;
    res.matrix = Eigen::MatrixXd(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) res.matrix(i, j) = y[4 + 4 * i + j];
    finalize(res);
    return res;
}

namespace {

MonodromyResult monodromy_dim8(const RhsFn& rhs, std::vector<double>& y, double t0,
                               double period, const IntegratorConfig& cfg, int base_dim) {
    const auto status = integrate_final(rhs, y, t0, t0 + period, cfg);
    MonodromyResult res;
    res.dim = 8;
    res.ok = status == IntegrationStatus::Ok;
    res.matrix = Eigen::MatrixXd(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) res.matrix(i, j) = y[base_dim + 8 * i + j];
    finalize(res);
    return res;
}

}  // namespace

MonodromyResult monodromy_full(const FullSystem& sys, const FullState& z0, double t0,
                               double period, const IntegratorConfig& cfg) {
    auto rhs = [&sys](double t, const double* y, double* dy) {
        sys.rhs(t, y, dy);
        for (int col = 0; col < 8; ++col) {
            double yc[8], dyc[8];
            for (int i = 0; i < 8; ++i) yc[i] = y[8 + 8 * i + col];
            sys.tangent_rhs(y, yc, dyc);
            for (int i = 0; i < 8; ++i) dy[8 + 8 * i + col] = dyc[i];
        }
    };
    std::vector<double> y(8 + 64, 0.0);
    const auto z = z0.to_array();
    for (int i = 0; i < 8; ++i) y[i] = z[i];
    for (int i = 0; i < 8; ++i) y[8 + 8 * i + i] = 1.0;
    return monodromy_dim8(rhs, y, t0, period, cfg, 8);
}

MonodromyResult monodromy_keplerian_form(const FullSystem& sys, const KeplerOrbit& orb,
                                         const SpinState& s0, double period,
                                         const IntegratorConfig& cfg) {
    // base: spin block integrated, orbital block analytic on the fixed ellipse
    SpinSystem spin(to_dimensionless(sys.params(), orb.a, orb.e), ModelKind::KeplerianSpinSpin);
    auto rhs = [&sys, &spin, orb](double t, const double* y, double* dy) {
        spin.rhs(t, y, dy);
        const auto op = orbit_state(orb, t);
        double z[8] = {op.r, op.f, y[0], y[1], op.p_r, op.p_f, y[2], y[3]};
        for (int col = 0; col < 8; ++col) {
            double yc[8], dyc[8];
            for (int i = 0; i < 8; ++i) yc[i] = y[4 + 8 * i + col];
            sys.tangent_rhs(z, yc, dyc);
            for (int i = 0; i < 8; ++i) dy[4 + 8 * i + col] = dyc[i];
        }
    };
    std::vector<double> y(4 + 64, 0.0);
    y[0] = s0.theta1;
    y[1] = s0.theta2;
    y[2] = s0.p1;
    y[3] = s0.p2;
    for (int i = 0; i < 8; ++i) y[4 + 8 * i + i] = 1.0;
    return monodromy_dim8(rhs, y, s0.t, period, cfg, 4);
}

StabilityClass classify_hill_trace(double trace, double tol_parabolic) {
    const double atr = std::abs(trace);
    if (atr < 2.0 - tol_parabolic) return StabilityClass::Elliptic;
    if (atr > 2.0 + tol_parabolic) return StabilityClass::Hyperbolic;
    return StabilityClass::ParabolicBand;
}

StabilityClass classify_hill(const Eigen::Matrix2d& M, double tol_parabolic) {
    return classify_hill_trace(M.trace(), tol_parabolic);
}

FloquetVerdict classify_floquet(const std::vector<std::complex<double>>& multipliers,
                                double eps) {
    FloquetVerdict v;
    for (const auto& m : multipliers) v.max_modulus = std::max(v.max_modulus, std::abs(m));
    v.hyperbolic = v.max_modulus > 1.0 + eps;
    if (!v.hyperbolic) {
        // coincident unit-circle multipliers (Krein analysis out of scope)
        for (std::size_t i = 0; i < multipliers.size(); ++i)
            for (std::size_t j = i + 1; j < multipliers.size(); ++j)
                if (std::abs(multipliers[i] - multipliers[j]) < eps &&
                    std::abs(std::abs(multipliers[i]) - 1.0) < eps)
                    v.indeterminate_on_unit_circle = true;
    }
    return v;
}

}  // namespace spinspin
