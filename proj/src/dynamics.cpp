#include "spinspin/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinspin {

namespace {
constexpr double NAN_D = std::numeric_limits<double>::quiet_NaN();

struct OrbitInput {
    double aor;  // a / r
    double f;    // true anomaly
};

OrbitInput orbit_input(double e, double t) {
    const double u = solve_kepler(e, t);
    return {1.0 / (1.0 - e * std::cos(u)), true_anomaly(e, u)};
}
}  // namespace

bool is_keplerian_kind(ModelKind k) {
    return k == ModelKind::KeplerianSpinOrbit || k == ModelKind::KeplerianSpinSpin ||
           k == ModelKind::SphericalCompanion;
}

bool is_full_kind(ModelKind k) {
    return !is_keplerian_kind(k);
}

SpinSystem::SpinSystem(const DimensionlessParams& p, ModelKind kind)
    : p_(p), kind_(kind), coupled_(kind == ModelKind::KeplerianSpinSpin) {
    if (!is_keplerian_kind(kind))
        throw std::invalid_argument("SpinSystem: full model kinds rejected");
    p.validate();
    C_[0] = p.C1;
    C_[1] = p.C2();
    lambda_[0] = p.lambda1;
    lambda_[1] = p.lambda2;
    sigma_[0] = p.sigma1;
    sigma_[1] = p.sigma2();
    qhat_[0] = p.qhat1;
    qhat_[1] = p.qhat2;
    if (kind == ModelKind::SphericalCompanion) {
        lambda_[1] = 0.0;
        qhat_[1] = 0.0;
    }
}

void SpinSystem::rhs(double t, const double* y, double* dy) const {
    const auto in = orbit_input(p_.e, t);
    const double aor3 = in.aor * in.aor * in.aor;
    const double aor5 = aor3 * in.aor * in.aor;
    const double th[2] = {y[0], y[1]};

    dy[0] = y[2] / C_[0];
    dy[1] = y[3] / C_[1];
    for (int j = 0; j < 2; ++j) {
        const int o = 1 - j;
        const double s2 = std::sin(2.0 * th[j] - 2.0 * in.f);
        double bracket = aor3 * s2;
        if (kind_ != ModelKind::KeplerianSpinOrbit) {
            const double s4 = std::sin(4.0 * th[j] - 4.0 * in.f);
            double extra = 1.25 * (qhat_[o] + (5.0 / 7.0) * qhat_[j]) * s2 +
                           (25.0 / 8.0) * lambda_[j] * sigma_[j] * s4;
            if (coupled_) {
                const double s12 = std::sin(2.0 * th[j] - 2.0 * th[o]);
                const double sp = std::sin(2.0 * th[0] + 2.0 * th[1] - 4.0 * in.f);
                extra += lambda_[o] * sigma_[o] * ((3.0 / 8.0) * s12 + (35.0 / 8.0) * sp);
            }
            bracket += aor5 * extra;
        }
        // dp_j/dt = C_j * ddtheta_j = -C_j * (lambda_j/2) * bracket
        dy[2 + j] = -C_[j] * 0.5 * lambda_[j] * bracket;
    }
    if (kind_ == ModelKind::SphericalCompanion) dy[3] = 0.0;
}

RhsFn SpinSystem::rhs_fn() const {
    return [this](double t, const double* y, double* dy) { rhs(t, y, dy); };
}

void SpinSystem::torque_jacobian(double t, double th1, double th2, double K[2][2]) const {
    const auto in = orbit_input(p_.e, t);
    const double aor3 = in.aor * in.aor * in.aor;
    const double aor5 = aor3 * in.aor * in.aor;
    const double th[2] = {th1, th2};

    for (int j = 0; j < 2; ++j) {
        const int o = 1 - j;
        const double c2 = std::cos(2.0 * th[j] - 2.0 * in.f);
        double self = 2.0 * aor3 * c2;
        double cross = 0.0;
        if (kind_ != ModelKind::KeplerianSpinOrbit) {
            const double c4 = std::cos(4.0 * th[j] - 4.0 * in.f);
            double extra = 1.25 * (qhat_[o] + (5.0 / 7.0) * qhat_[j]) * 2.0 * c2 +
                           (25.0 / 8.0) * lambda_[j] * sigma_[j] * 4.0 * c4;
            if (coupled_) {
                const double c12 = std::cos(2.0 * th[j] - 2.0 * th[o]);
                const double cp = std::cos(2.0 * th[0] + 2.0 * th[1] - 4.0 * in.f);
                extra += lambda_[o] * sigma_[o] * ((3.0 / 8.0) * 2.0 * c12 + (35.0 / 8.0) * 2.0 * cp);
                cross = lambda_[o] * sigma_[o] *
                        ((3.0 / 8.0) * (-2.0) * c12 + (35.0 / 8.0) * 2.0 * cp);
            }
            self = 2.0 * aor3 * c2 + aor5 * extra;
            cross *= aor5;
        }
        K[j][j] = C_[j] * 0.5 * lambda_[j] * self;
        K[j][o] = C_[j] * 0.5 * lambda_[j] * cross;
    }
    if (kind_ == ModelKind::SphericalCompanion) {
        K[1][0] = K[1][1] = 0.0;
    }
}

void SpinSystem::tangent_rhs(double t, double th1, double th2, const double* y,
                             double* dy) const {
    double K[2][2];
    torque_jacobian(t, th1, th2, K);
    dy[0] = y[2] / C_[0];
    dy[1] = y[3] / C_[1];
    dy[2] = -(K[0][0] * y[0] + K[0][1] * y[1]);
    dy[3] = -(K[1][0] * y[0] + K[1][1] * y[1]);
}

SingleSpinSystem::SingleSpinSystem(const DimensionlessParams& p, int body, bool with_r5_terms)
    : e_(p.e), r5_(with_r5_terms) {
    p.validate();
    if (body != 1 && body != 2)
        throw std::invalid_argument("SingleSpinSystem: body must be 1 or 2");
    if (body == 1) {
        C_ = p.C1;
        lambda_ = p.lambda1;
        sigma_ = p.sigma1;
        qhat_self_ = p.qhat1;
    } else {
        C_ = p.C2();
        lambda_ = p.lambda2;
        sigma_ = p.sigma2();
        qhat_self_ = p.qhat2;
    }
    qhat_other_ = 0.0;  // spherical companion
    dhat_self_ = lambda_ * sigma_;
}

void SingleSpinSystem::rhs(double t, const double* y, double* dy) const {
    const auto in = orbit_input(e_, t);
    const double aor3 = in.aor * in.aor * in.aor;
    const double s2 = std::sin(2.0 * y[0] - 2.0 * in.f);
    double bracket = aor3 * s2;
    if (r5_) {
        const double aor5 = aor3 * in.aor * in.aor;
        const double s4 = std::sin(4.0 * y[0] - 4.0 * in.f);
        bracket += aor5 * (1.25 * (qhat_other_ + (5.0 / 7.0) * qhat_self_) * s2 +
                           (25.0 / 8.0) * dhat_self_ * s4);
    }
    dy[0] = y[1] / C_;
    dy[1] = -C_ * 0.5 * lambda_ * bracket;
}

RhsFn SingleSpinSystem::rhs_fn() const {
    return [this](double t, const double* y, double* dy) { rhs(t, y, dy); };
}

double SingleSpinSystem::hill_coefficient(double t, double theta) const {
    const auto in = orbit_input(e_, t);
    const double aor3 = in.aor * in.aor * in.aor;
    const double c2 = std::cos(2.0 * theta - 2.0 * in.f);
    double c = lambda_ * aor3 * c2;
    if (r5_) {
        const double aor5 = aor3 * in.aor * in.aor;
        const double c4 = std::cos(4.0 * theta - 4.0 * in.f);
        c += lambda_ * aor5 * (1.25 * (qhat_other_ + (5.0 / 7.0) * qhat_self_) * c2 +
                               (25.0 / 8.0) * dhat_self_ * 2.0 * c4);
    }
    return c;
}

void SingleSpinSystem::tangent_rhs(double t, double theta, const double* y, double* dy) const {
    const double c = hill_coefficient(t, theta);
    dy[0] = y[1];
    dy[1] = -c * y[0];
}

FullSystem::FullSystem(const PhysicalParams& p, PotentialTruncation trunc, bool keplerian_form)
    : p_(p), pot_(p, trunc), mu_(p.M1 * p.M2), keplerian_form_(keplerian_form) {}

void FullSystem::rhs(double, const double* z, double* dz) const {
    const double r = z[0];
    if (!(r > 0.0)) {
        for (int i = 0; i < 8; ++i) dz[i] = NAN_D;
        return;
    }
    const double pf = z[5];
    const auto g = pot_.grad(r, z[1], z[2], z[3]);
    dz[0] = z[4] / mu_;
    dz[1] = pf / (mu_ * r * r);
    dz[2] = z[6] / p_.C1;
    dz[3] = z[7] / p_.C2;
    dz[4] = pf * pf / (mu_ * r * r * r) - g[0];
    dz[5] = -g[1];
    dz[6] = -g[2];
    dz[7] = -g[3];
    if (keplerian_form_) {
        const auto gp = pot_.grad_perturbation(r, z[1], z[2], z[3]);
        dz[4] += gp[0];
        dz[5] += gp[1];
    }
}

RhsFn FullSystem::rhs_fn() const {
    return [this](double t, const double* z, double* dz) { rhs(t, z, dz); };
}

double FullSystem::hamiltonian(const double* z) const {
    const double r = z[0];
    return z[4] * z[4] / (2.0 * mu_) + z[5] * z[5] / (2.0 * mu_ * r * r) +
           z[6] * z[6] / (2.0 * p_.C1) + z[7] * z[7] / (2.0 * p_.C2) +
           pot_.value(r, z[1], z[2], z[3]);
}

double FullSystem::total_angular_momentum(const double* z) const {
    return z[5] + z[6] + z[7];
}

void FullSystem::hessian(const double* z, double* H) const {
    const double r = z[0], pf = z[5];
    const auto Vh = pot_.hess(r, z[1], z[2], z[3]);
    for (int i = 0; i < 64; ++i) H[i] = 0.0;
    auto at = [&](int i, int j) -> double& { return H[8 * i + j]; };

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) at(i, j) = Vh[i][j];
    at(0, 0) += 3.0 * pf * pf / (mu_ * r * r * r * r);
    at(0, 5) = at(5, 0) = -2.0 * pf / (mu_ * r * r * r);
    at(4, 4) = 1.0 / mu_;
    at(5, 5) = 1.0 / (mu_ * r * r);
    at(6, 6) = 1.0 / p_.C1;
    at(7, 7) = 1.0 / p_.C2;
}

void FullSystem::tangent_rhs(const double* z, const double* y, double* dy) const {
    double H[64];
    hessian(z, H);
    // dy = J4 * H * y with J4 = [[0, I], [-I, 0]]
    for (int i = 0; i < 4; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 8; ++j) acc += H[8 * (i + 4) + j] * y[j];
        dy[i] = acc;
    }
    for (int i = 0; i < 4; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 8; ++j) acc += H[8 * i + j] * y[j];
        dy[i + 4] = -acc;
    }
}

FullSystem make_full_system(const PhysicalParams& p, ModelKind kind,
                            PotentialTruncation keplerian_form_trunc) {
    switch (kind) {
        case ModelKind::FullSpinOrbit:
            return FullSystem(p, PotentialTruncation::V2, false);
        case ModelKind::FullSpinSpin:
            return FullSystem(p, PotentialTruncation::V2V4, false);
        case ModelKind::KeplerianFullForm:
            return FullSystem(p, keplerian_form_trunc, true);
        default:
            throw std::invalid_argument("make_full_system: Keplerian spin kinds rejected");
    }
}

SpinState spin_rhs(const DimensionlessParams& p, ModelKind kind, const SpinState& s) {
    SpinSystem sys(p, kind);
    const double y[4] = {s.theta1, s.theta2, s.p1, s.p2};
    double dy[4];
    sys.rhs(s.t, y, dy);
    return {1.0, dy[0], dy[1], dy[2], dy[3]};
}

FullState full_rhs(const PhysicalParams& p, ModelKind kind, const FullState& z) {
    if (!is_full_kind(kind))
        throw std::invalid_argument("full_rhs: Keplerian spin kinds rejected");
    if (!(z.r > 0.0)) throw std::domain_error("full_rhs: r must be positive");
    FullSystem sys = make_full_system(p, kind);
    const auto arr = z.to_array();
    double dz[8];
    sys.rhs(0.0, arr.data(), dz);
    return FullState::from_array(dz);
}

void EccentricSpinSystem::rhs(double u, const double* x, double* dx) const {
    const double aor = 1.0 / (1.0 - p_.e * std::cos(u));
    const double aor3 = aor * aor * aor;
    const auto [F1, F2] = eval_F12(p_, u, x[0], x[1]);
    const double drag = aor * p_.e * std::sin(u);
    dx[0] = x[2];
    dx[1] = x[3];
    dx[2] = drag * x[2] - aor3 * 0.5 * p_.lambda1 * F1;
    dx[3] = drag * x[3] - aor3 * 0.5 * p_.lambda2 * F2;
}

RhsFn EccentricSpinSystem::rhs_fn() const {
    return [this](double u, const double* x, double* dx) { rhs(u, x, dx); };
}

}  // namespace spinspin
