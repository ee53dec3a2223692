#include "spinspin/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spinspin {

namespace {

void require(std::vector<std::string>& out, bool ok, int body, const char* ineq, double value) {
    if (ok) return;
    std::ostringstream os;
    os << "body " << body << ": " << ineq << " (got " << value << ")";
    out.push_back(os.str());
}

}  // namespace

std::vector<std::string> PhysicalParams::violations() const {
    std::vector<std::string> v;
    const double tol = 1e-12;
    if (!(M1 > 0.0 && M2 > 0.0 && std::abs(M1 + M2 - 1.0) <= tol))
        v.push_back("masses must be positive with M1 + M2 = 1");
    if (!(C1 > 0.0 && C2 > 0.0 && std::abs(C1 + C2 - 1.0) <= tol))
        v.push_back("polar moments must be positive with C1 + C2 = 1");
    const double dj[2] = {d1, d2}, qj[2] = {q1, q2}, Cj[2] = {C1, C2};
    const double Aj[2] = {A1, A2}, Bj[2] = {B1, B2};
    for (int j = 0; j < 2; ++j) {
        require(v, dj[j] >= -tol, j + 1, "0 <= d", dj[j]);
        require(v, dj[j] <= Cj[j] + tol, j + 1, "d <= C", dj[j]);
        require(v, Cj[j] <= 1.0 + tol, j + 1, "C <= 1", Cj[j]);
        require(v, dj[j] <= qj[j] + tol, j + 1, "d <= q", qj[j]);
        require(v, qj[j] <= 2.0 * Cj[j] + tol, j + 1, "q <= 2C", qj[j]);
        require(v, 2.5 * (Cj[j] + dj[j]) <= 5.0 + tol, j + 1, "M*sa^2 = (5/2)(C+d) <= 5",
                2.5 * (Cj[j] + dj[j]));
        require(v, std::abs((Bj[j] - Aj[j]) - dj[j]) <= 1e-9, j + 1,
                "d consistent with stored A, B", Bj[j] - Aj[j]);
        require(v, std::abs((2.0 * Cj[j] - Bj[j] - Aj[j]) - qj[j]) <= 1e-9, j + 1,
                "q consistent with stored A, B", 2.0 * Cj[j] - Bj[j] - Aj[j]);
    }
    return v;
}

PhysicalParams PhysicalParams::make(double M1, double C1, double d1, double d2,
                                    double q1, double q2, double G,
                                    bool allow_unphysical) {
    PhysicalParams p;
    p.M1 = M1;
    p.M2 = 1.0 - M1;
    p.C1 = C1;
    p.C2 = 1.0 - C1;
    p.d1 = d1;
    p.d2 = d2;
    p.q1 = q1;
    p.q2 = q2;
    p.G = G;
    // A + B = 2C - q, B - A = d
    p.A1 = C1 - 0.5 * (q1 + d1);
    p.B1 = C1 - 0.5 * (q1 - d1);
    p.A2 = p.C2 - 0.5 * (q2 + d2);
    p.B2 = p.C2 - 0.5 * (q2 - d2);
    p.sa1 = std::sqrt(2.5 * (p.C1 + d1) / p.M1);
    p.sa2 = std::sqrt(2.5 * (p.C2 + d2) / p.M2);

    auto v = p.violations();
    if (!v.empty()) {
        if (!allow_unphysical) {
            std::string msg = "PhysicalParams: parameter bounds violated:";
            for (const auto& s : v) msg += "\n  " + s;
            throw std::invalid_argument(msg);
        }
        for (auto& s : v) p.warnings.push_back("unphysical: " + s);
    }
    if (d1 == q1 && d1 > 0.0) p.warnings.push_back("body 1 prolate degenerate (d = q)");
    if (d2 == q2 && d2 > 0.0) p.warnings.push_back("body 2 prolate degenerate (d = q)");
    return p;
}

void DimensionlessParams::validate() const {
    if (!(e >= 0.0 && e < 1.0))
        throw std::invalid_argument("DimensionlessParams: e must be in [0,1)");
    if (!(C1 > 0.0 && C1 < 1.0))
        throw std::invalid_argument("DimensionlessParams: C1 must be in (0,1)");
    if (!(sigma1 >= 0.0))
        throw std::invalid_argument("DimensionlessParams: sigma1 must be >= 0");
    if (!(qhat1 >= 0.0 && qhat2 >= 0.0))
        throw std::invalid_argument("DimensionlessParams: qhat must be >= 0");
    if (a && !(*a > 0.0))
        throw std::invalid_argument("DimensionlessParams: a must be positive");
}

PhysicalParams to_physical(const DimensionlessParams& p, bool allow_unphysical) {
    p.validate();
    if (!(p.sigma1 > 0.0))
        throw std::invalid_argument("to_physical: sigma1 must be positive");

    double a, mu;
    if (p.a) {
        a = *p.a;
        mu = p.C1 / (3.0 * p.sigma1 * a * a);
        if (mu > 0.25 + 1e-12)
            throw std::invalid_argument("to_physical: mu > 1/4, no real mass split");
        mu = std::min(mu, 0.25);
    } else {
        mu = 0.25;
        a = std::sqrt(p.C1 / (3.0 * p.sigma1 * mu));
    }
    // M1(1 - M1) = mu, M1 <= 1/2 branch
    const double M1 = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * mu));
    const double M2 = 1.0 - M1;

    const double d1 = std::abs(p.lambda1) * p.C1 / (3.0 * M2);
    const double d2 = std::abs(p.lambda2) * p.C2() / (3.0 * M1);
    const double q1 = p.qhat1 * M1 * a * a;
    const double q2 = p.qhat2 * M2 * a * a;

    auto phys = PhysicalParams::make(M1, p.C1, d1, d2, q1, q2, a * a * a, allow_unphysical);
    if (p.lambda1 < 0.0 || p.lambda2 < 0.0)
        phys.warnings.push_back("signed lambda: physical d_j built from |lambda_j|");
    return phys;
}

DimensionlessParams to_dimensionless(const PhysicalParams& p, double a, double e) {
    if (!(a > 0.0))
        throw std::invalid_argument("to_dimensionless: a must be positive");
    const double mu = p.M1 * p.M2;
    DimensionlessParams d;
    d.e = e;
    d.C1 = p.C1;
    d.lambda1 = 3.0 * (mu / p.M1) * (p.d1 / p.C1);
    d.lambda2 = 3.0 * (mu / p.M2) * (p.d2 / p.C2);
    d.sigma1 = p.C1 / (3.0 * mu * a * a);
    d.qhat1 = p.q1 / (p.M1 * a * a);
    d.qhat2 = p.q2 / (p.M2 * a * a);
    d.a = a;
    return d;
}

double collision_radius(const PhysicalParams& p) {
    return p.sa1 + p.sa2;
}

}  // namespace spinspin
