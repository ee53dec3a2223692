#include "spinspin/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "spinspin/kepler.hpp"

namespace spinspin {

std::vector<PotentialTerm> potential_terms(const PhysicalParams& p,
                                           PotentialTruncation trunc) {
    std::vector<PotentialTerm> t;
    t.push_back({-p.G * p.M1 * p.M2, -1, 0, 0, 0});
    if (trunc == PotentialTruncation::V0) return t;

    t.push_back({-p.G * p.M2 * p.q1 / 4.0, -3, 0, 0, 0});
    t.push_back({-p.G * p.M1 * p.q2 / 4.0, -3, 0, 0, 0});
    t.push_back({-3.0 * p.G * p.M2 * p.d1 / 4.0, -3, -2, 2, 0});
    t.push_back({-3.0 * p.G * p.M1 * p.d2 / 4.0, -3, -2, 0, 2});
    if (trunc == PotentialTruncation::V2) return t;

    const double c4 = -3.0 * p.G / 64.0;
    t.push_back({c4 * (12.0 * p.q1 * p.q2 +
                       (15.0 / 7.0) * ((p.M2 / p.M1) * (p.d1 * p.d1 + 2.0 * p.q1 * p.q1) +
                                       (p.M1 / p.M2) * (p.d2 * p.d2 + 2.0 * p.q2 * p.q2))),
                 -5, 0, 0, 0});
    t.push_back({c4 * p.d1 * p.M2 * (20.0 * p.q2 / p.M2 + (100.0 / 7.0) * p.q1 / p.M1),
                 -5, -2, 2, 0});
    t.push_back({c4 * 25.0 * p.d1 * p.d1 * p.M2 / p.M1, -5, -4, 4, 0});
    t.push_back({c4 * p.d2 * p.M1 * (20.0 * p.q1 / p.M1 + (100.0 / 7.0) * p.q2 / p.M2),
                 -5, -2, 0, 2});
    t.push_back({c4 * 25.0 * p.d2 * p.d2 * p.M1 / p.M2, -5, -4, 0, 4});
    t.push_back({c4 * 6.0 * p.d1 * p.d2, -5, 0, 2, -2});
    t.push_back({c4 * 70.0 * p.d1 * p.d2, -5, -4, 2, 2});
    return t;
}

namespace {
inline void r_powers(double r, double inv[6]) {
    // inv[k] = r^-k for k = 1..5
    const double ir = 1.0 / r;
    inv[1] = ir;
    inv[2] = ir * ir;
    inv[3] = inv[2] * ir;
    inv[4] = inv[2] * inv[2];
    inv[5] = inv[4] * ir;
}
}  // namespace

double Potential::value(double r, double f, double th1, double th2) const {
    if (!(r > 0.0)) throw std::domain_error("potential: r must be positive");
    double inv[6];
    r_powers(r, inv);
    double v = 0.0;
    for (const auto& tm : terms_)
        v += tm.coeff * inv[-tm.rpow] * std::cos(tm.nf * f + tm.n1 * th1 + tm.n2 * th2);
    return v;
}

std::array<double, 4> Potential::grad(double r, double f, double th1, double th2) const {
    if (!(r > 0.0)) throw std::domain_error("potential: r must be positive");
    double inv[6];
    r_powers(r, inv);
    std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
    for (const auto& tm : terms_) {
        const double arg = tm.nf * f + tm.n1 * th1 + tm.n2 * th2;
        const double c = std::cos(arg), s = std::sin(arg);
        const double rp = inv[-tm.rpow];
        g[0] += tm.coeff * tm.rpow * rp * inv[1] * c;
        const double ts = -tm.coeff * rp * s;
        g[1] += ts * tm.nf;
        g[2] += ts * tm.n1;
        g[3] += ts * tm.n2;
    }
    return g;
}

std::array<double, 4> Potential::grad_perturbation(double r, double f, double th1,
                                                   double th2) const {
    if (!(r > 0.0)) throw std::domain_error("potential: r must be positive");
    double inv[6];
    r_powers(r, inv);
    std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
    for (const auto& tm : terms_) {
        if (tm.rpow == -1) continue;
        const double arg = tm.nf * f + tm.n1 * th1 + tm.n2 * th2;
        const double c = std::cos(arg), s = std::sin(arg);
        const double rp = inv[-tm.rpow];
        g[0] += tm.coeff * tm.rpow * rp * inv[1] * c;
        const double ts = -tm.coeff * rp * s;
        g[1] += ts * tm.nf;
        g[2] += ts * tm.n1;
        g[3] += ts * tm.n2;
    }
    return g;
}

Hess4 Potential::hess(double r, double f, double th1, double th2) const {
    if (!(r > 0.0)) throw std::domain_error("potential: r must be positive");
    double inv[6];
    r_powers(r, inv);
    Hess4 h{};
    for (const auto& tm : terms_) {
        const double arg = tm.nf * f + tm.n1 * th1 + tm.n2 * th2;
        const double c = std::cos(arg), s = std::sin(arg);
        const double rp = inv[-tm.rpow];
        const int n[3] = {tm.nf, tm.n1, tm.n2};
        // d2/dr2
        h[0][0] += tm.coeff * tm.rpow * (tm.rpow - 1) * rp * inv[2] * c;
        // d2/dr dangle
        for (int i = 0; i < 3; ++i)
            h[0][i + 1] += -tm.coeff * tm.rpow * rp * inv[1] * n[i] * s;
        // d2/dangle dangle
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                h[i + 1][j + 1] += -tm.coeff * rp * n[i] * n[j] * c;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) h[i][j] = h[j][i];
    return h;
}

double eval_V(const PhysicalParams& p, PotentialTruncation trunc, double r,
              double f, double th1, double th2) {
    return Potential(p, trunc).value(r, f, th1, th2);
}

std::array<double, 4> grad_V(const PhysicalParams& p, PotentialTruncation trunc,
                             double r, double f, double th1, double th2) {
    return Potential(p, trunc).grad(r, f, th1, th2);
}

std::pair<double, double> eval_F12(const DimensionlessParams& p, double u,
                                   double x1, double x2) {
    const double r_over_a = 1.0 - p.e * std::cos(u);
    const double f = true_anomaly(p.e, u);
    const double dh1 = p.lambda1 * p.sigma1;  // d_j / (M_j a^2)
    const double dh2 = p.lambda2 * p.sigma2();

    const double s1 = std::sin(2.0 * x1 - 2.0 * f);
    const double s2 = std::sin(2.0 * x2 - 2.0 * f);
    const double s12 = std::sin(2.0 * x1 - 2.0 * x2);
    const double splus = std::sin(2.0 * x1 + 2.0 * x2 - 4.0 * f);

    const double F1 = (r_over_a * r_over_a + 1.25 * (p.qhat2 + (5.0 / 7.0) * p.qhat1)) * s1 +
                      (25.0 / 8.0) * dh1 * std::sin(4.0 * x1 - 4.0 * f) +
                      (3.0 / 8.0) * dh2 * s12 + (35.0 / 8.0) * dh2 * splus;
    const double F2 = (r_over_a * r_over_a + 1.25 * (p.qhat1 + (5.0 / 7.0) * p.qhat2)) * s2 +
                      (25.0 / 8.0) * dh2 * std::sin(4.0 * x2 - 4.0 * f) -
                      (3.0 / 8.0) * dh1 * s12 + (35.0 / 8.0) * dh1 * splus;
    return {F1, F2};
}

namespace {

// Second-order eccentricity expansion of (a/r)^s cos(phi - p f) in the mean
// anomaly, phi independent of time. Built from a/r = 1 + e cos t + e^2 cos 2t
// and the equation of center f = t + 2 e sin t + (5/4) e^2 sin 2t:
//   e^0:  cos(phi - p t)
//   e^1:  (s/2 + p) cos(phi - (p+1) t) + (s/2 - p) cos(phi - (p-1) t)
//   e^2:  (s(s-1)/4 - p^2) cos(phi - p t)
//         + [ (s + s(s-1)/4)/2 + p^2/2 + 5p/8 + sp/2 ] cos(phi - (p+2) t)
//         + [ (s + s(s-1)/4)/2 + p^2/2 - 5p/8 - sp/2 ] cos(phi - (p-2) t)
// For (s,p) = (3,2) this reproduces the classical spin-orbit eccentricity
// functions (-e/2, 1 - 5e^2/2, 7e/2, 17e^2/2).
void expand_term(const PotentialTerm& tm, double inv_apow, std::vector<SeriesTerm>& out) {
    const int s = -tm.rpow;
    const int p = -tm.nf;  // arguments are stored as nf*f + n1*th1 + n2*th2
    const double c = tm.coeff * inv_apow;

    auto push = [&](int order, double coeff, int j) {
        if (coeff == 0.0) return;
        // cos(phi - j t) stored as cos(kt*t + n1*th1 + n2*th2) with kt = j and
        // the angle part negated; canonicalize so that kt >= 0
        int kt = j, n1 = -tm.n1, n2 = -tm.n2;
        if (kt < 0 || (kt == 0 && (n1 < 0 || (n1 == 0 && n2 < 0)))) {
            kt = -kt;
            n1 = -n1;
            n2 = -n2;
        }
        out.push_back({order, coeff, kt, n1, n2});
    };

    const double sd = s;
    push(0, c, p);
    push(1, c * (sd / 2.0 + p), p + 1);
    push(1, c * (sd / 2.0 - p), p - 1);
    push(2, c * (sd * (sd - 1.0) / 4.0 - p * p), p);
    const double base = 0.5 * (sd + sd * (sd - 1.0) / 4.0) + 0.5 * p * p;
    const double odd = 5.0 * p / 8.0 + sd * p / 2.0;
    push(2, c * (base + odd), p + 2);
    push(2, c * (base - odd), p - 2);
}

double eval_series(const std::vector<SeriesTerm>& terms, double e, double t,
                   double th1, double th2, int order) {
    const double epow[3] = {1.0, e, e * e};
    double v = 0.0;
    for (const auto& tm : terms) {
        if (tm.order > order) continue;
        v += tm.coeff * epow[tm.order] *
             std::cos(tm.kt * t + tm.n1 * th1 + tm.n2 * th2);
    }
    return v;
}

std::vector<SeriesTerm> series_from_table(const PhysicalParams& p, PotentialTruncation trunc,
                                          int keep_rpow) {
    const double a = std::cbrt(p.G);  // G = a^3 in model units
    std::vector<SeriesTerm> out;
    for (const auto& tm : potential_terms(p, trunc)) {
        if (tm.rpow != keep_rpow) continue;
        expand_term(tm, std::pow(a, tm.rpow), out);
    }
    return out;
}

}  // namespace

std::vector<SeriesTerm> series_terms_V2(const PhysicalParams& p) {
    return series_from_table(p, PotentialTruncation::V2, -3);
}

std::vector<SeriesTerm> series_terms_V4(const PhysicalParams& p) {
    return series_from_table(p, PotentialTruncation::V2V4, -5);
}

std::pair<double, double> series_V(const PhysicalParams& p, double e, double t,
                                   double th1, double th2, int order) {
    if (order < 0 || order > 2)
        throw std::invalid_argument("series_V: order must be 0, 1 or 2");
    const auto v2 = series_terms_V2(p);
    const auto v4 = series_terms_V4(p);
    return {eval_series(v2, e, t, th1, th2, order),
            eval_series(v4, e, t, th1, th2, order)};
}

}  // namespace spinspin
