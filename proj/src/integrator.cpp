#include "spinspin/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinspin {

namespace {

// Dormand-Prince 8(5,3) pair (Hairer, Norsett & Wanner), 12 stages.
namespace dp {
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd-order error weights (applied to stages 1, 9, 12)
constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

// 5th-order error weights
constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;
}  // namespace dp

class Stepper {
  public:
    Stepper(const RhsFn& rhs, int n) : rhs_(rhs), n_(n) {
        for (auto* k : {&k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &k8_, &k9_, &k10_, &k11_, &k12_, &yw_, &sum_})
            k->resize(n);
    }

    // One attempted step of signed size h from (t, y, f = rhs(t,y)).
    // Fills ynew and returns the scaled error estimate.
    double attempt(double t, const std::vector<double>& y, const std::vector<double>& f,
                   double h, std::vector<double>& ynew, double abs_tol, double rel_tol) {
        using namespace dp;
        const int n = n_;
        auto& yw = yw_;
        const double* k1 = f.data();

        for (int i = 0; i < n; ++i) yw[i] = y[i] + h * (a21 * k1[i]);
        rhs_(t + c2 * h, yw.data(), k2_.data());
        for (int i = 0; i < n; ++i) yw[i] = y[i] + h * (a31 * k1[i] + a32 * k2_[i]);
        rhs_(t + c3 * h, yw.data(), k3_.data());
        for (int i = 0; i < n; ++i) yw[i] = y[i] + h * (a41 * k1[i] + a43 * k3_[i]);
        rhs_(t + c4 * h, yw.data(), k4_.data());
        for (int i = 0; i < n; ++i) yw[i] = y[i] + h * (a51 * k1[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs_(t + c5 * h, yw.data(), k5_.data());
        for (int i = 0; i < n; ++i) yw[i] = y[i] + h * (a61 * k1[i] + a64 * k4_[i] + a65 * k5_[i]);
        rhs_(t + c6 * h, yw.data(), k6_.data());
        for (int i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a71 * k1[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
        rhs_(t + c7 * h, yw.data(), k7_.data());
        for (int i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a81 * k1[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i]);
        rhs_(t + c8 * h, yw.data(), k8_.data());
        for (int i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a91 * k1[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] +
                                a97 * k7_[i] + a98 * k8_[i]);
        rhs_(t + c9 * h, yw.data(), k9_.data());
        for (int i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a101 * k1[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] +
                                a107 * k7_[i] + a108 * k8_[i] + a109 * k9_[i]);
        rhs_(t + c10 * h, yw.data(), k10_.data());
        for (int i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a111 * k1[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] +
                                a117 * k7_[i] + a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i]);
        rhs_(t + c11 * h, yw.data(), k11_.data());
        for (int i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a121 * k1[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] +
                                a127 * k7_[i] + a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] +
                                a1211 * k11_[i]);
        rhs_(t + h, yw.data(), k12_.data());

        for (int i = 0; i < n; ++i) {
            sum_[i] = b1 * k1[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] +
                      b10 * k10_[i] + b11 * k11_[i] + b12 * k12_[i];
            ynew[i] = y[i] + h * sum_[i];
        }

        // combined 5th/3rd order error estimate (Hairer's formula)
        double err3 = 0.0, err5 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sci = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e3 = sum_[i] - bhh1 * k1[i] - bhh2 * k9_[i] - bhh3 * k12_[i];
            const double e5 = er1 * k1[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] +
                              er9 * k9_[i] + er10 * k10_[i] + er11 * k11_[i] + er12 * k12_[i];
            err3 += (e3 / sci) * (e3 / sci);
            err5 += (e5 / sci) * (e5 / sci);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        return std::abs(h) * err5 * std::sqrt(1.0 / (n * deno));
    }

  private:
    const RhsFn& rhs_;
    int n_;
    std::vector<double> k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_, k11_, k12_, yw_, sum_;
};

double initial_step(const RhsFn& rhs, const std::vector<double>& y,
                    const std::vector<double>& f, double span, double abs_tol,
                    double rel_tol) {
    (void)rhs;
    const int n = static_cast<int>(y.size());
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sci = abs_tol + rel_tol * std::abs(y[i]);
        d0 += (y[i] / sci) * (y[i] / sci);
        d1 += (f[i] / sci) * (f[i] / sci);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
}

// Observer invoked after each accepted step; returning false truncates the
// march (used by event detection).
using StepObserver = std::function<bool(double t0, const std::vector<double>& y0,
                                        const std::vector<double>& f0, double t1,
                                        const std::vector<double>& y1,
                                        const std::vector<double>& f1)>;

IntegrationStatus march(const RhsFn& rhs, std::vector<double>& y, double t0, double t1,
                        const IntegratorConfig& cfg, const StepObserver& observer) {
    if (t0 == t1) throw std::invalid_argument("integrate: empty time span");
    const int n = static_cast<int>(y.size());
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("integrate: non-finite initial state");

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = cfg.h_max > 0.0 ? std::min(cfg.h_max, span) : span;

    Stepper stepper(rhs, n);
    std::vector<double> f(n), ynew(n), fnew(n);
    rhs(t0, y.data(), f.data());

    double h = cfg.h_init > 0.0 ? std::min(cfg.h_init, hmax)
                                : initial_step(rhs, y, f, hmax, cfg.abs_tol, cfg.rel_tol);
    double t = t0;
    double errold = 1e-4;

    // PI controller, safety 0.9
    const double alpha = 0.7 / 8.0, beta = 0.4 / 8.0;
    const double safe = 0.9, min_scale = 1.0 / 3.0, max_scale = 6.0;

    for (long step = 0; step < cfg.max_steps; ++step) {
        bool last = false;
        if ((t + dir * h - t1) * dir >= 0.0) {
            h = std::abs(t1 - t);
            last = true;
        }
        if (h < cfg.h_min && !last) return IntegrationStatus::StepUnderflow;

        const double err = stepper.attempt(t, y, f, dir * h, ynew, cfg.abs_tol, cfg.rel_tol);
        bool finite = true;
        for (double v : ynew)
            if (!std::isfinite(v)) { finite = false; break; }

        if (err <= 1.0 && finite) {
            const double tnew = last ? t1 : t + dir * h;
            rhs(tnew, ynew.data(), fnew.data());
            const bool keep_going = !observer || observer(t, y, f, tnew, ynew, fnew);
            t = tnew;
            y.swap(ynew);
            f.swap(fnew);
            if (!keep_going) return IntegrationStatus::EventStop;
            if (last) return IntegrationStatus::Ok;
            double scale = (err == 0.0) ? max_scale
                                        : safe * std::pow(err, -alpha) * std::pow(errold, beta);
            scale = std::clamp(scale, min_scale, max_scale);
            h = std::min(h * scale, hmax);
            errold = std::max(err, 1e-4);
        } else {
            const double scale = finite ? std::max(safe * std::pow(err, -alpha), min_scale) : 0.1;
            h *= scale;
            if (h < cfg.h_min) return IntegrationStatus::StepUnderflow;
        }
    }
    return IntegrationStatus::MaxStepsExceeded;
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, const std::vector<double>& y0, double t0,
                     double t1, const IntegratorConfig& cfg) {
    Trajectory traj;
    traj.rhs = rhs;
    traj.cfg = cfg;
    std::vector<double> y = y0;

    bool first = true;
    auto observer = [&](double ta, const std::vector<double>& ya, const std::vector<double>& fa,
                        double tb, const std::vector<double>& yb, const std::vector<double>& fb) {
        if (first) {
            traj.points.push_back({ta, ya, fa});
            first = false;
        }
        traj.points.push_back({tb, yb, fb});
        return true;
    };
    traj.status = march(rhs, y, t0, t1, cfg, observer);
    if (traj.points.empty()) {
        std::vector<double> f(y0.size());
        rhs(t0, y0.data(), f.data());
        traj.points.push_back({t0, y0, f});
    }
    return traj;
}

IntegrationStatus integrate_final(const RhsFn& rhs, std::vector<double>& y, double t0,
                                  double t1, const IntegratorConfig& cfg) {
    return march(rhs, y, t0, t1, cfg, nullptr);
}

std::vector<double> Trajectory::at(double t) const {
    if (points.empty()) throw std::logic_error("Trajectory::at: empty trajectory");
    const double ta = points.front().t, tb = points.back().t;
    const double lo = std::min(ta, tb), hi = std::max(ta, tb);
    if (t < lo - 1e-12 || t > hi + 1e-12)
        throw std::out_of_range("Trajectory::at: time outside covered span");

    // bracketing step endpoint with exact hits short-circuited
    const double dir = tb >= ta ? 1.0 : -1.0;
    std::size_t i = 0;
    for (; i + 1 < points.size(); ++i) {
        if (points[i].t == t) return points[i].y;
        if ((points[i + 1].t - t) * dir >= 0.0) break;
    }
    if (points[i + 1].t == t) return points[i + 1].y;

    std::vector<double> y = points[i].y;
    IntegratorConfig local = cfg;
    local.h_init = std::abs(t - points[i].t);
    if (march(rhs, y, points[i].t, t, local, nullptr) != IntegrationStatus::Ok)
        throw std::runtime_error("Trajectory::at: refinement integration failed");
    return y;
}

std::vector<double> Trajectory::at_hermite(double t) const {
    if (points.empty()) throw std::logic_error("Trajectory::at_hermite: empty trajectory");
    const double dir = points.back().t >= points.front().t ? 1.0 : -1.0;
    std::size_t i = 0;
    for (; i + 1 < points.size(); ++i)
        if ((points[i + 1].t - t) * dir >= 0.0) break;
    if (i + 1 >= points.size()) i = points.size() - 2;

    const auto& p0 = points[i];
    const auto& p1 = points[i + 1];
    const double h = p1.t - p0.t;
    const double s = (t - p0.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    std::vector<double> y(p0.y.size());
    for (std::size_t j = 0; j < y.size(); ++j)
        y[j] = h00 * p0.y[j] + h10 * h * p0.f[j] + h01 * p1.y[j] + h11 * h * p1.f[j];
    return y;
}

StroboscopicResult sample_stroboscopic(const RhsFn& rhs, const std::vector<double>& y0,
                                       int k_max, const IntegratorConfig& cfg) {
    constexpr double TWO_PI = 6.283185307179586476925286766559;
    StroboscopicResult res;
    res.states.push_back(y0);
    if (k_max <= 0) return res;

    int next_k = 1;
    auto observer = [&](double ta, const std::vector<double>& ya, const std::vector<double>&,
                        double tb, const std::vector<double>& yb, const std::vector<double>&) {
        while (next_k <= k_max && tb >= next_k * TWO_PI) {
            const double tk = next_k * TWO_PI;
            if (tb == tk) {
                res.states.push_back(yb);
            } else {
                std::vector<double> y = ya;
                IntegratorConfig local = cfg;
                local.h_init = tk - ta;
                if (march(rhs, y, ta, tk, local, nullptr) != IntegrationStatus::Ok)
                    return false;
                res.states.push_back(std::move(y));
            }
            ++next_k;
        }
        return true;
    };

    std::vector<double> y = y0;
    const auto status = march(rhs, y, 0.0, k_max * TWO_PI, cfg, observer);
    res.status = status == IntegrationStatus::EventStop ? IntegrationStatus::StepUnderflow : status;
    return res;
}

Trajectory integrate_with_event(const RhsFn& rhs, const std::vector<double>& y0,
                                double t0, double t1, const EventFn& event,
                                const IntegratorConfig& cfg) {
    Trajectory traj;
    traj.rhs = rhs;
    traj.cfg = cfg;

    // event already active at the start: halt immediately
    const double g0 = event(t0, y0.data());
    std::vector<double> f0(y0.size());
    rhs(t0, y0.data(), f0.data());
    if (g0 == 0.0 || g0 < 0.0) {
        traj.points.push_back({t0, y0, f0});
        traj.events.push_back({t0, y0, g0});
        traj.status = IntegrationStatus::EventStop;
        return traj;
    }

    bool first = true;
    double g_prev = g0;
    auto observer = [&](double ta, const std::vector<double>& ya, const std::vector<double>& fa,
                        double tb, const std::vector<double>& yb, const std::vector<double>& fb) {
        if (first) {
            traj.points.push_back({ta, ya, fa});
            first = false;
        }
        const double gb = event(tb, yb.data());
        if (!((g_prev > 0.0 && gb <= 0.0) || (g_prev < 0.0 && gb >= 0.0))) {
            traj.points.push_back({tb, yb, fb});
            g_prev = gb;
            return true;
        }

        // sign change in [ta, tb]: bisect, evaluating by re-integration from ta
        IntegratorConfig local = cfg;
        auto eval = [&](double tm) {
            std::vector<double> y = ya;
            if (tm != ta) {
                local.h_init = std::abs(tm - ta);
                march(rhs, y, ta, tm, local, nullptr);
            }
            return y;
        };
        double lo = ta, hi = tb;
        double glo = g_prev;
        while (std::abs(hi - lo) > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            auto ym = eval(mid);
            const double gm = event(mid, ym.data());
            if ((glo > 0.0) == (gm > 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        const double te = 0.5 * (lo + hi);
        auto ye = eval(te);
        std::vector<double> fe(ye.size());
        rhs(te, ye.data(), fe.data());
        traj.points.push_back({te, ye, fe});
        traj.events.push_back({te, ye, event(te, ye.data())});
        return false;
    };

    std::vector<double> y = y0;
    traj.status = march(rhs, y, t0, t1, cfg, observer);
    if (traj.points.empty()) traj.points.push_back({t0, y0, f0});
    return traj;
}

}  // namespace spinspin
