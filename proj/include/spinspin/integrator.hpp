#ifndef SPINSPIN_INTEGRATOR_HPP
#define SPINSPIN_INTEGRATOR_HPP

#include <functional>
#include <vector>

namespace spinspin {

/// dydt = rhs(t, y)
using RhsFn = std::function<void(double t, const double* y, double* dydt)>;

struct IntegratorConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double h_init = 0.0;  // 0 = choose automatically
    double h_min = 1e-13; // underflow threshold
    double h_max = 0.0;   // 0 = span
    long max_steps = 20000000;
};

enum class IntegrationStatus {
    Ok,
    StepUnderflow,      // singularity / tolerances unreachable; last state kept
    MaxStepsExceeded,
    EventStop,          // halted at a located event
};

struct StepPoint {
    double t;
    std::vector<double> y;
    std::vector<double> f;  // rhs at (t, y)
};

struct EventRecord {
    double t;
    std::vector<double> y;
    double value;  // event function value at the located root
};

/// Accepted-step trajectory with evaluation anywhere in the covered span.
class Trajectory {
  public:
    IntegrationStatus status = IntegrationStatus::Ok;
    std::vector<StepPoint> points;  // step endpoints, monotone in t
    std::vector<EventRecord> events;

    int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().y.size()); }
    double t_begin() const { return points.front().t; }
    double t_end() const { return points.back().t; }
    const std::vector<double>& final_state() const { return points.back().y; }
    bool ok() const { return status == IntegrationStatus::Ok || status == IntegrationStatus::EventStop; }

    /// State at t. Exact at step endpoints; inside a step the state is
    /// recomputed by a short integration from the step start at the original
    /// tolerances (full accuracy, unlike the Hermite interpolant).
    std::vector<double> at(double t) const;

    /// Cubic Hermite interpolation on the bracketing step; cheap, with
    /// interpolation error above the integration error on long steps.
    std::vector<double> at_hermite(double t) const;

    // set by integrate(); used by at()
    RhsFn rhs;
    IntegratorConfig cfg;
};

/// Integrates y' = rhs over [t0, t1] (either direction), landing exactly on
/// t1. Throws std::invalid_argument for bad spans; numeric trouble is
/// reported via Trajectory::status.
Trajectory integrate(const RhsFn& rhs, const std::vector<double>& y0, double t0,
                     double t1, const IntegratorConfig& cfg);

/// Final state only, no per-step storage: the workhorse for shooting and
/// scans. Returns the status; y is updated in place to the state at t1 (or at
/// the failure point).
IntegrationStatus integrate_final(const RhsFn& rhs, std::vector<double>& y,
                                  double t0, double t1, const IntegratorConfig& cfg);

/// States at t = 2*pi*k, k = 0..k_max, located on dense output (the main
/// march does not align steps to the boundaries; each sample is refined by a
/// short re-integration within its step).
struct StroboscopicResult {
    IntegrationStatus status = IntegrationStatus::Ok;
    std::vector<std::vector<double>> states;  // k = 0..k_max (truncated on failure)
};
StroboscopicResult sample_stroboscopic(const RhsFn& rhs, const std::vector<double>& y0,
                                       int k_max, const IntegratorConfig& cfg);

/// Integrates until the scalar event function changes sign; the first root is
/// located by bisection to |dt| <= 1e-10 and the trajectory halts there
/// (status EventStop, event recorded). Without a sign change this is
/// integrate().
using EventFn = std::function<double(double t, const double* y)>;
Trajectory integrate_with_event(const RhsFn& rhs, const std::vector<double>& y0,
                                double t0, double t1, const EventFn& event,
                                const IntegratorConfig& cfg);

}  // namespace spinspin

#endif
