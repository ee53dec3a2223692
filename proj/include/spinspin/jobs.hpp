#ifndef SPINSPIN_JOBS_HPP
#define SPINSPIN_JOBS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinspin/compare.hpp"
#include "spinspin/params.hpp"
#include "spinspin/poincare.hpp"
#include "spinspin/resonance.hpp"
#include "spinspin/stability.hpp"

namespace spinspin {

/// Flat key = value config with [section] headers and # comments.
class Config {
  public:
    /// Throws std::runtime_error with "<path>:<line>: message" on parse errors.
    static Config load(const std::string& path);
    static Config parse(const std::string& text, const std::string& origin = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Prints a double with 17 significant digits (lossless round trip).
std::string num17(double v);

int default_workers();

/// Deterministic work-sharing over n independent cells.
void parallel_for_cells(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// jobs; each writes its artifact files and returns a process exit code
// (0 ok, 2 = some cells failed, 3 = fatal)

struct StabilityScanJob {
    int m = 3;  // balanced m:2 single-body resonance
    double e_min = 0.0, e_max = 0.9;
    int e_steps = 64;
    double lambda_min = -3.0, lambda_max = 3.0;
    int lambda_steps = 64;
    int gamma_steps = 200;
    std::optional<double> gamma_min, gamma_max;
    std::string model = "spin-orbit";  // spin-orbit | spherical-companion | spin-spin
    double qhat = 0.0, sigma = 0.0;    // extra parameters of the r^-5 models
    int workers = 0;                   // 0 = hardware
    bool resume = false;
    std::string output = "stability.csv";
    IntegratorConfig integ{1e-10, 1e-10};
};

struct StabilityCellRecord {
    double e, lambda;
    int branch;         // solution index within the cell (0 when none found)
    int solutions;      // number of solutions in the cell
    double gamma, v0;   // velocity at t = pi and at t = 0
    double trace;       // body-1 Hill trace over one period
    std::string cls;    // Elliptic | Hyperbolic | ParabolicBand | None
};

int run_stability_scan(const StabilityScanJob& job,
                       std::vector<StabilityCellRecord>* out = nullptr);

struct PoincareJob {
    DimensionlessParams params;
    std::string model = "spin-spin";
    int k_max = 2000;
    bool mod_pi = false;
    // one map orbit per initial condition
    std::vector<SpinState> initials;
    std::string output = "poincare.csv";
    IntegratorConfig integ{1e-10, 1e-10};
};

int run_poincare(const PoincareJob& job);

struct CompareGridJob {
    double lambda_min = 1e-9, lambda_max = 1.0;
    int lambda_steps = 32;
    double sigma_min = 1e-4, sigma_max = 0.04;
    int sigma_steps = 32;
    ResonanceSpec spec;  // default set in make_default_compare_spec()
    int horizon_revs = 2;
    int samples_per_rev = 32;
    int workers = 0;
    bool resume = false;
    std::string output = "compare_grid.csv";
    IntegratorConfig integ{1e-10, 1e-10};
};

ResonanceSpec make_default_compare_spec();  // (1:1,3:2) type (0,0)

int run_compare_grid(const CompareGridJob& job, ComparisonGridResult* out = nullptr);

struct SyncSweepJob {
    DimensionlessParams base;  // lambda/qhat fixed; sigma1 swept
    std::vector<double> sigmas;
    SpinState initial;
    int k_max = 1500;
    std::string output = "sync_sweep.csv";
    IntegratorConfig integ{1e-10, 1e-10};
};

struct SyncSweepRecord {
    double sigma;
    double min1, max1, min2, max2;
    std::string relation;  // separated | merged | partial
};

/// Ring-extent relation used by the sweep: "separated" when the intervals are
/// disjoint or body 2 nests strictly inside body 1 with > 0.01 gaps,
/// "merged" when both endpoints agree within 0.02, else "partial".
std::string classify_ring_relation(double min1, double max1, double min2, double max2);

int run_sync_sweep(const SyncSweepJob& job, std::vector<SyncSweepRecord>* out = nullptr);

/// Writes the resonance-solution CSV (spec fields, params, v0, residual,
/// converged) and returns 0/2.
int write_solutions_csv(const std::string& path, const std::vector<ResonanceSolution>& sols);

/// JSON record of a single solution.
std::string solution_json(const ResonanceSolution& sol);

/// Floquet table rows (block, re, im, modulus, argument) for the comparison.
int write_floquet_csv(const std::string& path, const FloquetComparison& fc);

}  // namespace spinspin

#endif
