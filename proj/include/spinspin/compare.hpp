#ifndef SPINSPIN_COMPARE_HPP
#define SPINSPIN_COMPARE_HPP

#include <complex>
#include <optional>
#include <vector>

#include "spinspin/dynamics.hpp"
#include "spinspin/integrator.hpp"
#include "spinspin/params.hpp"
#include "spinspin/resonance.hpp"
#include "spinspin/stability.hpp"

namespace spinspin {

struct ComparisonConfig {
    IntegratorConfig integ;
    int samples_per_rev = 32;  // intermediate sampling for the delta maxima
    PotentialTruncation hom_linear_trunc = PotentialTruncation::V2V4;
};

struct ComparisonSample {
    double t;
    double delta_a, delta_e;        // (a_F - a)/a and e_F - e
    double delta_res1, delta_res2;  // Keplerian minus full modified resonant angles
    double a_F, e_F, omega_F;
    bool omega_defined;
};

struct ComparisonRun {
    DimensionlessParams params;
    PhysicalParams phys;
    ResonanceSpec spec;
    ResonanceSolution solution;  // converged Keplerian spin-spin solution used
    int horizon_revs = 0;
    std::vector<ComparisonSample> series;  // truncated at a collision
    bool collision = false;
    double collision_time = 0.0;
    double collision_r = 0.0;
    bool ok = true;  // integration trouble flag (collision is not trouble)
};

/// Runs the full spin-spin model and the Keplerian model from identical
/// initial conditions (orbital periapsis start + the converged balanced
/// resonance spin data) and records the delta-diagnostics per sample; the
/// full run halts at a collision r_F <= sa1 + sa2.
/// Throws std::invalid_argument when the resonance does not converge.
ComparisonRun run_comparison(const DimensionlessParams& params, const ResonanceSpec& spec,
                             int horizon_revs, const ComparisonConfig& cfg = {});

struct FloquetComparison {
    MonodromyResult keplerian_spin;  // dim 4, along the spin-spin solution
    // the Kepler orbital block contributes multiplier 1 with multiplicity 4
    std::vector<std::complex<double>> keplerian_orbit{1.0, 1.0, 1.0, 1.0};
    MonodromyResult full;  // dim 8 linearization along the Keplerian solution
};

FloquetComparison floquet_of_comparison(const DimensionlessParams& params,
                                        const ResonanceSpec& spec,
                                        const ComparisonConfig& cfg = {});

enum class GridCellStatus { Ok, Collision, Failed };

struct ComparisonGridCell {
    double lambda, sigma;
    GridCellStatus status = GridCellStatus::Failed;
    double log10_max_abs_delta_e = 0.0;
    double log10_max_abs_delta_a = 0.0;
    double collision_time = 0.0;
    std::string error;
};

struct ComparisonGridResult {
    std::vector<double> lambdas, sigmas;
    std::vector<ComparisonGridCell> cells;  // row-major, sigma outer, lambda inner
};

/// One circular-orbit, equal-body comparison cell at (lambda, sigma), qhat = 0.
ComparisonGridCell compare_grid_cell(double lambda, double sigma, const ResonanceSpec& spec,
                                     int horizon_revs, const ComparisonConfig& cfg);

/// Circular-orbit comparison grid over (lambda, sigma) at qhat = 0 for equal
/// bodies, resonance fixed by spec (defaults to (1:1,3:2) type (0,0) in the
/// CLI). horizon_revs defaults to 2 (the 4*pi window).
ComparisonGridResult scan_comparison_grid(const std::vector<double>& lambdas,
                                          const std::vector<double>& sigmas,
                                          const ResonanceSpec& spec, int horizon_revs,
                                          int workers, const ComparisonConfig& cfg = {});

}  // namespace spinspin

#endif
