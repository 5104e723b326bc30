#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "tsb/finite_cdf.hpp"
#include "tsb/lower_bound.hpp"

namespace tsb {

struct BoundReport {
    std::size_t n = 0;
    std::size_t k = 0; // half-count of the symmetric grid
    double a = 0.0;
    double bound = 0.0;
    std::string bound_rational;   // exact mode only, "p/q"
    std::string bound_decimal_up; // exact mode only, rounded up
    std::pair<int, int> argmax_cell{0, 0};
    std::string mode = "float"; // "float" or "exact"
    int repaired_orbits = 0;    // exact mode: box measures clamped during validation
};

// Worst-case expected ratio of the step-function algorithm built from g with
// sentinel a: exact supremum over interval pairs, cell by cell. Requires a
// symmetric grid (reciprocal-closed, containing 1).
BoundReport upper_bound(const FiniteCDF& g, double a);

// Re-derives the bound in exact rational arithmetic after rounding the grid,
// a, and the orbit values to `digits` decimals; the rounded data is validated
// as an exact CDF (tolerance zero), with non-increasing box measures clamped
// and renormalized when rounding nicked them.
BoundReport certify_exact(const FiniteCDF& g, double a, int digits = 8);

// Second-stage LP: over the near-optimal face { phi^g <= t_face } of the
// lower-bound LP, pick the g minimizing the step-function upper bound (the
// cell values are linear in g). Returns the g to hand to upper_bound.
FiniteCDF optimize_extension(std::size_t n, const GridSet& grid, double a, double t_face,
                             const LpSolver& solver);

struct SpotCheckResult {
    double max_sampled_ratio = 0.0;
    double cell_supremum = 0.0;
    double max_stderr = 0.0;
    std::size_t samples = 0;
};

// samples (x, y) inside a cell, runs the threshold algorithm induced by g on
// the adversarial instance for each sample, and compares against the cell
// supremum
SpotCheckResult ratio_spot_check(const FiniteCDF& g, double a, std::pair<int, int> cell,
                                 std::size_t samples, std::size_t trials, std::uint64_t seed,
                                 double eps = 1e-4);

std::string bound_report_to_json(const BoundReport& report);

} // namespace tsb
