#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tsb/finite_cdf.hpp"
#include "tsb/grid.hpp"
#include "tsb/lp.hpp"

namespace tsb {

// Epigraph linear program whose optimum is the grid-restricted bound: the
// variables are the free orbit values of a symmetric g on the extended grid
// plus the epigraph variable t; boundary orbits (a zero coordinate, or all
// infinities) are substituted as constants at build time.
struct LowerBoundLp {
    LinearProgram lp;
    FiniteCDF skeleton;            // value layout (orbit indexing) for reassembly
    std::vector<int> orbit_to_var; // -1 for eliminated boundary orbits
    int t_var = -1;
    std::vector<std::pair<double, double>> phi_pairs; // (x, y) per phi row, in row order
    std::vector<int> phi_row_index;                   // LP row index per phi pair

    LowerBoundLp(std::size_t n, const GridSet& grid);
};

LinearProgram build_lp(std::size_t n, const GridSet& grid);

struct LowerBoundResult {
    double bound = 0.0;
    FiniteCDF g;
    GridSet grid;
    SolveStatus status = SolveStatus::numerical_failure;
    std::vector<std::pair<double, double>> binding_pairs; // phi rows tight at optimum
    double solver_gap = 0.0;
    int lp_rows = 0;
    int lp_vars = 0;
};

// thrown when the backend reports failure or the solution fails its audit
struct SolverError : std::runtime_error {
    SolveStatus status;
    SolverError(SolveStatus s, const std::string& what)
        : std::runtime_error(what), status(s) {}
};

LowerBoundResult solve_lp(const LowerBoundLp& built, const LpSolver& solver,
                          double binding_tol = 1e-7);

// build + solve + an independent audit that re-evaluates every phi pair from
// the reassembled g and checks it never exceeds the bound by more than 1e-8
LowerBoundResult lower_bound(std::size_t n, const GridSet& grid, const LpSolver& solver,
                             double binding_tol = 1e-7);

// restricted phi on grid values, evaluated from a finite g by code
double phi_on_grid(const FiniteCDF& g, int code_x, int code_y);

std::string lower_bound_to_json(const LowerBoundResult& result);

} // namespace tsb
