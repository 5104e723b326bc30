#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsb/grid.hpp"
#include "tsb/lp.hpp"
#include "tsb/mechanism.hpp"
#include "tsb/upper_bound.hpp"

namespace tsb {

// Univariate CDF that is linear in 1/x below each breakpoint and linear in x
// above, tied together by F(x) + F(1/x) = 1. Piece i covers the i-th interval
// below 1 as F(x) = c0[i] + c1[i]/x and mirrors onto the matching interval
// above 1 as F(x) = 1 - c0[i] - c1[i] x. Piece 1 is pinned to zero, so F is 0
// below the least breakpoint and 1 from its reciprocal on.
class PiecewiseRationalCDF {
public:
    PiecewiseRationalCDF(GridSet grid, std::vector<double> c0, std::vector<double> c1);

    std::size_t k() const { return c0_.size(); }
    const GridSet& grid() const { return grid_; }
    double c0(std::size_t piece) const { return c0_[piece - 1]; } // 1-based
    double c1(std::size_t piece) const { return c1_[piece - 1]; }

    double operator()(double x) const; // CDF value, right-continuous
    int interval_of(double x) const;   // 1-based interval index in the 2k cover

    // family membership: piece 1 zero, each piece nondecreasing as part of F,
    // junction chain, and F(1) >= 1/2; throws with the first broken condition
    void validate(double tol = 1e-9) const;

    std::string to_json() const;
    static PiecewiseRationalCDF from_json(const std::string& text);

private:
    GridSet grid_;
    std::vector<double> c0_, c1_; // piece i at index i-1
};

// margins (F, H) with H the pointwise-least bivariate CDF with margins F
MarginPair copula_lower_frechet(const PiecewiseRationalCDF& f);
MarginPair copula_lower_frechet(std::function<double(double)> f);

// the two-task objective on the region xy >= 1
double phi_two(const PiecewiseRationalCDF& f, double x, double y);

// guard for the n=2-only construction: the sum-of-margins lower envelope is
// not a CDF in three or more dimensions
void require_two_tasks(std::size_t n);

struct CutSet {
    std::vector<std::pair<double, double>> points; // all with xy >= 1
};

struct MasterSolution {
    PiecewiseRationalCDF f;
    double t_lower = 0.0;
    SolveStatus status = SolveStatus::numerical_failure;
    std::vector<double> slacks; // per cut, t - phi(x,y) at the optimum
};

MasterSolution master_lp(const CutSet& cuts, const GridSet& grid, const LpSolver& solver);

struct CellMax {
    double value = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// supremum of phi_two over the closure of I_i x I_j intersected with xy >= 1,
// by finite candidate enumeration (corners, per-edge stationary points, the
// interior stationary point, and on-curve candidates when the cell meets
// xy = 1); requires i + j >= 2k + 1
CellMax inner_max(const PiecewiseRationalCDF& f, int i, int j);

enum class RefineStatus { converged, stalled, iteration_limit };

struct RefineResult {
    PiecewiseRationalCDF f;
    double t_lower = 0.0;
    double t_upper = 0.0;
    CutSet cuts;
    int iterations = 0;
    RefineStatus status = RefineStatus::iteration_limit;
    std::vector<std::pair<double, double>> trace; // (t_lower, t_upper) per iteration
    std::pair<int, int> argmax_cell{0, 0};
};

struct CuttingPlaneOptions {
    double stop_tol = 1e-8;
    int max_iter = 1000;
    double duplicate_tol = 1e-12;
};

// Kelley cutting-plane loop: alternate the master LP with a full inner_max
// sweep, appending the sweep argmax to the cut set until the bracket closes.
RefineResult cutting_plane(const GridSet& grid, const LpSolver& solver,
                           CuttingPlaneOptions options = {});

// grid of binding-constraint coordinates and their reciprocals, rounded to 8
// decimals, for feeding back into the lower-bound LP
GridSet refine_grid(const RefineResult& result, double binding_tol = 1e-7);

// exact-rational re-evaluation of the inner sweep for the given f; the
// certified object is f with its piece endpoints repaired to an exact CDF
struct TwoTaskCertificate {
    double bound_float = 0.0;
    std::string bound_rational;
    std::string bound_decimal_up;
};
TwoTaskCertificate certify_two_task(const PiecewiseRationalCDF& f);

std::string refine_result_to_json(const RefineResult& result);

} // namespace tsb
