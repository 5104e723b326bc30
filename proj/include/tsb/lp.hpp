#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace tsb {

enum class RowSense { le, ge };

struct LpRow {
    std::vector<int> cols;
    std::vector<double> vals;
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

// Sparse linear program: minimize c'x subject to the rows and variable bounds.
class LinearProgram {
public:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    int add_variable(double lb, double ub, double obj, std::string name = {});
    void add_row(LpRow row);

    int num_vars() const { return static_cast<int>(objective_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    const std::vector<double>& objective() const { return objective_; }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<LpRow>& rows() const { return rows_; }
    const std::string& name(int var) const { return names_[var]; }

    double row_activity(const LpRow& row, const std::vector<double>& x) const;

    // CPLEX LP text format, for cross-checking against external solvers
    std::string to_lp_format() const;

private:
    std::vector<double> objective_, lower_, upper_;
    std::vector<std::string> names_;
    std::vector<LpRow> rows_;
};

enum class SolveStatus { optimal, near_optimal, iteration_limit, numerical_failure };

const char* to_string(SolveStatus s);

struct LpSolution {
    SolveStatus status = SolveStatus::numerical_failure;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> duals; // one per row, for the row as given
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double relative_gap = 0.0;
    int iterations = 0;

    bool usable(double loose_tol = 1e-6) const {
        return status == SolveStatus::optimal ||
               (primal_infeasibility < loose_tol && relative_gap < loose_tol);
    }
};

struct SolverOptions {
    double tol_gap = 1e-9;
    double tol_primal = 1e-10;
    double tol_dual = 1e-10;
    int max_iterations = 200;
    bool verbose = false;
};

class LpSolver {
public:
    virtual ~LpSolver() = default;
    virtual LpSolution solve(const LinearProgram& lp) const = 0;
    virtual std::string name() const = 0;
};

// Primal-dual interior-point method (Mehrotra predictor-corrector) with the
// normal equations factored by sparse LDLT.
class InteriorPointSolver : public LpSolver {
public:
    explicit InteriorPointSolver(SolverOptions options = {});
    LpSolution solve(const LinearProgram& lp) const override;
    std::string name() const override { return "builtin-ipm"; }

private:
    SolverOptions options_;
};

// backend selection: explicit argument, else the SOLVER_BACKEND environment
// variable, else the built-in interior-point method
std::unique_ptr<LpSolver> make_solver(const std::string& backend = {},
                                      SolverOptions options = {});

} // namespace tsb
