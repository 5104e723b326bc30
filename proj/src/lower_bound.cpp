#include "tsb/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tsb {

namespace {

// epigraph variable stays in [0, 10]: the Heaviside-at-1 CDF is feasible with
// worst-case value 2, so the optimum is never clipped
constexpr double kTLow = 0.0;
constexpr double kTHigh = 10.0;

} // namespace

double phi_on_grid(const FiniteCDF& g, int code_x, int code_y) {
    const double x = g.grid()[code_x - 1];
    if (g.dimension() == 1) {
        // single-task restriction: the adversarial column (1, 1/x) gives
        // max(1,x) * (1 - F(x) (1 - 1/x))
        const double fx = g.univariate(code_x);
        return std::max(1.0, x) * (1.0 - fx * (1.0 - 1.0 / x));
    }
    const double y = g.grid()[code_y - 1];
    const double fx = g.univariate(code_x);
    const double fy = g.univariate(code_y);
    const double h = g.bivariate(code_x, code_y);
    return 1.0 + y - std::min(1.0, 1.0 - 1.0 / x + y) * fx - y * fy +
           std::min(1.0 + 1.0 / x, 1.0 + y) * h;
}

LowerBoundLp::LowerBoundLp(std::size_t n, const GridSet& grid) : skeleton(n, grid) {
    const std::size_t orbits = skeleton.orbit_count();
    orbit_to_var.assign(orbits, -1);
    for (std::size_t idx = 0; idx + 1 < orbits; ++idx) // all-infinity orbit is the constant 1
        orbit_to_var[idx] = lp.add_variable(0.0, 1.0, 0.0, "g" + std::to_string(idx));
    t_var = lp.add_variable(kTLow, kTHigh, 1.0, "t");

    const int m = static_cast<int>(grid.size());
    const int inf_code = skeleton.infinity_code();

    // one orbit as (coefficient into row, constant into rhs)
    auto emit = [&](std::map<int, double>& coefs, double& rhs, std::vector<int> codes,
                    double weight) {
        for (int c : codes)
            if (c == 0) return; // g is 0 there
        const std::size_t idx = skeleton.orbit_index(std::move(codes));
        const int var = orbit_to_var[idx];
        if (var < 0)
            rhs -= weight; // fixed to 1
        else
            coefs[var] += weight;
    };

    auto push_row = [&](std::map<int, double>& coefs, RowSense sense, double rhs) {
        LpRow row;
        for (const auto& [var, coef] : coefs) {
            if (coef == 0.0) continue;
            row.cols.push_back(var);
            row.vals.push_back(coef);
        }
        if (row.cols.empty()) return false;
        row.sense = sense;
        row.rhs = rhs;
        lp.add_row(std::move(row));
        return true;
    };

    // phi rows: phi^g(x, y) <= t for grid points x, y
    if (n == 1) {
        for (int cx = 1; cx <= m; ++cx) {
            const double x = grid[cx - 1];
            std::map<int, double> coefs;
            double rhs = -std::max(1.0, x);
            emit(coefs, rhs, {cx}, -std::max(1.0, x) * (1.0 - 1.0 / x));
            coefs[t_var] += -1.0;
            push_row(coefs, RowSense::le, rhs);
            phi_pairs.emplace_back(x, x);
            phi_row_index.push_back(lp.num_rows() - 1);
        }
    } else {
        for (int cx = 1; cx <= m; ++cx)
            for (int cy = 1; cy <= m; ++cy) {
                const double x = grid[cx - 1];
                const double y = grid[cy - 1];
                const double alpha = std::min(1.0, 1.0 - 1.0 / x + y);
                const double beta = std::min(1.0 + 1.0 / x, 1.0 + y);
                std::map<int, double> coefs;
                double rhs = -(1.0 + y);
                std::vector<int> fx(n, inf_code), fy(n, inf_code), h(n, inf_code);
                fx[0] = cx;
                fy[0] = cy;
                h[0] = cx;
                h[1] = cy;
                emit(coefs, rhs, std::move(fx), -alpha);
                emit(coefs, rhs, std::move(fy), -y);
                emit(coefs, rhs, std::move(h), beta);
                coefs[t_var] += -1.0;
                push_row(coefs, RowSense::le, rhs);
                phi_pairs.emplace_back(x, y);
                phi_row_index.push_back(lp.num_rows() - 1);
            }
    }

    // n-increasing rows over elementary boxes; symmetry of g lets us keep one
    // box per sorted lower corner
    std::vector<int> lower(n, 0);
    std::vector<int> vertex(n);
    while (true) {
        std::map<int, double> coefs;
        double rhs = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            int low_count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) {
                    vertex[i] = lower[i];
                    ++low_count;
                } else {
                    vertex[i] = lower[i] + 1;
                }
            }
            emit(coefs, rhs, vertex, low_count % 2 == 0 ? 1.0 : -1.0);
        }
        push_row(coefs, RowSense::ge, rhs);
        std::size_t i = n;
        while (i > 0 && lower[i - 1] == m) --i;
        if (i == 0) break;
        const int v = lower[i - 1] + 1;
        for (std::size_t j = i - 1; j < n; ++j) lower[j] = v;
    }
}

LinearProgram build_lp(std::size_t n, const GridSet& grid) {
    return LowerBoundLp(n, grid).lp;
}

LowerBoundResult solve_lp(const LowerBoundLp& built, const LpSolver& solver,
                          double binding_tol) {
    const LpSolution sol = solver.solve(built.lp);
    if (!sol.usable())
        throw SolverError(sol.status, std::string("lower-bound LP: solver reported ") +
                                          to_string(sol.status));

    LowerBoundResult result{.bound = sol.x[built.t_var],
                            .g = built.skeleton,
                            .grid = built.skeleton.grid(),
                            .status = sol.status,
                            .binding_pairs = {},
                            .solver_gap = sol.relative_gap,
                            .lp_rows = built.lp.num_rows(),
                            .lp_vars = built.lp.num_vars()};
    for (std::size_t idx = 0; idx < result.g.orbit_count(); ++idx) {
        const int var = built.orbit_to_var[idx];
        if (var >= 0) result.g.set_orbit_value(idx, sol.x[var]);
    }
    for (std::size_t p = 0; p < built.phi_pairs.size(); ++p) {
        const auto& row = built.lp.rows()[built.phi_row_index[p]];
        const double slack = row.rhs - built.lp.row_activity(row, sol.x);
        if (slack <= binding_tol) result.binding_pairs.push_back(built.phi_pairs[p]);
    }
    return result;
}

LowerBoundResult lower_bound(std::size_t n, const GridSet& grid, const LpSolver& solver,
                             double binding_tol) {
    const LowerBoundLp built(n, grid);
    LowerBoundResult result = solve_lp(built, solver, binding_tol);

    // audit the solver: re-evaluate every phi pair from the reassembled g
    const int m = static_cast<int>(grid.size());
    double worst = 0.0;
    if (n == 1) {
        for (int cx = 1; cx <= m; ++cx) worst = std::max(worst, phi_on_grid(result.g, cx, cx));
    } else {
        for (int cx = 1; cx <= m; ++cx)
            for (int cy = 1; cy <= m; ++cy)
                worst = std::max(worst, phi_on_grid(result.g, cx, cy));
    }
    if (worst > result.bound + 1e-8)
        throw SolverError(result.status,
                          "lower-bound audit: recomputed phi exceeds the reported bound");
    return result;
}

std::string lower_bound_to_json(const LowerBoundResult& result) {
    nlohmann::ordered_json j;
    j["bound"] = result.bound;
    j["grid"] = result.grid.points();
    j["status"] = to_string(result.status);
    j["solver_gap"] = result.solver_gap;
    j["lp_rows"] = result.lp_rows;
    j["lp_vars"] = result.lp_vars;
    nlohmann::ordered_json tight = nlohmann::ordered_json::array();
    for (const auto& [x, y] : result.binding_pairs) tight.push_back({x, y});
    j["tight_pairs"] = std::move(tight);
    j["g"] = nlohmann::ordered_json::parse(finite_cdf_to_json(result.g));
    return j.dump();
}

} // namespace tsb
