#include "tsb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace tsb {

int LinearProgram::add_variable(double lb, double ub, double obj, std::string name) {
    if (lb > ub) throw std::invalid_argument("LinearProgram: lb > ub");
    lower_.push_back(lb);
    upper_.push_back(ub);
    objective_.push_back(obj);
    if (name.empty()) name = "x" + std::to_string(objective_.size() - 1);
    names_.push_back(std::move(name));
    return static_cast<int>(objective_.size()) - 1;
}

void LinearProgram::add_row(LpRow row) {
    if (row.cols.size() != row.vals.size())
        throw std::invalid_argument("LinearProgram: row cols/vals mismatch");
    for (int c : row.cols)
        if (c < 0 || c >= num_vars()) throw std::invalid_argument("LinearProgram: bad column");
    rows_.push_back(std::move(row));
}

double LinearProgram::row_activity(const LpRow& row, const std::vector<double>& x) const {
    double a = 0.0;
    for (std::size_t i = 0; i < row.cols.size(); ++i) a += row.vals[i] * x[row.cols[i]];
    return a;
}

std::string LinearProgram::to_lp_format() const {
    std::ostringstream out;
    out.precision(17);
    out << "Minimize\n obj:";
    for (int i = 0; i < num_vars(); ++i)
        if (objective_[i] != 0.0)
            out << (objective_[i] >= 0 ? " + " : " - ") << std::abs(objective_[i]) << ' ' << names_[i];
    out << "\nSubject To\n";
    for (int r = 0; r < num_rows(); ++r) {
        const auto& row = rows_[r];
        out << " c" << r << ":";
        for (std::size_t i = 0; i < row.cols.size(); ++i)
            out << (row.vals[i] >= 0 ? " + " : " - ") << std::abs(row.vals[i]) << ' '
                << names_[row.cols[i]];
        out << (row.sense == RowSense::le ? " <= " : " >= ") << row.rhs << '\n';
    }
    out << "Bounds\n";
    for (int i = 0; i < num_vars(); ++i) {
        const double lb = lower_[i], ub = upper_[i];
        if (lb == -inf && ub == inf)
            out << ' ' << names_[i] << " free\n";
        else if (ub == inf)
            out << ' ' << names_[i] << " >= " << lb << '\n';
        else if (lb == -inf)
            out << ' ' << names_[i] << " <= " << ub << '\n';
        else
            out << ' ' << lb << " <= " << names_[i] << " <= " << ub << '\n';
    }
    out << "End\n";
    return out.str();
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::near_optimal: return "near_optimal";
        case SolveStatus::iteration_limit: return "iteration_limit";
        case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

InteriorPointSolver::InteriorPointSolver(SolverOptions options) : options_(options) {}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormalizedLp {
    // all rows as a'x <= b, scaled to unit max coefficient
    std::vector<LpRow> rows;
    std::vector<double> rhs;
    std::vector<double> row_scale; // original coefficients were divided by this
    std::vector<int> origin;       // original row index
};

NormalizedLp normalize(const LinearProgram& lp) {
    NormalizedLp out;
    for (int r = 0; r < lp.num_rows(); ++r) {
        LpRow row = lp.rows()[r];
        {
            // merge duplicate columns; the normal-equations assembly needs
            // one coefficient per variable
            std::vector<std::pair<int, double>> merged;
            for (std::size_t i = 0; i < row.cols.size(); ++i)
                merged.emplace_back(row.cols[i], row.vals[i]);
            std::sort(merged.begin(), merged.end());
            row.cols.clear();
            row.vals.clear();
            for (const auto& [col, val] : merged) {
                if (!row.cols.empty() && row.cols.back() == col)
                    row.vals.back() += val;
                else {
                    row.cols.push_back(col);
                    row.vals.push_back(val);
                }
            }
        }
        double rhs = row.rhs;
        if (row.sense == RowSense::ge) {
            for (auto& v : row.vals) v = -v;
            rhs = -rhs;
        }
        double scale = 0.0;
        for (double v : row.vals) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) {
            if (rhs < 0.0) throw std::invalid_argument("LP: contradictory empty row");
            continue; // trivially satisfied
        }
        for (auto& v : row.vals) v /= scale;
        out.rows.push_back(std::move(row));
        out.rhs.push_back(rhs / scale);
        out.row_scale.push_back(scale);
        out.origin.push_back(r);
    }
    return out;
}

struct NormalEquations {
    // M = A' D_r A + diag(d_b) + delta I over a fixed sparsity pattern
    Eigen::SparseMatrix<double> M;
    std::vector<std::vector<int>> row_slots; // per row: slot per (i>=j) pair
    std::vector<int> diag_slots;

    NormalEquations(const NormalizedLp& n, int nv) {
        std::vector<Eigen::Triplet<double>> trips;
        for (const auto& row : n.rows)
            for (std::size_t a = 0; a < row.cols.size(); ++a)
                for (std::size_t b = 0; b < row.cols.size(); ++b) {
                    const int i = row.cols[a], j = row.cols[b];
                    if (i >= j) trips.emplace_back(i, j, 0.0);
                }
        for (int i = 0; i < nv; ++i) trips.emplace_back(i, i, 0.0);
        M.resize(nv, nv);
        M.setFromTriplets(trips.begin(), trips.end());
        M.makeCompressed();

        auto slot_of = [this](int i, int j) {
            // lower-triangular storage, column-major: find row i in column j
            for (int p = static_cast<int>(M.outerIndexPtr()[j]); p < M.outerIndexPtr()[j + 1]; ++p)
                if (M.innerIndexPtr()[p] == i) return p;
            throw std::logic_error("normal equations: missing slot");
        };
        row_slots.reserve(n.rows.size());
        for (const auto& row : n.rows) {
            std::vector<int> slots;
            for (std::size_t a = 0; a < row.cols.size(); ++a)
                for (std::size_t b = 0; b <= a; ++b) {
                    const int i = std::max(row.cols[a], row.cols[b]);
                    const int j = std::min(row.cols[a], row.cols[b]);
                    slots.push_back(slot_of(i, j));
                }
            row_slots.push_back(std::move(slots));
        }
        diag_slots.resize(nv);
        for (int i = 0; i < nv; ++i) diag_slots[i] = slot_of(i, i);
    }

    void refill(const NormalizedLp& n, const std::vector<double>& d_row,
                const std::vector<double>& d_bnd, double delta) {
        double* vals = M.valuePtr();
        std::fill(vals, vals + M.nonZeros(), 0.0);
        for (std::size_t r = 0; r < n.rows.size(); ++r) {
            const auto& row = n.rows[r];
            const auto& slots = row_slots[r];
            std::size_t s = 0;
            for (std::size_t a = 0; a < row.cols.size(); ++a)
                for (std::size_t b = 0; b <= a; ++b)
                    vals[slots[s++]] += d_row[r] * row.vals[a] * row.vals[b];
        }
        for (std::size_t i = 0; i < d_bnd.size(); ++i)
            vals[diag_slots[i]] += d_bnd[i] + delta;
    }
};

using Vec = Eigen::VectorXd;

} // namespace

LpSolution InteriorPointSolver::solve(const LinearProgram& lp) const {
    const int nv = lp.num_vars();
    const NormalizedLp n = normalize(lp);
    const int nr = static_cast<int>(n.rows.size());

    const std::vector<double>& lb = lp.lower();
    const std::vector<double>& ub = lp.upper();
    std::vector<char> has_lb(nv), has_ub(nv);
    for (int i = 0; i < nv; ++i) {
        has_lb[i] = lb[i] > -kInf;
        has_ub[i] = ub[i] < kInf;
    }

    Vec c(nv);
    for (int i = 0; i < nv; ++i) c[i] = lp.objective()[i];
    Vec b(nr);
    for (int r = 0; r < nr; ++r) b[r] = n.rhs[r];

    auto apply_A = [&](const Vec& x) {
        Vec out = Vec::Zero(nr);
        for (int r = 0; r < nr; ++r) {
            const auto& row = n.rows[r];
            double acc = 0.0;
            for (std::size_t i = 0; i < row.cols.size(); ++i) acc += row.vals[i] * x[row.cols[i]];
            out[r] = acc;
        }
        return out;
    };
    auto apply_At = [&](const Vec& y) {
        Vec out = Vec::Zero(nv);
        for (int r = 0; r < nr; ++r) {
            const auto& row = n.rows[r];
            for (std::size_t i = 0; i < row.cols.size(); ++i) out[row.cols[i]] += row.vals[i] * y[r];
        }
        return out;
    };

    // strictly interior start
    Vec x(nv);
    for (int i = 0; i < nv; ++i) {
        if (has_lb[i] && has_ub[i])
            x[i] = 0.5 * (lb[i] + ub[i]);
        else if (has_lb[i])
            x[i] = lb[i] + 1.0;
        else if (has_ub[i])
            x[i] = ub[i] - 1.0;
        else
            x[i] = 0.0;
    }
    Vec s(nr), y(nr);
    {
        const Vec ax = apply_A(x);
        for (int r = 0; r < nr; ++r) {
            s[r] = std::max(1.0, std::abs(b[r] - ax[r]));
            y[r] = 1.0;
        }
    }
    Vec zl = Vec::Zero(nv), zu = Vec::Zero(nv);
    for (int i = 0; i < nv; ++i) {
        if (has_lb[i]) zl[i] = 1.0;
        if (has_ub[i]) zu[i] = 1.0;
    }

    int n_compl = nr;
    for (int i = 0; i < nv; ++i) n_compl += (has_lb[i] ? 1 : 0) + (has_ub[i] ? 1 : 0);

    NormalEquations ne(n, nv);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool analyzed = false;

    const double bnorm = 1.0 + b.lpNorm<Eigen::Infinity>();
    const double cnorm = 1.0 + c.lpNorm<Eigen::Infinity>();

    LpSolution best;
    best.x.assign(nv, 0.0);
    double best_metric = kInf;

    auto record = [&](double pinf, double dinf, double gap, int iter) {
        const double metric = pinf + dinf + gap;
        if (metric < best_metric) {
            best_metric = metric;
            best.objective = c.dot(x);
            for (int i = 0; i < nv; ++i) best.x[i] = x[i];
            best.duals.assign(lp.num_rows(), 0.0);
            for (int r = 0; r < nr; ++r) best.duals[n.origin[r]] = y[r] / n.row_scale[r];
            best.primal_infeasibility = pinf;
            best.dual_infeasibility = dinf;
            best.relative_gap = gap;
            best.iterations = iter;
        }
    };

    double delta = 0.0;
    int iter = 0;
    for (; iter < options_.max_iterations; ++iter) {
        const Vec ax = apply_A(x);
        const Vec rp = b - ax - s;
        const Vec rd = c + apply_At(y) - zl + zu;

        double compl_sum = s.dot(y);
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) compl_sum += zl[i] * (x[i] - lb[i]);
            if (has_ub[i]) compl_sum += zu[i] * (ub[i] - x[i]);
        }
        const double mu = compl_sum / n_compl;

        double dual_obj = -b.dot(y);
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) dual_obj += lb[i] * zl[i];
            if (has_ub[i]) dual_obj -= ub[i] * zu[i];
        }
        const double pobj = c.dot(x);
        const double pinf = rp.lpNorm<Eigen::Infinity>() / bnorm;
        const double dinf = rd.lpNorm<Eigen::Infinity>() / cnorm;
        const double gap = std::abs(pobj - dual_obj) / (1.0 + std::abs(pobj));
        record(pinf, dinf, gap, iter);
        if (options_.verbose)
            std::cerr << "ipm iter " << iter << " mu=" << mu << " pinf=" << pinf
                      << " dinf=" << dinf << " gap=" << gap << '\n';
        if (pinf <= options_.tol_primal && dinf <= options_.tol_dual && gap <= options_.tol_gap) {
            best.status = SolveStatus::optimal;
            return best;
        }

        // scaling matrices
        std::vector<double> d_row(nr), d_bnd(nv, 0.0);
        for (int r = 0; r < nr; ++r) d_row[r] = y[r] / s[r];
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) d_bnd[i] += zl[i] / (x[i] - lb[i]);
            if (has_ub[i]) d_bnd[i] += zu[i] / (ub[i] - x[i]);
        }

        auto factorize = [&]() {
            ne.refill(n, d_row, d_bnd, delta);
            if (!analyzed) {
                ldlt.analyzePattern(ne.M);
                analyzed = true;
            }
            ldlt.factorize(ne.M);
            return ldlt.info() == Eigen::Success;
        };

        // returns the residual of the dual Newton equation, which carries all
        // of the factorization error; the primal equation holds by
        // construction of ds
        auto solve_newton = [&](const Vec& t_ys, const Vec& t_zl, const Vec& t_zu, Vec& dx,
                                Vec& ds, Vec& dy, Vec& dzl, Vec& dzu) {
            Vec rhs = -rd;
            Vec tmp = Vec::Zero(nr);
            for (int r = 0; r < nr; ++r) tmp[r] = (t_ys[r] - y[r] * rp[r]) / s[r];
            rhs -= apply_At(tmp);
            for (int i = 0; i < nv; ++i) {
                if (has_lb[i]) rhs[i] += t_zl[i] / (x[i] - lb[i]);
                if (has_ub[i]) rhs[i] -= t_zu[i] / (ub[i] - x[i]);
            }
            dx = ldlt.solve(rhs);
            // refinement against the unregularized equations in extended
            // precision; cancellation in M dx is what breaks late iterations
            for (int pass = 0; pass < 2; ++pass) {
                Vec resid = Vec::Zero(nv);
                for (std::size_t r = 0; r < n.rows.size(); ++r) {
                    const auto& row = n.rows[r];
                    long double acc = 0.0L;
                    for (std::size_t i = 0; i < row.cols.size(); ++i)
                        acc += static_cast<long double>(row.vals[i]) * dx[row.cols[i]];
                    const long double scaled = static_cast<long double>(d_row[r]) * acc;
                    for (std::size_t i = 0; i < row.cols.size(); ++i)
                        resid[row.cols[i]] -= static_cast<double>(row.vals[i] * scaled);
                }
                for (int i = 0; i < nv; ++i) resid[i] += rhs[i] - d_bnd[i] * dx[i];
                dx += ldlt.solve(resid);
            }
            const Vec adx = apply_A(dx);
            ds = rp - adx;
            for (int r = 0; r < nr; ++r) dy[r] = (t_ys[r] - y[r] * ds[r]) / s[r];
            for (int i = 0; i < nv; ++i) {
                dzl[i] = has_lb[i] ? (t_zl[i] - zl[i] * dx[i]) / (x[i] - lb[i]) : 0.0;
                dzu[i] = has_ub[i] ? (t_zu[i] + zu[i] * dx[i]) / (ub[i] - x[i]) : 0.0;
            }
            const Vec dual_resid = apply_At(dy) - dzl + dzu + rd;
            return dual_resid.lpNorm<Eigen::Infinity>();
        };

        auto max_primal_step = [&](const Vec& dx, const Vec& ds) {
            double a = 1.0;
            for (int r = 0; r < nr; ++r)
                if (ds[r] < 0.0) a = std::min(a, -s[r] / ds[r]);
            for (int i = 0; i < nv; ++i) {
                if (has_lb[i] && dx[i] < 0.0) a = std::min(a, -(x[i] - lb[i]) / dx[i]);
                if (has_ub[i] && dx[i] > 0.0) a = std::min(a, (ub[i] - x[i]) / dx[i]);
            }
            return a;
        };
        auto max_dual_step = [&](const Vec& dy, const Vec& dzl, const Vec& dzu) {
            double a = 1.0;
            for (int r = 0; r < nr; ++r)
                if (dy[r] < 0.0) a = std::min(a, -y[r] / dy[r]);
            for (int i = 0; i < nv; ++i) {
                if (has_lb[i] && dzl[i] < 0.0) a = std::min(a, -zl[i] / dzl[i]);
                if (has_ub[i] && dzu[i] < 0.0) a = std::min(a, -zu[i] / dzu[i]);
            }
            return a;
        };

        // affine (predictor) direction
        Vec t_ys(nr), t_zl = Vec::Zero(nv), t_zu = Vec::Zero(nv);
        for (int r = 0; r < nr; ++r) t_ys[r] = -y[r] * s[r];
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) t_zl[i] = -zl[i] * (x[i] - lb[i]);
            if (has_ub[i]) t_zu[i] = -zu[i] * (ub[i] - x[i]);
        }
        Vec dx(nv), ds(nr), dy(nr), dzl(nv), dzu(nv);
        solve_newton(t_ys, t_zl, t_zu, dx, ds, dy, dzl, dzu);
        const double ap_aff = max_primal_step(dx, ds);
        const double ad_aff = max_dual_step(dy, dzl, dzu);

        double compl_aff = 0.0;
        for (int r = 0; r < nr; ++r)
            compl_aff += (s[r] + ap_aff * ds[r]) * (y[r] + ad_aff * dy[r]);
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) compl_aff += (x[i] + ap_aff * dx[i] - lb[i]) * (zl[i] + ad_aff * dzl[i]);
            if (has_ub[i]) compl_aff += (ub[i] - x[i] - ap_aff * dx[i]) * (zu[i] + ad_aff * dzu[i]);
        }
        const double mu_aff = compl_aff / n_compl;
        double sigma = std::pow(std::min(1.0, mu_aff / mu), 3);
        sigma = std::clamp(sigma, 1e-9, 1.0 - 1e-9);

        // corrector with second-order terms from the affine direction
        for (int r = 0; r < nr; ++r) t_ys[r] = sigma * mu - y[r] * s[r] - dy[r] * ds[r];
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) t_zl[i] = sigma * mu - zl[i] * (x[i] - lb[i]) - dzl[i] * dx[i];
            if (has_ub[i]) t_zu[i] = sigma * mu - zu[i] * (ub[i] - x[i]) + dzu[i] * dx[i];
        }
        solve_newton(t_ys, t_zl, t_zu, dx, ds, dy, dzl, dzu);

        const double eta = 0.9995;
        const double ap = std::min(1.0, eta * max_primal_step(dx, ds));
        const double ad = std::min(1.0, eta * max_dual_step(dy, dzl, dzu));
        if (options_.verbose)
            std::cerr << "     sigma=" << sigma << " ap=" << ap << " ad=" << ad << '\n';
        if (ap < 1e-10 && ad < 1e-10) break; // stalled

        x += ap * dx;
        s += ap * ds;
        y += ad * dy;
        for (int i = 0; i < nv; ++i) {
            if (has_lb[i]) zl[i] += ad * dzl[i];
            if (has_ub[i]) zu[i] += ad * dzu[i];
        }
    }

    const double loose = 1e-6;
    if (best.primal_infeasibility < loose && best.dual_infeasibility < loose &&
        best.relative_gap < loose)
        best.status = SolveStatus::near_optimal;
    else
        best.status = iter >= options_.max_iterations ? SolveStatus::iteration_limit
                                                      : SolveStatus::numerical_failure;
    return best;
}

std::unique_ptr<LpSolver> make_solver(const std::string& backend, SolverOptions options) {
    std::string choice = backend;
    if (choice.empty()) {
        if (const char* env = std::getenv("SOLVER_BACKEND")) choice = env;
    }
    if (choice.empty() || choice == "ipm" || choice == "builtin-ipm")
        return std::make_unique<InteriorPointSolver>(options);
    throw std::invalid_argument("unknown solver backend: " + choice);
}

} // namespace tsb
