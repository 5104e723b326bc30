#include "tsb/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tsb {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

TimeMatrix::TimeMatrix(std::vector<double> machine1, std::vector<double> machine2)
    : row1_(std::move(machine1)), row2_(std::move(machine2)) {
    require(row1_.size() == row2_.size(), "TimeMatrix: rows differ in length");
    require(!row1_.empty(), "TimeMatrix: needs at least one task");
    for (std::size_t j = 0; j < row1_.size(); ++j) {
        require(finite_positive(row1_[j]) && finite_positive(row2_[j]),
                "TimeMatrix: entries must be finite and > 0");
    }
}

std::vector<double> TimeMatrix::ratios() const {
    std::vector<double> r(tasks());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = ratio(j);
    return r;
}

TimeMatrix TimeMatrix::scaled(double lambda) const {
    require(finite_positive(lambda), "TimeMatrix::scaled: lambda must be > 0");
    std::vector<double> a = row1_, b = row2_;
    for (auto& v : a) v *= lambda;
    for (auto& v : b) v *= lambda;
    return TimeMatrix(std::move(a), std::move(b));
}

TimeMatrix TimeMatrix::permuted(const std::vector<std::size_t>& perm) const {
    require(perm.size() == tasks(), "TimeMatrix::permuted: bad permutation size");
    std::vector<double> a(tasks()), b(tasks());
    for (std::size_t j = 0; j < perm.size(); ++j) {
        a[j] = row1_[perm[j]];
        b[j] = row2_[perm[j]];
    }
    return TimeMatrix(std::move(a), std::move(b));
}

std::string TimeMatrix::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    for (int i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < tasks(); ++j) {
            if (j) out << ',';
            out << at(i, j);
        }
        out << '\n';
    }
    return out.str();
}

TimeMatrix TimeMatrix::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    require(rows.size() == 2, "TimeMatrix::from_csv: expected exactly two rows");
    return TimeMatrix(std::move(rows[0]), std::move(rows[1]));
}

void DiscreteThresholdDistribution::validate() const {
    require(n >= 1, "distribution: n must be >= 1");
    require(!atoms.empty(), "distribution: needs at least one atom");
    double total = 0.0;
    for (const auto& atom : atoms) {
        require(atom.z.size() == n, "distribution: atom dimension mismatch");
        require(atom.weight >= 0.0, "distribution: negative weight");
        for (double zi : atom.z) require(finite_positive(zi), "distribution: thresholds must be > 0");
        total += atom.weight;
    }
    require(std::abs(total - 1.0) <= 1e-12, "distribution: weights must sum to 1");
    if (symmetric) {
        // every atom's coordinate permutations must carry the same total weight
        auto weight_of = [&](const std::vector<double>& z) {
            double w = 0.0;
            for (const auto& atom : atoms)
                if (atom.z == z) w += atom.weight;
            return w;
        };
        for (const auto& atom : atoms) {
            std::vector<double> p = atom.z;
            std::sort(p.begin(), p.end());
            const double base = weight_of(p);
            do {
                require(std::abs(weight_of(p) - base) <= 1e-12,
                        "distribution: symmetric flag set but atoms are not permutation-invariant");
            } while (std::next_permutation(p.begin(), p.end()));
        }
    }
}

DiscreteThresholdDistribution DiscreteThresholdDistribution::symmetrized() const {
    DiscreteThresholdDistribution out;
    out.n = n;
    out.symmetric = true;
    for (const auto& atom : atoms) {
        std::vector<double> p = atom.z;
        std::sort(p.begin(), p.end());
        std::vector<std::vector<double>> perms;
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        for (const auto& q : perms) out.atoms.push_back({q, atom.weight / perms.size()});
    }
    return out;
}

MarginPair margins(const DiscreteThresholdDistribution& dist) {
    auto atoms = std::make_shared<std::vector<DiscreteThresholdDistribution::Atom>>(dist.atoms);
    const bool bivariate = dist.n >= 2;
    MarginPair m;
    m.F = [atoms](double x) {
        double p = 0.0;
        for (const auto& a : *atoms)
            if (a.z[0] <= x) p += a.weight;
        return p;
    };
    m.H = [atoms, bivariate](double x, double y) {
        double p = 0.0;
        for (const auto& a : *atoms) {
            const double z2 = bivariate ? a.z[1] : a.z[0];
            if (a.z[0] <= x && z2 <= y) p += a.weight;
        }
        return p;
    };
    return m;
}

double makespan(const Allocation& x, const TimeMatrix& t) {
    require(x.tasks() == t.tasks(), "makespan: allocation/matrix dimension mismatch");
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < t.tasks(); ++j) {
        if (x.assignment[j] == Machine::one)
            m1 += t.at(0, j);
        else
            m2 += t.at(1, j);
    }
    return std::max(m1, m2);
}

Allocation optimal_allocation(const TimeMatrix& t, std::size_t brute_force_cap) {
    const std::size_t n = t.tasks();
    require(n <= brute_force_cap, "optimal_makespan: task count exceeds brute-force cap");
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (std::uint64_t{1} << j))
                m1 += t.at(0, j);
            else
                m2 += t.at(1, j);
        }
        const double m = std::max(m1, m2);
        if (m < best) {
            best = m;
            best_mask = mask;
        }
    }
    Allocation a;
    a.assignment.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        a.assignment[j] = (best_mask & (std::uint64_t{1} << j)) ? Machine::one : Machine::two;
    return a;
}

double optimal_makespan(const TimeMatrix& t, std::size_t brute_force_cap) {
    return makespan(optimal_allocation(t, brute_force_cap), t);
}

Allocation allocate(const std::vector<double>& z, const TimeMatrix& t) {
    require(z.size() == t.tasks(), "allocate: threshold/matrix dimension mismatch");
    Allocation a;
    a.assignment.resize(t.tasks());
    for (std::size_t j = 0; j < t.tasks(); ++j) {
        require(finite_positive(z[j]), "allocate: thresholds must be > 0");
        a.assignment[j] = (t.ratio(j) < z[j]) ? Machine::one : Machine::two;
    }
    return a;
}

double expected_ratio(const DiscreteThresholdDistribution& dist, const TimeMatrix& t,
                      std::size_t brute_force_cap) {
    dist.validate();
    require(dist.n == t.tasks(), "expected_ratio: dimension mismatch");
    const double opt = optimal_makespan(t, brute_force_cap);
    double acc = 0.0;
    for (const auto& atom : dist.atoms) {
        if (atom.weight == 0.0) continue;
        acc += atom.weight * makespan(allocate(atom.z, t), t);
    }
    const double r = acc / opt;
    if (!std::isfinite(r)) throw std::runtime_error("expected_ratio: non-finite result");
    return r;
}

double phi(const MarginPair& m, double x, double y) {
    require(x > 0.0 && y > 0.0, "phi: x and y must be > 0");
    const double fx = m.F(x);
    const double fy = m.F(y);
    const double h = m.H(x, y);
    return 1.0 + y - std::min(1.0, 1.0 - 1.0 / x + y) * fx - y * fy +
           std::min(1.0 + 1.0 / x, 1.0 + y) * h;
}

TimeMatrix worst_case_instance(double x, double y, std::size_t n, double eps) {
    require(n >= 2, "worst_case_instance: n must be >= 2");
    require(finite_positive(x) && finite_positive(y), "worst_case_instance: x,y must be > 0");
    if (n > 2) require(eps > 0.0, "worst_case_instance: eps must be > 0 for n > 2");
    std::vector<double> r1 = {1.0, y}, r2 = {1.0 / x, 1.0};
    for (std::size_t j = 2; j < n; ++j) {
        r1.push_back(eps);
        r2.push_back(eps);
    }
    return TimeMatrix(std::move(r1), std::move(r2));
}

MonteCarloResult monte_carlo_ratio(const ThresholdSampler& sampler, const TimeMatrix& t,
                                   std::size_t trials, std::uint64_t seed,
                                   std::size_t brute_force_cap) {
    require(trials >= 1, "monte_carlo_ratio: trials must be >= 1");
    const double opt = optimal_makespan(t, brute_force_cap);
    CounterRng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const std::vector<double> z = sampler(rng, i);
        const double r = makespan(allocate(z, t), t) / opt;
        sum += r;
        sumsq += r * r;
    }
    MonteCarloResult res;
    res.trials = trials;
    res.mean = sum / trials;
    if (trials > 1) {
        const double var = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1));
        res.stderr_ = std::sqrt(var / trials);
    }
    return res;
}

ThresholdSampler make_sampler(const DiscreteThresholdDistribution& dist) {
    dist.validate();
    auto atoms = std::make_shared<std::vector<DiscreteThresholdDistribution::Atom>>(dist.atoms);
    auto cumulative = std::make_shared<std::vector<double>>();
    double acc = 0.0;
    for (const auto& a : *atoms) {
        acc += a.weight;
        cumulative->push_back(acc);
    }
    cumulative->back() = 1.0;
    return [atoms, cumulative](const CounterRng& rng, std::uint64_t counter) {
        const double u = rng.uniform(counter);
        const auto it = std::upper_bound(cumulative->begin(), cumulative->end(), u);
        const std::size_t idx =
            std::min<std::size_t>(it - cumulative->begin(), atoms->size() - 1);
        return (*atoms)[idx].z;
    };
}

} // namespace tsb
