#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsb/rng.hpp"

namespace tsb {

// Which of the two machines a task is assigned to.
enum class Machine : std::uint8_t { one = 0, two = 1 };

// 2 x n matrix of strictly positive processing times.
class TimeMatrix {
public:
    TimeMatrix(std::vector<double> machine1, std::vector<double> machine2);

    std::size_t tasks() const { return row1_.size(); }
    double at(int machine, std::size_t task) const {
        return machine == 0 ? row1_[task] : row2_[task];
    }
    // per-task processing-time ratio T1j / T2j
    double ratio(std::size_t task) const { return row1_[task] / row2_[task]; }
    std::vector<double> ratios() const;

    TimeMatrix scaled(double lambda) const;
    TimeMatrix permuted(const std::vector<std::size_t>& perm) const;

    std::string to_csv() const;
    static TimeMatrix from_csv(const std::string& text);

private:
    std::vector<double> row1_, row2_;
};

struct Allocation {
    std::vector<Machine> assignment;
    std::size_t tasks() const { return assignment.size(); }
};

// Finite-support distribution over threshold vectors z in R^n_{++}.
struct DiscreteThresholdDistribution {
    struct Atom {
        std::vector<double> z;
        double weight;
    };
    std::size_t n = 0;
    std::vector<Atom> atoms;
    bool symmetric = false;

    // throws std::invalid_argument on bad weights, dimensions or thresholds;
    // with the symmetric flag set, also requires the atom set to be invariant
    // under coordinate permutations of z
    void validate() const;

    // closes the atom set under coordinate permutations (splitting weights)
    DiscreteThresholdDistribution symmetrized() const;
};

// Univariate and bivariate CDF evaluators of a threshold distribution.
// Both accept any point of [0, +inf]; +inf is the usual double infinity here.
struct MarginPair {
    std::function<double(double)> F;
    std::function<double(double, double)> H;
};

// Margins of a finite-support distribution. The distribution should be
// symmetric (or exchangeable) so that all univariate/bivariate margins agree;
// coordinates 1 and 2 are used.
MarginPair margins(const DiscreteThresholdDistribution& dist);

// max over machines of the total time assigned to it
double makespan(const Allocation& x, const TimeMatrix& t);

// minimum makespan over all 2^n allocations; n is capped (default 20)
double optimal_makespan(const TimeMatrix& t, std::size_t brute_force_cap = 20);
Allocation optimal_allocation(const TimeMatrix& t, std::size_t brute_force_cap = 20);

// threshold rule: task j goes to machine 1 iff T1j/T2j < z_j, ties to machine 2
Allocation allocate(const std::vector<double>& z, const TimeMatrix& t);

// expected approximation ratio of the threshold algorithm driven by `dist`
double expected_ratio(const DiscreteThresholdDistribution& dist, const TimeMatrix& t,
                      std::size_t brute_force_cap = 20);

// worst-case expected-ratio expression over a threshold-ratio pair (x, y)
double phi(const MarginPair& margins, double x, double y);

// 2 x n instance with columns (1, 1/x), (y, 1) and n-2 columns (eps, eps)
TimeMatrix worst_case_instance(double x, double y, std::size_t n, double eps = 0.0);

struct MonteCarloResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
};

using ThresholdSampler = std::function<std::vector<double>(const CounterRng&, std::uint64_t)>;

// Monte-Carlo estimate of the expected ratio; deterministic for a fixed seed.
MonteCarloResult monte_carlo_ratio(const ThresholdSampler& sampler, const TimeMatrix& t,
                                   std::size_t trials, std::uint64_t seed,
                                   std::size_t brute_force_cap = 20);

// sampler drawing atoms of a finite-support distribution by inverse CDF
ThresholdSampler make_sampler(const DiscreteThresholdDistribution& dist);

} // namespace tsb
