#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsb/grid.hpp"
#include "tsb/mechanism.hpp"

namespace tsb {

// Function g on the n-fold product of a grid extended by the sentinels 0 and
// infinity, symmetric under coordinate permutations. Coordinates are stored
// as integer codes: 0 = the zero sentinel, 1..m = grid points in increasing
// order, m+1 = infinity. Values are stored once per permutation orbit, keyed
// by the sorted code tuple; orbits containing the zero code are identically 0
// and are not stored.
class FiniteCDF {
public:
    FiniteCDF(std::size_t n, GridSet grid);

    std::size_t dimension() const { return n_; }
    const GridSet& grid() const { return grid_; }
    int infinity_code() const { return static_cast<int>(grid_.size()) + 1; }

    std::size_t orbit_count() const { return values_.size(); }
    const std::vector<int>& orbit_key(std::size_t idx) const { return keys_[idx]; }
    double orbit_value(std::size_t idx) const { return values_[idx]; }
    void set_orbit_value(std::size_t idx, double v) { values_[idx] = v; }

    // index of the orbit of `codes` (any order, no zero codes)
    std::size_t orbit_index(std::vector<int> codes) const;

    // g at the given codes; zero code wins, order irrelevant
    double value_by_codes(std::vector<int> codes) const;

    // univariate margin g(code, inf, ..., inf)
    double univariate(int code) const;
    // bivariate margin g(cx, cy, inf, ..., inf); requires n >= 2
    double bivariate(int cx, int cy) const;

    // boundary conditions of a CDF on the extended grid:
    // value 1 at (inf,...,inf), all values in [0,1]
    bool boundary_ok(double tol = 1e-12) const;

private:
    std::size_t n_;
    GridSet grid_;
    std::vector<std::vector<int>> keys_;     // sorted code tuples, lex order
    std::vector<double> values_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;

    std::uint64_t pack(const std::vector<int>& sorted_codes) const;
};

struct NIncreasingReport {
    bool ok = true;
    std::vector<int> violated_box_lower; // sorted lower-corner codes of the first bad box
    double violated_sum = 0.0;
};

// signed vertex sums over every elementary box of consecutive extended
// coordinates; boxes are enumerated by sorted lower corner in lex order and
// the first violation is reported
NIncreasingReport check_n_increasing(const FiniteCDF& g, double tol = 1e-10);

// Right-continuous step-function extension of g to all of R_+^n: the value at
// z is g at the componentwise largest breakpoint <= z, with the sentinel a
// standing in for infinity.
class PiecewiseConstantCDF {
public:
    PiecewiseConstantCDF(FiniteCDF g, double a);

    const FiniteCDF& source() const { return g_; }
    const ExtendedGrid& grid() const { return ext_; }

    double eval(const std::vector<double>& z) const;
    double F(double x) const;
    double H(double x, double y) const;
    MarginPair margins() const;

    // code of the interval floor for a scalar coordinate (0..m+1)
    int floor_code(double v) const;

    // the discrete distribution whose CDF this is: atoms at grid tuples with
    // the sentinel a carrying the tail mass; requires modest (m+1)^n
    DiscreteThresholdDistribution to_distribution() const;

private:
    FiniteCDF g_;
    ExtendedGrid ext_;
};

PiecewiseConstantCDF extend(FiniteCDF g, double a);

// JSON round-trip; doubles survive losslessly, infinity as the string "inf"
std::string finite_cdf_to_json(const FiniteCDF& g, std::optional<double> a = std::nullopt);
std::pair<FiniteCDF, std::optional<double>> finite_cdf_from_json(const std::string& text);

} // namespace tsb
