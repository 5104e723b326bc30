#pragma once

#include <cstddef>
#include <vector>

namespace tsb {

// Finite set of positive ratio breakpoints, strictly increasing. A symmetric
// grid has the form {r_1,...,r_{k-1}, 1, 1/r_{k-1},...,1/r_1}: closed under
// reciprocals and containing 1.
class GridSet {
public:
    GridSet() = default;
    explicit GridSet(std::vector<double> points, bool symmetric = false);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double max_point() const { return points_.back(); }
    bool symmetric() const { return symmetric_; }

    // for a symmetric grid of 2k-1 points, returns k
    std::size_t half_count() const { return (points_.size() + 1) / 2; }

    bool contains(double v, double rel_tol = 1e-12) const;

private:
    std::vector<double> points_;
    bool symmetric_ = false;
};

// {1/k, 2/k, ..., (k-1)/k, 1, k/(k-1), ..., k}; 2k-1 points, symmetric
GridSet uniform_grid(std::size_t k);

// Grid plus the free sentinel a > max(points) used to cut off the last
// unbounded piece of the step-function extension.
struct ExtendedGrid {
    GridSet base;
    double a = 0.0;

    ExtendedGrid(GridSet grid, double sentinel);
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0; // +inf for the last interval
};

// half-open intervals [0,s_1), [s_1,s_2), ..., [a, inf) partitioning [0, inf)
std::vector<Interval> interval_cover(const ExtendedGrid& grid);
// variant without the sentinel: [0,s_1), ..., [s_max, inf)
std::vector<Interval> interval_cover(const GridSet& grid);

} // namespace tsb
