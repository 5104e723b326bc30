#include "tsb/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsb {

GridSet::GridSet(std::vector<double> points, bool symmetric)
    : points_(std::move(points)), symmetric_(symmetric) {
    if (points_.empty()) throw std::invalid_argument("GridSet: empty point set");
    double prev = 0.0;
    for (double p : points_) {
        if (!std::isfinite(p) || p <= prev)
            throw std::invalid_argument("GridSet: points must be finite, positive, strictly increasing");
        prev = p;
    }
    if (symmetric_) {
        const std::size_t m = points_.size();
        if (m % 2 == 0) throw std::invalid_argument("GridSet: symmetric grid needs an odd point count");
        if (std::abs(points_[m / 2] - 1.0) > 1e-12)
            throw std::invalid_argument("GridSet: symmetric grid must contain 1 at its center");
        for (std::size_t i = 0; i < m / 2; ++i) {
            // reciprocal closure; refined grids are rounded to 8 decimals, so
            // allow a matching relative slack
            if (std::abs(points_[i] * points_[m - 1 - i] - 1.0) > 1e-7)
                throw std::invalid_argument("GridSet: symmetric grid must be closed under reciprocals");
        }
    }
}

bool GridSet::contains(double v, double rel_tol) const {
    for (double p : points_)
        if (std::abs(p - v) <= rel_tol * std::max(1.0, std::abs(v))) return true;
    return false;
}

GridSet uniform_grid(std::size_t k) {
    if (k < 1) throw std::invalid_argument("uniform_grid: k must be >= 1");
    std::vector<double> pts;
    pts.reserve(2 * k - 1);
    for (std::size_t i = 1; i < k; ++i) pts.push_back(static_cast<double>(i) / k);
    pts.push_back(1.0);
    for (std::size_t i = k - 1; i >= 1; --i) pts.push_back(static_cast<double>(k) / i);
    return GridSet(std::move(pts), true);
}

ExtendedGrid::ExtendedGrid(GridSet grid, double sentinel) : base(std::move(grid)), a(sentinel) {
    if (!std::isfinite(a) || a <= base.max_point())
        throw std::invalid_argument("ExtendedGrid: a must be finite and > max grid point");
}

namespace {

std::vector<Interval> cover_from_breaks(const std::vector<double>& pts, double extra) {
    std::vector<Interval> out;
    double lo = 0.0;
    for (double p : pts) {
        out.push_back({lo, p});
        lo = p;
    }
    if (extra > 0.0) {
        out.push_back({lo, extra});
        lo = extra;
    }
    out.push_back({lo, std::numeric_limits<double>::infinity()});
    return out;
}

} // namespace

std::vector<Interval> interval_cover(const ExtendedGrid& grid) {
    return cover_from_breaks(grid.base.points(), grid.a);
}

std::vector<Interval> interval_cover(const GridSet& grid) {
    return cover_from_breaks(grid.points(), 0.0);
}

} // namespace tsb
