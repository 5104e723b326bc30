#include "tsb/finite_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tsb {

namespace {
constexpr int kCodeBits = 10; // grid size up to 1022 points
constexpr std::size_t kMaxDim = 6;
} // namespace

FiniteCDF::FiniteCDF(std::size_t n, GridSet grid) : n_(n), grid_(std::move(grid)) {
    if (n_ < 1 || n_ > kMaxDim) throw std::invalid_argument("FiniteCDF: dimension out of range");
    if (grid_.size() + 2 > (1u << kCodeBits))
        throw std::invalid_argument("FiniteCDF: grid too large");
    // enumerate non-decreasing tuples over {1, ..., m+1} in lex order
    const int top = infinity_code();
    std::vector<int> cur(n_, 1);
    while (true) {
        keys_.push_back(cur);
        index_.emplace(pack(cur), static_cast<std::uint32_t>(keys_.size() - 1));
        std::size_t i = n_;
        while (i > 0 && cur[i - 1] == top) --i;
        if (i == 0) break;
        const int v = cur[i - 1] + 1;
        for (std::size_t j = i - 1; j < n_; ++j) cur[j] = v;
    }
    values_.assign(keys_.size(), 0.0);
    values_.back() = 1.0; // all-infinity orbit, the last in lex order
}

std::uint64_t FiniteCDF::pack(const std::vector<int>& sorted_codes) const {
    std::uint64_t key = 0;
    for (int c : sorted_codes) key = (key << kCodeBits) | static_cast<std::uint64_t>(c);
    return key;
}

std::size_t FiniteCDF::orbit_index(std::vector<int> codes) const {
    if (codes.size() != n_) throw std::invalid_argument("FiniteCDF: code tuple of wrong arity");
    std::sort(codes.begin(), codes.end());
    if (codes.front() < 1 || codes.back() > infinity_code())
        throw std::invalid_argument("FiniteCDF: code out of range");
    return index_.at(pack(codes));
}

double FiniteCDF::value_by_codes(std::vector<int> codes) const {
    for (int c : codes)
        if (c == 0) return 0.0;
    return values_[orbit_index(std::move(codes))];
}

double FiniteCDF::univariate(int code) const {
    if (code == 0) return 0.0;
    std::vector<int> codes(n_, infinity_code());
    codes[0] = code;
    return values_[orbit_index(std::move(codes))];
}

double FiniteCDF::bivariate(int cx, int cy) const {
    if (n_ < 2) throw std::invalid_argument("FiniteCDF: bivariate margin needs n >= 2");
    if (cx == 0 || cy == 0) return 0.0;
    std::vector<int> codes(n_, infinity_code());
    codes[0] = cx;
    codes[1] = cy;
    return values_[orbit_index(std::move(codes))];
}

bool FiniteCDF::boundary_ok(double tol) const {
    if (std::abs(values_.back() - 1.0) > tol) return false;
    for (double v : values_)
        if (v < -tol || v > 1.0 + tol) return false;
    return true;
}

NIncreasingReport check_n_increasing(const FiniteCDF& g, double tol) {
    const std::size_t n = g.dimension();
    const int last_lower = static_cast<int>(g.grid().size()); // box [s_m, inf]
    NIncreasingReport report;
    std::vector<int> lower(n, 0);
    std::vector<int> vertex(n);
    while (true) {
        double sum = 0.0;
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
            const double v = g.value_by_codes(vertex);
            sum += (low_count % 2 == 0) ? v : -v;
        }
        if (sum < -tol) {
            report.ok = false;
            report.violated_box_lower = lower;
            report.violated_sum = sum;
            return report;
        }
        // advance sorted lower corner in lex order
        std::size_t i = n;
        while (i > 0 && lower[i - 1] == last_lower) --i;
        if (i == 0) break;
        const int v = lower[i - 1] + 1;
        for (std::size_t j = i - 1; j < n; ++j) lower[j] = v;
    }
    return report;
}

PiecewiseConstantCDF::PiecewiseConstantCDF(FiniteCDF g, double a)
    : g_(std::move(g)), ext_(g_.grid(), a) {}

PiecewiseConstantCDF extend(FiniteCDF g, double a) {
    return PiecewiseConstantCDF(std::move(g), a);
}

int PiecewiseConstantCDF::floor_code(double v) const {
    if (v < 0.0 || std::isnan(v)) throw std::invalid_argument("PiecewiseConstantCDF: negative coordinate");
    if (v >= ext_.a) return g_.infinity_code(); // the sentinel a maps to infinity in lookups
    const auto& pts = g_.grid().points();
    const auto it = std::upper_bound(pts.begin(), pts.end(), v);
    return static_cast<int>(it - pts.begin()); // 0 when below the least grid point
}

double PiecewiseConstantCDF::eval(const std::vector<double>& z) const {
    if (z.size() != g_.dimension())
        throw std::invalid_argument("PiecewiseConstantCDF: point of wrong arity");
    std::vector<int> codes(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) codes[i] = floor_code(z[i]);
    return g_.value_by_codes(std::move(codes));
}

double PiecewiseConstantCDF::F(double x) const { return g_.univariate(floor_code(x)); }

double PiecewiseConstantCDF::H(double x, double y) const {
    return g_.bivariate(floor_code(x), floor_code(y));
}

MarginPair PiecewiseConstantCDF::margins() const {
    auto self = std::make_shared<PiecewiseConstantCDF>(*this);
    MarginPair m;
    m.F = [self](double x) { return self->F(x); };
    m.H = [self](double x, double y) { return self->H(x, y); };
    return m;
}

DiscreteThresholdDistribution PiecewiseConstantCDF::to_distribution() const {
    const std::size_t n = g_.dimension();
    const std::size_t m = g_.grid().size();
    const std::size_t per_axis = m + 1; // grid points plus the atom at a
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > 4'000'000 / per_axis)
            throw std::invalid_argument("to_distribution: grid too large to enumerate atoms");
        total *= per_axis;
    }
    DiscreteThresholdDistribution dist;
    dist.n = n;
    dist.symmetric = true;
    std::vector<int> upper(n, 1);
    std::vector<int> vertex(n);
    double mass = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        // box measure at the atom whose upper corner has codes `upper`
        double w = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            int low_count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) {
                    vertex[i] = upper[i] - 1;
                    ++low_count;
                } else {
                    vertex[i] = upper[i];
                }
            }
            const double v = g_.value_by_codes(vertex);
            w += (low_count % 2 == 0) ? v : -v;
        }
        if (w < -1e-9) throw std::runtime_error("to_distribution: negative box measure");
        if (w > 0.0) {
            std::vector<double> z(n);
            for (std::size_t i = 0; i < n; ++i)
                z[i] = upper[i] == g_.infinity_code() ? ext_.a : g_.grid()[upper[i] - 1];
            dist.atoms.push_back({std::move(z), w});
            mass += w;
        }
        // odometer over {1..m+1}^n
        std::size_t i = n;
        while (i > 0) {
            if (upper[i - 1] < g_.infinity_code()) {
                ++upper[i - 1];
                break;
            }
            upper[i - 1] = 1;
            --i;
        }
        if (i == 0) break;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::runtime_error("to_distribution: atom masses do not sum to 1");
    for (auto& atom : dist.atoms) atom.weight /= mass;
    return dist;
}

std::string finite_cdf_to_json(const FiniteCDF& g, std::optional<double> a) {
    nlohmann::ordered_json j;
    j["n"] = g.dimension();
    j["grid"] = g.grid().points();
    j["symmetric"] = g.grid().symmetric();
    if (a) j["a"] = *a;
    nlohmann::ordered_json orbits = nlohmann::ordered_json::array();
    for (std::size_t idx = 0; idx < g.orbit_count(); ++idx) {
        nlohmann::ordered_json key = nlohmann::ordered_json::array();
        for (int c : g.orbit_key(idx)) {
            if (c == g.infinity_code())
                key.push_back("inf");
            else
                key.push_back(g.grid()[c - 1]);
        }
        orbits.push_back({{"key", key}, {"value", g.orbit_value(idx)}});
    }
    j["orbits"] = std::move(orbits);
    return j.dump();
}

std::pair<FiniteCDF, std::optional<double>> finite_cdf_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::size_t n = j.at("n").get<std::size_t>();
    GridSet grid(j.at("grid").get<std::vector<double>>(),
                 j.value("symmetric", false));
    FiniteCDF g(n, grid);
    for (const auto& orbit : j.at("orbits")) {
        std::vector<int> codes;
        for (const auto& cell : orbit.at("key")) {
            if (cell.is_string()) {
                if (cell.get<std::string>() != "inf")
                    throw std::invalid_argument("finite_cdf_from_json: unknown sentinel");
                codes.push_back(g.infinity_code());
            } else {
                const double v = cell.get<double>();
                const auto& pts = grid.points();
                const auto it = std::lower_bound(pts.begin(), pts.end(), v);
                if (it == pts.end() || *it != v)
                    throw std::invalid_argument("finite_cdf_from_json: key value not on the grid");
                codes.push_back(static_cast<int>(it - pts.begin()) + 1);
            }
        }
        g.set_orbit_value(g.orbit_index(std::move(codes)), orbit.at("value").get<double>());
    }
    std::optional<double> a;
    if (j.contains("a")) a = j.at("a").get<double>();
    return {std::move(g), a};
}

} // namespace tsb
