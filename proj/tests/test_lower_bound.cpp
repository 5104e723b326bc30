#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tsb/lower_bound.hpp"

using namespace tsb;

namespace {

const InteriorPointSolver solver;

// free orbit variables: multisets of size n over the nonzero symbols
// (grid points and infinity), minus the fixed all-infinity orbit
std::size_t expected_free_orbits(std::size_t n, std::size_t grid_points) {
    const std::size_t symbols = grid_points + 1;
    std::size_t multisets = 1;
    for (std::size_t i = 0; i < n; ++i) multisets = multisets * (symbols + i) / (i + 1);
    return multisets - 1;
}

} // namespace

TEST_CASE("build_lp sizes on tiny grids") {
    const GridSet single({1.0}, true);
    const LowerBoundLp built(2, single);
    // free orbits: {1,1} and {1,inf}; plus t
    CHECK(built.lp.num_vars() == 3);
    CHECK(expected_free_orbits(2, 1) == 2);
    CHECK(built.phi_pairs.size() == 1);

    const GridSet five(uniform_grid(3));
    const LowerBoundLp wide(2, five);
    CHECK(static_cast<std::size_t>(wide.lp.num_vars()) == expected_free_orbits(2, 5) + 1);
    CHECK(wide.phi_pairs.size() == 25);
}

TEST_CASE("hand-solved LP on the singleton grid") {
    // minimize t s.t. 2 - 2F + 2H <= t, H >= 2F - 1, H >= 0, H <= F:
    // optimum t = 1 at F = 1/2, H = 0
    const auto res = lower_bound(2, GridSet({1.0}, true), solver);
    CHECK(res.status == SolveStatus::optimal);
    CHECK(res.bound == doctest::Approx(1.0).epsilon(1e-8));
    const double f = res.g.univariate(1);
    const double h = res.g.bivariate(1, 1);
    CHECK(f == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(h == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(res.binding_pairs.size() == 1);
}

TEST_CASE("degenerate single-task bound") {
    const auto res = lower_bound(1, GridSet({1.0}), solver);
    CHECK(res.bound == doctest::Approx(1.0).epsilon(1e-8));
    const auto wide = lower_bound(1, uniform_grid(4), solver);
    CHECK(wide.bound == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("grid monotonicity") {
    const auto sub = lower_bound(2, uniform_grid(2), solver);
    const auto sup = lower_bound(2, uniform_grid(4), solver); // supergrid of k=2
    CHECK(sub.bound <= sup.bound + 1e-8);

    const auto big = lower_bound(2, uniform_grid(6), solver);
    CHECK(sub.bound <= big.bound + 1e-8);
}

TEST_CASE("task monotonicity at fixed grid") {
    const GridSet grid = uniform_grid(4);
    const auto two = lower_bound(2, grid, solver);
    const auto three = lower_bound(3, grid, solver);
    const auto four = lower_bound(4, grid, solver);
    CHECK(three.bound >= two.bound - 1e-8);
    CHECK(four.bound >= three.bound - 1e-8);
}

TEST_CASE("optimal g is a valid CDF and passes the audit") {
    for (std::size_t k : {2, 5, 8}) {
        const auto res = lower_bound(2, uniform_grid(k), solver);
        CHECK(res.status == SolveStatus::optimal);
        const auto report = check_n_increasing(res.g, 1e-8);
        CHECK(report.ok);
        CHECK(res.g.boundary_ok(1e-9));
        // every lower bound is a bound on the same quantity, which is < 1.5060
        CHECK(res.bound <= 1.5059964 + 1e-6);
        CHECK(res.bound >= 1.0);
    }
    const auto res3 = lower_bound(3, uniform_grid(4), solver);
    CHECK(check_n_increasing(res3.g, 1e-8).ok);
}

TEST_CASE("independent audit recomputes phi below the bound") {
    const auto res = lower_bound(2, uniform_grid(5), solver);
    const int m = static_cast<int>(res.grid.size());
    double worst = 0.0;
    for (int cx = 1; cx <= m; ++cx)
        for (int cy = 1; cy <= m; ++cy) worst = std::max(worst, phi_on_grid(res.g, cx, cy));
    CHECK(worst <= res.bound + 1e-8);
    CHECK(worst == doctest::Approx(res.bound).epsilon(1e-6)); // the max is tight
}

TEST_CASE("lp export runs on a built instance") {
    const LowerBoundLp built(2, GridSet({1.0}, true));
    const std::string text = built.lp.to_lp_format();
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find(" t") != std::string::npos);
}

TEST_CASE("result serializes") {
    const auto res = lower_bound(2, uniform_grid(2), solver);
    const std::string j = lower_bound_to_json(res);
    CHECK(j.find("\"bound\"") != std::string::npos);
    CHECK(j.find("\"tight_pairs\"") != std::string::npos);
}
