#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tsb/mechanism.hpp"

using namespace tsb;

namespace {

DiscreteThresholdDistribution point_mass(std::vector<double> z) {
    DiscreteThresholdDistribution d;
    d.n = z.size();
    d.atoms.push_back({std::move(z), 1.0});
    d.symmetric = true;
    return d;
}

DiscreteThresholdDistribution product_two_point() {
    DiscreteThresholdDistribution d;
    d.n = 2;
    for (double z1 : {0.9, 1.1})
        for (double z2 : {0.9, 1.1}) d.atoms.push_back({{z1, z2}, 0.25});
    d.symmetric = true;
    return d;
}

MarginPair heaviside_at_one() {
    MarginPair m;
    m.F = [](double x) { return x >= 1.0 ? 1.0 : 0.0; };
    m.H = [](double x, double y) { return (x >= 1.0 && y >= 1.0) ? 1.0 : 0.0; };
    return m;
}

} // namespace

TEST_CASE("makespan basics") {
    const TimeMatrix t({1, 2}, {3, 4});
    CHECK(makespan({{Machine::one, Machine::one}}, t) == doctest::Approx(3));
    CHECK(makespan({{Machine::one, Machine::two}}, t) == doctest::Approx(4));
    const TimeMatrix ones({1, 1}, {1, 1});
    CHECK(makespan({{Machine::one, Machine::two}}, ones) == doctest::Approx(1));
    CHECK_THROWS_AS(makespan({{Machine::one}}, t), std::invalid_argument);
}

TEST_CASE("optimal makespan brute force") {
    CHECK(optimal_makespan(TimeMatrix({1, 2}, {3, 4})) == doctest::Approx(3));
    CHECK(optimal_makespan(TimeMatrix({1, 1}, {1, 1})) == doctest::Approx(1));
    CHECK(optimal_makespan(worst_case_instance(2, 2, 2)) == doctest::Approx(1));
    const std::vector<double> big(21, 1.0);
    CHECK_THROWS_AS(optimal_makespan(TimeMatrix(big, big)), std::invalid_argument);
}

TEST_CASE("threshold allocation with ties to machine two") {
    const TimeMatrix t({1, 2}, {2, 1}); // ratios 0.5, 2
    const auto a = allocate({1, 1}, t);
    CHECK(a.assignment[0] == Machine::one);
    CHECK(a.assignment[1] == Machine::two);

    const TimeMatrix tie({1}, {1}); // ratio 1 equals the threshold
    CHECK(allocate({1}, tie).assignment[0] == Machine::two);

    const auto both = allocate({3, 3}, t);
    CHECK(both.assignment[0] == Machine::one);
    CHECK(both.assignment[1] == Machine::one);
}

TEST_CASE("expected ratio on finite support") {
    const TimeMatrix ones({1, 1}, {1, 1});
    CHECK(expected_ratio(point_mass({1, 1}), ones) == doctest::Approx(2.0));

    DiscreteThresholdDistribution d;
    d.n = 1;
    d.atoms.push_back({{0.5}, 0.5});
    d.atoms.push_back({{2.0}, 0.5});
    // dominant machine: optimum routes the single task to machine one
    // and every atom with z > 0.01 does the same
    const TimeMatrix dom({1}, {100});
    CHECK(expected_ratio(d, dom) == doctest::Approx(1.0));

    // the perfectly correlated two-atom mixture always misallocates one side
    DiscreteThresholdDistribution joint;
    joint.n = 2;
    joint.atoms.push_back({{0.9, 0.9}, 0.5});
    joint.atoms.push_back({{1.1, 1.1}, 0.5});
    CHECK(expected_ratio(joint, ones) == doctest::Approx(2.0));

    // independent thresholds on {0.9, 1.1}: half the draws split the tasks
    CHECK(expected_ratio(product_two_point(), ones) == doctest::Approx(1.5));
}

TEST_CASE("phi closed form") {
    const MarginPair m = heaviside_at_one();
    CHECK(phi(m, 1, 1) == doctest::Approx(2.0));
    CHECK(phi(m, 2, 2) == doctest::Approx(1.5));
    MarginPair zero;
    zero.F = [](double) { return 0.0; };
    zero.H = [](double, double) { return 0.0; };
    for (double x : {0.3, 1.0, 4.0})
        for (double y : {0.2, 1.0, 7.0}) CHECK(phi(zero, x, y) == doctest::Approx(1.0 + y));
}

TEST_CASE("worst-case instance layout") {
    const TimeMatrix t = worst_case_instance(2, 3, 2);
    CHECK(t.at(0, 0) == doctest::Approx(1));
    CHECK(t.at(0, 1) == doctest::Approx(3));
    CHECK(t.at(1, 0) == doctest::Approx(0.5));
    CHECK(t.at(1, 1) == doctest::Approx(1));

    const TimeMatrix ones = worst_case_instance(1, 1, 2);
    CHECK(ones.at(0, 0) == doctest::Approx(1));
    CHECK(ones.at(1, 0) == doctest::Approx(1));

    const TimeMatrix padded = worst_case_instance(2, 3, 3, 0.01);
    CHECK(padded.tasks() == 3);
    CHECK(padded.at(0, 2) == doctest::Approx(0.01));
    CHECK(padded.at(1, 2) == doctest::Approx(0.01));

    CHECK_THROWS_AS(worst_case_instance(2, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(worst_case_instance(2, 3, 3, 0.0), std::invalid_argument);
}

TEST_CASE("expected ratio equals phi on the adversarial instance") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unif(0.1, 4.0);
    for (int trial = 0; trial < 60; ++trial) {
        DiscreteThresholdDistribution d;
        d.n = 2;
        const int atoms = 1 + trial % 4;
        double wsum = 0;
        for (int a = 0; a < atoms; ++a) {
            const double w = unif(rng);
            d.atoms.push_back({{unif(rng), unif(rng)}, w});
            wsum += w;
        }
        for (auto& atom : d.atoms) atom.weight /= wsum;
        d = d.symmetrized();
        d.validate();

        double x = unif(rng), y = unif(rng);
        if (std::max(y, 1.0 / x) < 1.0) y = 1.0 + unif(rng); // keep the optimum at 1
        const TimeMatrix t = worst_case_instance(x, y, 2);
        const double lhs = expected_ratio(d, t);
        const double rhs = phi(margins(d), x, y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("scale-freeness and permutation equivariance") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.2, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 3;
        std::vector<double> r1(n), r2(n), z(n);
        for (std::size_t j = 0; j < n; ++j) {
            r1[j] = unif(rng);
            r2[j] = unif(rng);
            z[j] = unif(rng);
        }
        const TimeMatrix t(r1, r2);
        const auto base = allocate(z, t);
        CHECK(allocate(z, t.scaled(unif(rng))).assignment == base.assignment);

        std::vector<std::size_t> perm(n);
        for (std::size_t j = 0; j < n; ++j) perm[j] = j;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> zp(n);
        for (std::size_t j = 0; j < n; ++j) zp[j] = z[perm[j]];
        const auto permuted = allocate(zp, t.permuted(perm));
        for (std::size_t j = 0; j < n; ++j)
            CHECK(permuted.assignment[j] == base.assignment[perm[j]]);

        CHECK(makespan(base, t) >= optimal_makespan(t) - 1e-12);
    }
}

TEST_CASE("monotonicity: shrinking a machine-one time never evicts the task") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(0.2, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> r1 = {unif(rng), unif(rng), unif(rng)};
        std::vector<double> r2 = {unif(rng), unif(rng), unif(rng)};
        std::vector<double> z = {unif(rng), unif(rng), unif(rng)};
        const TimeMatrix t(r1, r2);
        const auto before = allocate(z, t);
        const std::size_t j = trial % 3;
        r1[j] *= 0.5;
        const auto after = allocate(z, TimeMatrix(r1, r2));
        if (before.assignment[j] == Machine::one) CHECK(after.assignment[j] == Machine::one);
    }
}

TEST_CASE("phi is minimized over couplings at the lower Frechet bound") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    auto f = [](double v) { return std::clamp(v / (v + 1.0) * 1.4, 0.0, 1.0); };
    for (int trial = 0; trial < 200; ++trial) {
        const double x = unif(rng), y = unif(rng);
        const double fx = f(x), fy = f(y);
        const double lo = std::max(0.0, fx + fy - 1.0);
        const double hi = std::min(fx, fy);
        MarginPair frechet{[&](double v) { return f(v); },
                           [&](double, double) { return lo; }};
        std::uniform_real_distribution<double> mix(0.0, 1.0);
        const double h = lo + mix(rng) * (hi - lo);
        MarginPair other{[&](double v) { return f(v); }, [&](double, double) { return h; }};
        CHECK(phi(frechet, x, y) <= phi(other, x, y) + 1e-12);
    }
}

TEST_CASE("monte carlo estimates") {
    const TimeMatrix ones({1, 1}, {1, 1});
    const auto pm = point_mass({1, 1});
    const auto exact = expected_ratio(pm, ones);
    const auto mc = monte_carlo_ratio(make_sampler(pm), ones, 1000, 99);
    CHECK(mc.mean == doctest::Approx(exact));
    CHECK(mc.stderr_ == doctest::Approx(0.0));

    const auto two = product_two_point();
    const double oracle = expected_ratio(two, ones); // 1.5 by enumeration
    const auto est = monte_carlo_ratio(make_sampler(two), ones, 100000, 1234);
    CHECK(est.stderr_ > 0.0);
    CHECK(std::abs(est.mean - oracle) <= 3 * est.stderr_);

    const auto single = monte_carlo_ratio(make_sampler(two), ones, 1, 5);
    CHECK((single.mean == doctest::Approx(1.0) || single.mean == doctest::Approx(2.0)));

    // bit-for-bit reproducibility
    const auto again = monte_carlo_ratio(make_sampler(two), ones, 100000, 1234);
    CHECK(again.mean == est.mean);
    CHECK(again.stderr_ == est.stderr_);
}

TEST_CASE("csv round trip") {
    const TimeMatrix t({1.25, 2.5, 0.125}, {3.0, 0.1, 7.75});
    const TimeMatrix back = TimeMatrix::from_csv(t.to_csv());
    REQUIRE(back.tasks() == 3);
    for (int i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(back.at(i, j) == t.at(i, j));
}
