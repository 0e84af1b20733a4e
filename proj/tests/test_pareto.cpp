#include "support.hpp"

#include "tsvar/errors.hpp"
#include "tsvar/pareto.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsvar;
using namespace tsvar::testing;

namespace {

Eigen::VectorXd zero1() { return Eigen::VectorXd::Zero(1); }

VariationalProblem two_objective()
{
    return VariationalProblem(TimeScale::parse("0;1;2"), 1.0, 1, {parse_expr("y1^2", 1), parse_expr("(y1-2)^2", 1)}, {},
                              zero1(), zero1());
}

GridFunction bump(const VariationalProblem& p, double a)
{
    Eigen::MatrixXd v(3, 1);
    v << 0, a, 0;
    return GridFunction(p.grid_ptr(), v);
}

/// Brute-force dominance check written independently of dominance_filter.
bool dominated_by_any(const std::vector<std::vector<double>>& pts, std::size_t i)
{
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i)
            continue;
        bool all_le = true;
        bool some_lt = false;
        for (std::size_t k = 0; k < pts[i].size(); ++k) {
            all_le = all_le && pts[j][k] <= pts[i][k] + 1e-9;
            some_lt = some_lt || pts[j][k] < pts[i][k] - 1e-9;
        }
        if (all_le && some_lt)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("dominance filter examples")
{
    CHECK(dominance_filter({{1, 5}, {2, 2}, {3, 1}}) == std::vector<std::size_t>{0, 1, 2});
    CHECK(dominance_filter({{1, 5}, {1, 4}}) == std::vector<std::size_t>{1});
    CHECK(dominance_filter({{0, 0}}) == std::vector<std::size_t>{0});
    CHECK(dominance_filter({}).empty());
    // ties within tolerance collapse onto the first
    CHECK(dominance_filter({{1, 2}, {1 + 1e-12, 2}, {0.5, 3}}) == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS(dominance_filter({{1, 2}, {1}}), DimensionError);
}

TEST_CASE("property: dominance filter against brute force, and idempotence")
{
    Rng rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = rng.integer(2, 4);
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(rng.integer(1, 25)));
        for (auto& p : pts)
            for (int k = 0; k < d; ++k)
                p.push_back(rng.integer(0, 6)); // coarse values force ties and dominance
        const auto keep = dominance_filter(pts);
        std::vector<std::vector<double>> survivors;
        for (std::size_t i : keep) {
            CHECK_FALSE(dominated_by_any(pts, i));
            survivors.push_back(pts[i]);
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (std::find(keep.begin(), keep.end(), i) != keep.end())
                continue;
            bool duplicate_of_earlier = false;
            for (std::size_t j = 0; j < i; ++j)
                duplicate_of_earlier = duplicate_of_earlier || pts[j] == pts[i];
            CHECK((dominated_by_any(pts, i) || duplicate_of_earlier));
        }
        CHECK(dominance_filter(survivors).size() == survivors.size());
    }
}

TEST_CASE("simplex weights")
{
    const auto w2 = simplex_weights(2, 20);
    CHECK(w2.size() == 19);
    CHECK(w2.front() == std::vector<double>{0.05, 0.95});
    for (std::size_t i = 1; i < w2.size(); ++i)
        CHECK(w2[i][0] > w2[i - 1][0]);
    const auto w3 = simplex_weights(3, 5);
    CHECK(w3.size() == 6);
    for (const auto& w : w3) {
        CHECK(std::abs(w[0] + w[1] + w[2] - 1.0) <= 1e-12);
        for (double x : w)
            CHECK(x >= 0.2 - 1e-12);
    }
    CHECK_THROWS_AS(simplex_weights(3, 2), DomainError);
}

TEST_CASE("sweep on the two-objective example")
{
    const VariationalProblem p = two_objective();
    const ParetoFront front = weighted_sweep(p, 20);
    REQUIRE(front.entries.size() == 19);
    CHECK(front.failures.empty());
    CHECK(front.dominated_removed == 0);
    for (const ParetoEntry& e : front.entries) {
        const double a = e.result.y(1);
        CHECK(e.result.converged());
        CHECK(std::abs(a - 2 * (1 - e.weights[0])) <= 1e-6);
        CHECK(std::abs(e.objectives[0] - a * a) <= 1e-9);
        CHECK(std::abs(e.objectives[1] - (4 + (a - 2) * (a - 2))) <= 1e-9);
    }
    for (std::size_t i = 1; i < front.entries.size(); ++i)
        CHECK(front.entries[i - 1].objectives < front.entries[i].objectives);

    SUBCASE("the balanced entry is (1, 5)")
    {
        bool found = false;
        for (const ParetoEntry& e : front.entries) {
            if (std::abs(e.weights[0] - 0.5) < 1e-12) {
                found = true;
                CHECK(e.objectives[0] == doctest::Approx(1.0));
                CHECK(e.objectives[1] == doctest::Approx(5.0));
            }
        }
        CHECK(found);
    }
    SUBCASE("scalarization consistency")
    {
        for (const ParetoEntry& e : front.entries)
            for (const ParetoEntry& o : front.entries) {
                const double own = e.weights[0] * e.objectives[0] + e.weights[1] * e.objectives[1];
                const double other = e.weights[0] * o.objectives[0] + e.weights[1] * o.objectives[1];
                CHECK(own <= other + 1e-6);
            }
    }
    SUBCASE("monotone trade-off in gamma_1")
    {
        std::vector<const ParetoEntry*> by_gamma;
        for (const ParetoEntry& e : front.entries)
            by_gamma.push_back(&e);
        std::sort(by_gamma.begin(), by_gamma.end(),
                  [](const ParetoEntry* a, const ParetoEntry* b) { return a->weights[0] < b->weights[0]; });
        for (std::size_t i = 1; i < by_gamma.size(); ++i) {
            CHECK(by_gamma[i]->objectives[0] <= by_gamma[i - 1]->objectives[0] + 1e-9);
            CHECK(by_gamma[i]->objectives[1] >= by_gamma[i - 1]->objectives[1] - 1e-9);
        }
    }
    SUBCASE("every entry passes the cross-check")
    {
        for (const ParetoEntry& e : front.entries)
            for (std::size_t i = 0; i < 2; ++i) {
                const NcReport r = nc_crosscheck(p, e, i);
                CHECK(r.improvement <= 1e-6);
                CHECK(r.status == NcStatus::Confirmed);
            }
    }
}

TEST_CASE("parallel sweep without warm start matches the sequential one")
{
    const VariationalProblem p = two_objective();
    SweepOptions o;
    o.warm_start = false;
    o.threads = 3;
    const ParetoFront a = weighted_sweep(p, 10, o);
    const ParetoFront b = weighted_sweep(p, 10);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].weights == b.entries[i].weights);
        CHECK(std::abs(a.entries[i].objectives[0] - b.entries[i].objectives[0]) <= 1e-9);
    }
}

TEST_CASE("identical objectives collapse the front")
{
    const VariationalProblem p(TimeScale::parse("0;1;2"), 1, 1, {parse_expr("(y1-1)^2", 1), parse_expr("(y1-1)^2", 1)},
                               {}, zero1(), zero1());
    const ParetoFront front = weighted_sweep(p, 8);
    CHECK(front.entries.size() == 1);
    CHECK(front.dominated_removed == 6);
    const NcReport r = nc_crosscheck(p, front.entries.front(), 0);
    CHECK(r.improvement <= kDefaultNcTolerance);
}

TEST_CASE("cross-check refutes a non-Pareto point")
{
    const VariationalProblem p = two_objective();
    const NcReport good = nc_crosscheck(p, bump(p, 1), 0);
    CHECK(good.status == NcStatus::Confirmed);
    CHECK(good.improvement <= 1e-6);

    const NcReport bad = nc_crosscheck(p, bump(p, 3), 0);
    CHECK(bad.original == doctest::Approx(9));
    CHECK(bad.status == NcStatus::Refuted);
    CHECK(bad.improvement == doctest::Approx(8).epsilon(1e-6));
    REQUIRE(bad.result);
    CHECK(std::abs(bad.result->y(1) - 1) <= 1e-6);

    CHECK_THROWS_AS(nc_crosscheck(p, bump(p, 1), 2), DomainError);
}

TEST_CASE("inconclusive cross-check")
{
    SolverOptions o;
    o.max_inner = 1;
    o.max_outer = 1;
    const VariationalProblem p = two_objective();
    const NcReport r = nc_crosscheck(p, bump(p, 3), 0, o);
    CHECK(r.status == NcStatus::Inconclusive);
}

TEST_CASE("sweep preconditions")
{
    const VariationalProblem single(TimeScale::parse("0;1;2"), 1, 1, {parse_expr("y1^2", 1)}, {}, zero1(), zero1());
    CHECK_THROWS_AS(weighted_sweep(single, 10), DomainError);
    CHECK_THROWS_AS(weighted_sweep(two_objective(), 1), DomainError);
}

TEST_CASE("three objectives in two dimensions")
{
    Eigen::VectorXd a(2);
    Eigen::VectorXd b(2);
    a << 0, 0;
    b << 1, 1;
    const VariationalProblem p(TimeScale::parse("[0,1];2"), 0.25, 2,
                               {parse_expr("v1^2 + v2^2", 2), parse_expr("(y1 - 2)^2", 2), parse_expr("(y2 + 1)^2", 2)},
                               {}, a, b);
    const ParetoFront front = weighted_sweep(p, 6);
    CHECK(front.attempted == 10);
    CHECK(front.failures.empty());
    std::vector<std::vector<double>> pts;
    for (const auto& e : front.entries)
        pts.push_back(e.objectives);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK_FALSE(dominated_by_any(pts, i));
}
