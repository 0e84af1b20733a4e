#include "support.hpp"

#include "tsvar/errors.hpp"
#include "tsvar/problem.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsvar;
using namespace tsvar::testing;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

VariationalProblem two_objective()
{
    return VariationalProblem(TimeScale::parse("0;1;2"), 1.0, 1, {parse_expr("y1^2", 1), parse_expr("(y1-2)^2", 1)}, {},
                              vec({0}), vec({0}));
}

VariationalProblem energy_on_unit(double resolution, double beta)
{
    return VariationalProblem(TimeScale::parse("[0,1]"), resolution, 1, {parse_expr("v1^2", 1)},
                              {{parse_expr("y1", 1), 1.0 / 6}}, vec({0}), vec({beta}));
}

GridFunction bump(const VariationalProblem& p, double a)
{
    Eigen::MatrixXd v(3, 1);
    v << 0, a, 0;
    return GridFunction(p.grid_ptr(), v);
}

/// Random problem on a random hybrid or discrete scale with generated integrands.
VariationalProblem random_problem(Rng& rng, int dim)
{
    std::string scale;
    double cursor = 0.0;
    const int parts = rng.integer(1, 3);
    for (int j = 0; j < parts; ++j) {
        if (!scale.empty())
            scale += ";";
        if (rng.coin()) {
            const double w = rng.uniform(0.2, 1.0);
            scale += "[" + std::to_string(cursor) + "," + std::to_string(cursor + w) + "]";
            cursor += w;
        } else {
            scale += std::to_string(cursor);
        }
        cursor += rng.uniform(0.2, 1.0);
    }
    scale += ";" + std::to_string(cursor);
    ExprGenerator gen(rng, dim);
    Eigen::VectorXd a(dim);
    Eigen::VectorXd b(dim);
    for (int k = 0; k < dim; ++k) {
        a(k) = rng.uniform(-1, 1);
        b(k) = rng.uniform(-1, 1);
    }
    return VariationalProblem(TimeScale::parse(scale), 0.1, dim, {parse_expr(gen(3), dim), parse_expr(gen(3), dim)},
                              {{parse_expr(gen(3), dim), 0.3}}, a, b);
}

GridFunction random_admissible(Rng& rng, const VariationalProblem& p)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(p.unknown_count()));
    for (Eigen::Index k = 0; k < x.size(); ++k)
        x(k) = rng.uniform(-1, 1);
    return p.assemble(x);
}

} // namespace

TEST_CASE("evaluate on the two-objective example")
{
    const VariationalProblem p = two_objective();
    FunctionalValue v = evaluate(p, bump(p, 1));
    CHECK(v.objectives == std::vector<double>{1, 5});
    v = evaluate(p, bump(p, 0));
    CHECK(v.objectives == std::vector<double>{0, 8});

    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.uniform(-4, 4);
        v = evaluate(p, bump(p, a));
        CHECK(std::abs(v.objectives[0] - a * a) <= 1e-12 * (1 + a * a));
        CHECK(std::abs(v.objectives[1] - (4 + (a - 2) * (a - 2))) <= 1e-12 * (1 + a * a));
    }
}

TEST_CASE("evaluate on a sampled interval")
{
    const VariationalProblem p = energy_on_unit(1e-3, 1);
    const GridFunction y = GridFunction::scalar(p.grid_ptr(), [](double t) { return t; });
    const FunctionalValue v = evaluate(p, y);
    CHECK(std::abs(v.objectives[0] - 1.0) <= 1e-3);
    // int y^sigma = int t dt + O(h)
    CHECK(std::abs(v.constraints[0] - 0.5) <= 1e-3);
    CHECK(v.violations[0] == doctest::Approx(v.constraints[0] - 1.0 / 6));
    CHECK(v.max_violation() == std::abs(v.violations[0]));
}

TEST_CASE("evaluate matches direct summation on discrete scales")
{
    const auto oracle = [](double t, double y, double v) { return t * y * y + std::sin(v) - 3 * y * v; };
    const Expr integrand = parse_expr("t*y1^2 + sin(v1) - 3*y1*v1", 1);
    Rng rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> t = random_points(rng, rng.integer(2, 8), 0.1, 2.0);
        std::vector<Segment> segs;
        for (double x : t)
            segs.push_back({x, x});
        std::vector<double> y;
        for (std::size_t i = 0; i < t.size(); ++i)
            y.push_back(rng.uniform(-2, 2));
        Eigen::VectorXd a(1);
        Eigen::VectorXd b(1);
        a(0) = y.front();
        b(0) = y.back();
        const VariationalProblem p(TimeScale(segs), 0.1, 1, {integrand}, {}, a, b);
        REQUIRE(p.grid().size() == t.size());
        const GridFunction f(p.grid_ptr(), Eigen::Map<const Eigen::MatrixXd>(y.data(), static_cast<Eigen::Index>(y.size()), 1));
        const double expected = direct_sum(t, y, oracle);
        CHECK(std::abs(evaluate(p, f).objectives[0] - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("gateaux examples")
{
    const VariationalProblem p = energy_on_unit(1e-4, 1);
    const GridFunction y = GridFunction::scalar(p.grid_ptr(), [](double t) { return t; });
    const GridFunction eta = GridFunction::scalar(p.grid_ptr(), [](double t) { return t * (1 - t); });
    CHECK(std::abs(gateaux(p, FunctionalId::objective(0), y, eta)) <= 1e-6);
    CHECK(gateaux(p, FunctionalId::objective(0), y, GridFunction::zero(p.grid_ptr(), 1)) == 0.0);
    // first variation of a linear functional is the functional of the direction
    CHECK(gateaux(p, FunctionalId::constraint(0), y, eta) == doctest::Approx(1.0 / 6).epsilon(1e-3));

    const VariationalProblem q = two_objective();
    const GridFunction e1 = bump(q, 1);
    CHECK(gateaux(q, FunctionalId::objective(0), bump(q, 1), e1) == doctest::Approx(2.0));
    CHECK(gateaux(q, FunctionalId::objective(0), bump(q, -0.75), e1) == doctest::Approx(-1.5));
    CHECK_THROWS_AS(gateaux(q, FunctionalId::objective(2), e1, e1), DomainError);
}

TEST_CASE("validation")
{
    const auto make = [](const char* scale, int dim, Eigen::VectorXd a, Eigen::VectorXd b, const char* integrand) {
        return VariationalProblem(TimeScale::parse(scale), 0.1, dim, {parse_expr(integrand, dim)}, {}, a, b);
    };
    CHECK_THROWS_AS(make("0;1", 1, vec({0, 0}), vec({0}), "y1"), DimensionError);
    CHECK_THROWS_AS(make("5", 1, vec({0}), vec({0}), "y1"), DegenerateScaleError);
    CHECK_THROWS_AS(VariationalProblem(TimeScale::parse("0;1"), 0.1, 1, {}, {}, vec({0}), vec({0})), DimensionError);
    CHECK_THROWS_AS(VariationalProblem(TimeScale::parse("0;1"), 0.1, 1, {parse_expr("y2", 2)}, {}, vec({0}), vec({0})),
                    DimensionError);

    const VariationalProblem p = two_objective();
    CHECK(p.unknown_count() == 1);
    CHECK_THROWS_AS(evaluate(p, GridFunction::zero(make_grid({0, 1, 3}), 1)), DimensionError);
    CHECK_THROWS_AS(evaluate(p, GridFunction::zero(p.grid_ptr(), 2)), DimensionError);
    // an equal grid built separately is accepted
    CHECK(evaluate(p, GridFunction::zero(make_grid({0, 1, 2}), 1)).objectives[1] == 8);
}

TEST_CASE("evaluation errors propagate with t")
{
    const VariationalProblem p(TimeScale::parse("0;1;2"), 1, 1, {parse_expr("log(y1)", 1)}, {}, vec({1}), vec({1}));
    try {
        evaluate(p, bump(p, -1));
        FAIL("expected an evaluation error");
    } catch (const EvalError& e) {
        CHECK(e.t() == 0.0);
    }
}

TEST_CASE("boundary handling")
{
    const VariationalProblem p(TimeScale::parse("[0,2]"), 0.5, 2, {parse_expr("v1^2+v2^2", 2)}, {}, vec({1, 2}),
                               vec({3, -2}));
    const GridFunction g = p.linear_guess();
    CHECK(g.size() == 5);
    CHECK(g(0, 0) == 1);
    CHECK(g(4, 1) == -2);
    CHECK(g(2, 0) == doctest::Approx(2));
    CHECK(g(2, 1) == doctest::Approx(0));
    const Eigen::VectorXd x = p.interior(g);
    CHECK(x.size() == 6);
    CHECK((p.assemble(x).values() - g.values()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(p.assemble(Eigen::VectorXd::Zero(5)), DimensionError);
}

TEST_CASE("property: linearity of the Gateaux derivative")
{
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const VariationalProblem p = random_problem(rng, rng.integer(1, 2));
        const GridFunction y = random_admissible(rng, p);
        const GridFunction e1 = random_variation(rng, p.grid_ptr(), p.dim());
        const GridFunction e2 = random_variation(rng, p.grid_ptr(), p.dim());
        const double c1 = rng.uniform(-2, 2);
        const double c2 = rng.uniform(-2, 2);
        for (FunctionalId id : {FunctionalId::objective(0), FunctionalId::objective(1), FunctionalId::constraint(0)}) {
            const double lhs = gateaux(p, id, y, c1 * e1 + c2 * e2);
            const double rhs = c1 * gateaux(p, id, y, e1) + c2 * gateaux(p, id, y, e2);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }
    }
}

TEST_CASE("property: Gateaux derivative, gradient and Hessian match finite differences")
{
    Rng rng(34);
    const double eps = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
        const VariationalProblem p = random_problem(rng, rng.integer(1, 2));
        const GridFunction y = random_admissible(rng, p);
        const GridFunction eta = random_variation(rng, p.grid_ptr(), p.dim());
        const DiscreteFunctional& f = p.objective_functional(0);
        const double value = f.value(p.grid(), y.values());

        const double g = gateaux(p, FunctionalId::objective(0), y, eta);
        const double fd = (f.value(p.grid(), (y + eps * eta).values()) - f.value(p.grid(), (y - eps * eta).values())) / (2 * eps);
        CHECK(std::abs(g - fd) <= 1e-5 * (1 + std::abs(value)));

        // gradient entries
        const Eigen::MatrixXd grad = f.gradient(p.grid(), y.values());
        const DiscreteFunctional::Hessian h = f.hessian(p.grid(), y.values());
        for (int q = 0; q < 5; ++q) {
            const auto i = static_cast<Eigen::Index>(rng.integer(0, static_cast<int>(y.size()) - 1));
            const auto k = static_cast<Eigen::Index>(rng.integer(0, p.dim() - 1));
            Eigen::MatrixXd plus = y.values();
            Eigen::MatrixXd minus = y.values();
            plus(i, k) += eps;
            minus(i, k) -= eps;
            const double gfd = (f.value(p.grid(), plus) - f.value(p.grid(), minus)) / (2 * eps);
            CHECK(std::abs(grad(i, k) - gfd) <= 1e-5 * (1 + std::abs(grad(i, k))));

            const Eigen::MatrixXd hfd = (f.gradient(p.grid(), plus) - f.gradient(p.grid(), minus)) / (2 * eps);
            for (Eigen::Index l = 0; l < p.dim(); ++l) {
                const double diag = h.diag[static_cast<std::size_t>(i)](l, k);
                CHECK(std::abs(diag - hfd(i, l)) <= 1e-4 * (1 + std::abs(diag)));
                if (i + 1 < static_cast<Eigen::Index>(y.size())) {
                    const double off = h.off[static_cast<std::size_t>(i)](k, l);
                    CHECK(std::abs(off - hfd(i + 1, l)) <= 1e-4 * (1 + std::abs(off)));
                }
            }
        }
    }
}
