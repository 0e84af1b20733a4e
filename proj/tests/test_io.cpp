#include "support.hpp"

#include "tsvar/errors.hpp"
#include "tsvar/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace tsvar;
using namespace tsvar::testing;

namespace {

const char* kTwoObjective = R"(# comment line
[timescale]
scale = 0;1;2

[dimension]
n = 1

[objectives]
y1^2        # first
(y1-2)^2

[boundary]
alpha = 0
beta = 0
)";

ProblemFileError problem_error(const std::string& text)
{
    try {
        parse_problem(text, "p.txt");
    } catch (const ProblemFileError& e) {
        return e;
    }
    FAIL("expected a problem file error");
    return ProblemFileError("", 0, "", 0, "");
}

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("parse a minimal problem")
{
    const ProblemFile f = parse_problem(kTwoObjective);
    CHECK(f.scale.to_string() == "0;1;2");
    CHECK_FALSE(f.resolution);
    CHECK(f.dim == 1);
    REQUIRE(f.objectives.size() == 2);
    CHECK(f.objectives[0].tree_string() == "Pow(y1, 2)");
    CHECK(f.constraints.empty());
    CHECK(f.alpha(0) == 0.0);
    CHECK(f.solver.grad_tol == SolverOptions{}.grad_tol);
    CHECK(f.nc_tol == kDefaultNcTolerance);

    const VariationalProblem p = f.build();
    CHECK(p.grid().size() == 3);
    CHECK(p.objective_count() == 2);
}

TEST_CASE("parse all sections and solver keys")
{
    const std::string text = R"([timescale]
scale = [0,1];2
resolution = 0.25
[dimension]
n = 2
[objectives]
v1^2 + v2^2
[constraints]
y1*y2 = 0.1
y1 = -2.5e-1
[boundary]
alpha = 0, 0
beta = 1,-1
[solver]
grad_tol = 1e-9
constraint_tol = 1e-7
det_tol = 1e-11
nc_tol = 1e-5
el_tol = 0.5
max_inner = 50
max_outer = 7
multistart = 3
seed = 42
method = gradient
)";
    const ProblemFile f = parse_problem(text);
    CHECK(*f.resolution == 0.25);
    CHECK(f.dim == 2);
    REQUIRE(f.constraints.size() == 2);
    CHECK(f.constraints[1].target == -0.25);
    CHECK(f.beta(1) == -1.0);
    CHECK(f.solver.grad_tol == 1e-9);
    CHECK(f.solver.constraint_tol == 1e-7);
    CHECK(f.solver.det_tol == 1e-11);
    CHECK(f.nc_tol == 1e-5);
    CHECK(*f.el_tol == 0.5);
    CHECK(f.solver.max_inner == 50);
    CHECK(f.solver.max_outer == 7);
    CHECK(f.solver.multistart == 3);
    CHECK(f.solver.seed == 42);
    CHECK(f.solver.method == InnerMethod::GradientDescent);

    CHECK(f.build().grid().size() == 6);
    CHECK(f.build(0.5).grid().size() == 4);
}

TEST_CASE("problem file errors report line, section and offset")
{
    SUBCASE("malformed objective")
    {
        const auto e = problem_error(replace(kTwoObjective, "(y1-2)^2", "(y1-2)^^2"));
        CHECK(e.line() == 10);
        CHECK(e.section() == "objectives");
        CHECK(e.offset() == 7);
        CHECK(std::string(e.what()).rfind("p.txt:10: [objectives] offset 7: ", 0) == 0);
    }
    SUBCASE("index above dimension, indented")
    {
        const auto e = problem_error(replace(kTwoObjective, "(y1-2)^2", "  y2*sin(t)"));
        CHECK(e.line() == 10);
        CHECK(e.offset() == 2);
        CHECK(std::string(e.what()).find("exceeds dimension") != std::string::npos);
    }
    SUBCASE("bad time scale literal")
    {
        const auto e = problem_error(replace(kTwoObjective, "0;1;2", "0;1;x"));
        CHECK(e.line() == 3);
        CHECK(e.section() == "timescale");
        CHECK(e.offset() == 12);
    }
    SUBCASE("overlapping time scale")
    {
        const auto e = problem_error(replace(kTwoObjective, "0;1;2", "[0,2];[1,3]"));
        CHECK(e.section() == "timescale");
    }
    SUBCASE("boundary length")
    {
        const auto e = problem_error(replace(kTwoObjective, "alpha = 0", "alpha = 0, 1"));
        CHECK(e.section() == "boundary");
        CHECK(e.line() == 13);
        CHECK(e.offset() == 8);
    }
    SUBCASE("bad boundary number")
    {
        const auto e = problem_error(replace(kTwoObjective, "beta = 0", "beta = zero"));
        CHECK(e.line() == 14);
        CHECK(e.offset() == 7);
    }
    SUBCASE("missing section")
    {
        const auto e = problem_error(replace(kTwoObjective, "[boundary]", "[solver]"));
        CHECK(std::string(e.what()).find("missing section [boundary]") != std::string::npos);
    }
    SUBCASE("unknown section and key")
    {
        CHECK(problem_error(replace(kTwoObjective, "[boundary]", "[bounds]")).section() == "bounds");
        const auto e = problem_error(replace(kTwoObjective, "beta = 0", "beta = 0\ngamma = 1"));
        CHECK(e.line() == 15);
        CHECK(std::string(e.what()).find("unknown key 'gamma'") != std::string::npos);
    }
    SUBCASE("duplicates")
    {
        CHECK(problem_error(replace(kTwoObjective, "beta = 0", "beta = 0\nbeta = 1")).line() == 15);
        CHECK(problem_error(std::string(kTwoObjective) + "[dimension]\nn = 1\n").line() == 15);
    }
    SUBCASE("content before the first header")
    {
        const auto e = problem_error(std::string("n = 1\n") + kTwoObjective);
        CHECK(e.line() == 1);
        CHECK(e.section().empty());
    }
    SUBCASE("constraint without target")
    {
        const std::string text = replace(kTwoObjective, "[boundary]", "[constraints]\ny1 + 1\n[boundary]");
        const auto e = problem_error(text);
        CHECK(e.section() == "constraints");
        CHECK(e.line() == 13);
    }
    SUBCASE("constraint target and expression offsets")
    {
        const std::string bad_target = replace(kTwoObjective, "[boundary]", "[constraints]\ny1 = abc\n[boundary]");
        CHECK(problem_error(bad_target).offset() == 5);
        const std::string bad_expr = replace(kTwoObjective, "[boundary]", "[constraints]\n y1 + + = 1\n[boundary]");
        CHECK(problem_error(bad_expr).offset() == 6);
    }
    SUBCASE("solver values")
    {
        const auto with = [](const std::string& kv) { return std::string(kTwoObjective) + "[solver]\n" + kv + "\n"; };
        CHECK(problem_error(with("grad_tol = -1")).section() == "solver");
        CHECK(problem_error(with("max_inner = 2.5")).offset() == 12);
        CHECK(problem_error(with("method = bfgs")).line() == 16);
        CHECK(problem_error(with("seed = x")).line() == 16);
    }
    SUBCASE("dimension")
    {
        CHECK(problem_error(replace(kTwoObjective, "n = 1", "n = 0")).section() == "dimension");
        CHECK(problem_error(replace(kTwoObjective, "n = 1", "n = 1.5")).offset() == 4);
    }
    SUBCASE("no objectives")
    {
        const std::string text = replace(replace(kTwoObjective, "y1^2        # first\n", ""), "(y1-2)^2\n", "");
        CHECK(problem_error(text).section() == "objectives");
    }
}

TEST_CASE("bundled problem files parse")
{
    for (const char* name : {"two_objective_discrete.txt", "shortest_path.txt", "isoperimetric.txt", "hybrid_planar.txt"}) {
        INFO(name);
        const ProblemFile f = read_problem_file(std::filesystem::path(TSVAR_PROBLEMS_DIR) / name);
        CHECK_NOTHROW(f.build());
    }
    CHECK_THROWS_AS(read_problem_file("/nonexistent/problem.txt"), Error);
}

TEST_CASE("solution tables")
{
    const SolutionTable t = parse_solution("t,y1,y2\n0,1,2\n0.5, 3 ,4\n\n");
    CHECK(t.t == std::vector<double>{0, 0.5});
    CHECK(t.values(1, 0) == 3);
    CHECK(t.values(1, 1) == 4);

    CHECK_THROWS_AS(parse_solution(""), TableError);
    CHECK_THROWS_AS(parse_solution("x,y1\n0,1\n"), TableError);
    CHECK_THROWS_AS(parse_solution("t,y2\n0,1\n"), TableError);
    CHECK_THROWS_AS(parse_solution("t,y1\n0,1,2\n"), TableError);
    CHECK_THROWS_AS(parse_solution("t,y1\n0,abc\n"), TableError);
}

TEST_CASE("property: solution round trip is exact")
{
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const GridPtr g = make_grid(random_points(rng, rng.integer(2, 30)));
        const GridFunction f = random_function(rng, g, rng.integer(1, 3), 1e3);
        std::ostringstream os;
        write_solution(os, f);
        const SolutionTable back = parse_solution(os.str());
        CHECK(back.values == f.values());
        for (std::size_t i = 0; i < g->size(); ++i)
            CHECK(back.t[i] == g->point(i));
    }
}

TEST_CASE("solutions are placed on the problem grid")
{
    const VariationalProblem p = parse_problem(kTwoObjective).build();
    const GridFunction y = solution_on_grid(p, parse_solution("t,y1\n0,0\n1,1.5\n2,0\n"));
    CHECK(y(1) == 1.5);
    CHECK_THROWS_AS(solution_on_grid(p, parse_solution("t,y1\n0,0\n1,1.5\n")), DimensionError);
    CHECK_THROWS_AS(solution_on_grid(p, parse_solution("t,y1\n0,0\n1.1,1.5\n2,0\n")), DimensionError);
    CHECK_THROWS_AS(solution_on_grid(p, parse_solution("t,y1,y2\n0,0,0\n1,1,1\n2,0,0\n")), DimensionError);
    // within the time-scale tolerance
    CHECK_NOTHROW(solution_on_grid(p, parse_solution("t,y1\n0,0\n1.0000000000001,1.5\n2,0\n")));
}

TEST_CASE("writers and JSON reports")
{
    const VariationalProblem p = parse_problem(kTwoObjective).build();
    const ScalarObjective obj = ScalarObjective::weighted({0.5, 0.5});
    const SolveResult r = solve_scalar(p, obj);
    const ELReport el = el_residual(p, obj, r);

    std::ostringstream sol;
    write_solution(sol, r.y);
    CHECK(sol.str().rfind("t,y1\n0,0\n1,", 0) == 0);

    std::ostringstream res;
    write_el_residual(res, el);
    CHECK(res.str().rfind("index,t,r1\n0,0,", 0) == 0);

    const auto j = nlohmann::json::parse(solve_report_json(obj, r, el));
    CHECK(j["status"] == "Converged");
    CHECK(j["objective"].get<double>() == doctest::Approx(3.0));
    CHECK(j["weights"].size() == 2);
    CHECK(j["multipliers"].empty());

    const ParetoFront front = weighted_sweep(p, 4);
    std::vector<std::string> names;
    for (std::size_t e = 0; e < front.entries.size(); ++e)
        names.push_back("entry_" + std::to_string(e) + ".csv");
    std::ostringstream table;
    write_front(table, front, names);
    std::istringstream lines(table.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "gamma1,gamma2,L1,L2,solution");
    const std::string rendered = table.str();
    CHECK(std::count(rendered.begin(), rendered.end(), '\n') == 4);
    CHECK_THROWS_AS(write_front(table, front, {}), DimensionError);

    const auto fj = nlohmann::json::parse(front_report_json(front, 4, names));
    CHECK(fj["k"] == 4);
    CHECK(fj["attempted"] == 3);
    CHECK(fj["entries"].size() == 3);
    CHECK(fj["entries"][0]["solution"] == "entry_0.csv");
}

TEST_CASE("text files")
{
    const auto dir = std::filesystem::temp_directory_path() / "tsvar_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    write_text_file(dir / "a.txt", "hello\n");
    CHECK(read_text_file(dir / "a.txt") == "hello\n");
    std::filesystem::remove_all(dir.parent_path());
    CHECK_THROWS_AS(read_text_file(dir / "a.txt"), Error);
}
