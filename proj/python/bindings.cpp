#include "tsvar/delta_calculus.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/io.hpp"
#include "tsvar/pareto.hpp"
#include "tsvar/problem.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/timescale.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace tsvar;

namespace {

GridPtr grid_from_points(std::vector<double> points)
{
    return std::make_shared<const GridTimeScale>(std::move(points));
}

Eigen::MatrixXd as_columns(const Eigen::MatrixXd& values, std::size_t rows)
{
    // accept a flat vector for scalar functions
    if (values.cols() != 1 && values.rows() == 1 && static_cast<std::size_t>(values.cols()) == rows)
        return values.transpose();
    return values;
}

GridFunction on_problem_grid(const VariationalProblem& p, const Eigen::MatrixXd& values)
{
    return GridFunction(p.grid_ptr(), as_columns(values, p.grid().size()));
}

ScalarObjective make_objective(const VariationalProblem& p, const std::optional<std::vector<double>>& weights,
                               const std::optional<std::size_t>& objective)
{
    if (weights && objective)
        throw DomainError("pass either weights or objective, not both");
    if (weights)
        return ScalarObjective::weighted(*weights);
    if (objective)
        return ScalarObjective::single(*objective, p.objective_count());
    if (p.objective_count() == 1)
        return ScalarObjective::single(0, 1);
    throw DomainError("weights or objective is required when there are several objectives");
}

SolverOptions make_options(const py::kwargs& kw)
{
    SolverOptions o;
    for (const auto& [key, value] : kw) {
        const auto name = key.cast<std::string>();
        if (name == "grad_tol")
            o.grad_tol = value.cast<double>();
        else if (name == "constraint_tol")
            o.constraint_tol = value.cast<double>();
        else if (name == "det_tol")
            o.det_tol = value.cast<double>();
        else if (name == "max_inner")
            o.max_inner = value.cast<int>();
        else if (name == "max_outer")
            o.max_outer = value.cast<int>();
        else if (name == "multistart")
            o.multistart = value.cast<int>();
        else if (name == "seed")
            o.seed = value.cast<std::uint64_t>();
        else if (name == "method") {
            const auto m = value.cast<std::string>();
            if (m == "newton")
                o.method = InnerMethod::Newton;
            else if (m == "gradient")
                o.method = InnerMethod::GradientDescent;
            else
                throw DomainError("method must be 'newton' or 'gradient'");
        } else
            throw DomainError("unknown solver option '" + name + "'");
    }
    return o;
}

py::dict result_dict(const SolveResult& r)
{
    return py::dict("y"_a = r.y.values(), "multipliers"_a = r.multipliers, "objective"_a = r.objective,
                    "objectives"_a = r.values.objectives, "constraints"_a = r.values.constraints,
                    "grad_norm"_a = r.grad_norm, "max_violation"_a = r.max_violation, "iterations"_a = r.iterations,
                    "outer_iterations"_a = r.outer_iterations, "penalty"_a = r.penalty,
                    "status"_a = to_string(r.status), "converged"_a = r.converged());
}

py::dict nc_dict(const NcReport& r)
{
    return py::dict("objective"_a = r.objective, "original"_a = r.original, "resolved"_a = r.resolved,
                    "improvement"_a = r.improvement, "status"_a = to_string(r.status), "message"_a = r.message);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Multiobjective variational problems on time scales";

    auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<EvalError>(m, "EvalError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());

    py::class_<TimeScale>(m, "TimeScale")
        .def(py::init(&TimeScale::parse), "literal"_a, "tolerance"_a = kDefaultPointTolerance)
        .def_property_readonly("min", &TimeScale::min)
        .def_property_readonly("max", &TimeScale::max)
        .def("is_discrete", &TimeScale::is_discrete)
        .def("contains", &TimeScale::contains, "t"_a)
        .def("sigma", &TimeScale::sigma, "t"_a)
        .def("rho", &TimeScale::rho, "t"_a)
        .def("graininess", py::overload_cast<double>(&TimeScale::graininess, py::const_), "t"_a)
        .def(
            "classify",
            [](const TimeScale& ts, double t) {
                const PointClass c = ts.classify(t);
                return py::make_tuple(c.right == RightClass::Dense ? "right-dense" : "right-scattered",
                                      c.left == LeftClass::Dense ? "left-dense" : "left-scattered");
            },
            "t"_a)
        .def("truncate_k", &TimeScale::truncate_k)
        .def(
            "sample",
            [](const TimeScale& ts, double resolution) {
                const GridTimeScale g = ts.sample(resolution);
                std::vector<bool> dense(g.size());
                for (std::size_t i = 0; i < g.size(); ++i)
                    dense[i] = g.dense(i);
                return py::dict("points"_a = std::vector<double>(g.points().begin(), g.points().end()),
                                "graininess"_a = std::vector<double>(g.graininess().begin(), g.graininess().end()),
                                "dense"_a = dense);
            },
            "resolution"_a)
        .def("__str__", &TimeScale::to_string)
        .def("__repr__", [](const TimeScale& ts) { return "TimeScale('" + ts.to_string() + "')"; });

    m.def(
        "delta_derivative",
        [](std::vector<double> points, const Eigen::MatrixXd& values) {
            const std::size_t n = points.size();
            return delta_derivative(GridFunction(grid_from_points(std::move(points)), as_columns(values, n))).values();
        },
        "points"_a, "values"_a, "Forward difference quotients on T^k.");
    m.def(
        "delta_integral",
        [](std::vector<double> points, const Eigen::MatrixXd& values) {
            const std::size_t n = points.size();
            return delta_integral(GridFunction(grid_from_points(std::move(points)), as_columns(values, n)));
        },
        "points"_a, "values"_a, "Left-rectangle Delta-integral over the whole grid.");
    m.def(
        "c1rd_norm",
        [](std::vector<double> points, const Eigen::MatrixXd& values) {
            const std::size_t n = points.size();
            return c1rd_norm(GridFunction(grid_from_points(std::move(points)), as_columns(values, n)));
        },
        "points"_a, "values"_a);

    py::class_<VariationalProblem>(m, "Problem")
        .def(py::init([](const std::string& scale, double resolution, int dim, const std::vector<std::string>& objectives,
                         const std::vector<std::pair<std::string, double>>& constraints, Eigen::VectorXd alpha,
                         Eigen::VectorXd beta) {
                 std::vector<Expr> objs;
                 for (const auto& o : objectives)
                     objs.push_back(parse_expr(o, dim));
                 std::vector<Constraint> cons;
                 for (const auto& [g, target] : constraints)
                     cons.push_back({parse_expr(g, dim), target});
                 return VariationalProblem(TimeScale::parse(scale), resolution, dim, std::move(objs), std::move(cons),
                                           std::move(alpha), std::move(beta));
             }),
             "scale"_a, "resolution"_a, "dim"_a, "objectives"_a, "constraints"_a = std::vector<std::pair<std::string, double>>{},
             "alpha"_a, "beta"_a)
        .def_static(
            "from_file",
            [](const std::filesystem::path& path, std::optional<double> resolution) {
                return read_problem_file(path).build(resolution);
            },
            "path"_a, "resolution"_a = py::none())
        .def_static(
            "from_text",
            [](const std::string& text, std::optional<double> resolution) { return parse_problem(text).build(resolution); },
            "text"_a, "resolution"_a = py::none())
        .def_property_readonly("dim", &VariationalProblem::dim)
        .def_property_readonly("objective_count", &VariationalProblem::objective_count)
        .def_property_readonly("constraint_count", &VariationalProblem::constraint_count)
        .def_property_readonly("points", [](const VariationalProblem& p) {
            return std::vector<double>(p.grid().points().begin(), p.grid().points().end());
        })
        .def_property_readonly("scale", &VariationalProblem::scale)
        .def("linear_guess", [](const VariationalProblem& p) { return p.linear_guess().values(); })
        .def(
            "evaluate",
            [](const VariationalProblem& p, const Eigen::MatrixXd& y) {
                const FunctionalValue v = evaluate(p, on_problem_grid(p, y));
                return py::dict("objectives"_a = v.objectives, "constraints"_a = v.constraints,
                                "violations"_a = v.violations);
            },
            "y"_a)
        .def(
            "gateaux",
            [](const VariationalProblem& p, const Eigen::MatrixXd& y, const Eigen::MatrixXd& eta, std::size_t objective) {
                return gateaux(p, FunctionalId::objective(objective), on_problem_grid(p, y), on_problem_grid(p, eta));
            },
            "y"_a, "eta"_a, "objective"_a = 0);

    m.def(
        "solve",
        [](const VariationalProblem& p, std::optional<std::vector<double>> weights, std::optional<std::size_t> objective,
           std::optional<Eigen::MatrixXd> initial, const py::kwargs& kw) {
            const ScalarObjective obj = make_objective(p, weights, objective);
            const SolverOptions o = make_options(kw);
            std::optional<GridFunction> init;
            if (initial)
                init = on_problem_grid(p, *initial);
            SolveResult r = [&] {
                py::gil_scoped_release release;
                return solve_scalar(p, obj, init, o);
            }();
            py::dict out = result_dict(r);
            const ELReport el = el_residual(p, obj, r);
            out["el_residual_max"] = el.max_residual;
            out["dubois_reymond_spread"] = el.dubois_reymond_spread;
            return out;
        },
        "problem"_a, "weights"_a = py::none(), "objective"_a = py::none(), "initial"_a = py::none(),
        "Minimize a weighted sum (weights) or a single objective (0-based index). Keyword arguments are solver options.");

    m.def(
        "el_residual",
        [](const VariationalProblem& p, const Eigen::MatrixXd& y, std::optional<std::vector<double>> weights,
           std::optional<std::size_t> objective, std::optional<Eigen::VectorXd> multipliers) {
            const ScalarObjective obj = make_objective(p, weights, objective);
            const GridFunction g = on_problem_grid(p, y);
            Eigen::VectorXd lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.constraint_count()));
            if (multipliers)
                lambda = *multipliers;
            else if (p.constraint_count() > 0) {
                const auto recovered = recover_multipliers(p, obj, g);
                if (!recovered)
                    throw DomainError("multipliers cannot be recovered at this point; pass them explicitly");
                lambda = *recovered;
            }
            const ELReport r = el_residual(p, obj, g, lambda);
            return py::dict("t"_a = r.t, "residual"_a = r.residual, "max_residual"_a = r.max_residual,
                            "dubois_reymond_spread"_a = r.dubois_reymond_spread, "multipliers"_a = lambda);
        },
        "problem"_a, "y"_a, "weights"_a = py::none(), "objective"_a = py::none(), "multipliers"_a = py::none());

    m.def(
        "pareto_sweep",
        [](const VariationalProblem& p, int k, bool warm_start, unsigned threads, const py::kwargs& kw) {
            SweepOptions so;
            so.solver = make_options(kw);
            so.warm_start = warm_start;
            so.threads = threads;
            const ParetoFront front = [&] {
                py::gil_scoped_release release;
                return weighted_sweep(p, k, so);
            }();
            py::list entries;
            for (const ParetoEntry& e : front.entries) {
                py::dict d = result_dict(e.result);
                d["weights"] = e.weights;
                d["objectives"] = e.objectives;
                entries.append(d);
            }
            return py::dict("entries"_a = entries, "attempted"_a = front.attempted,
                            "dominated_removed"_a = front.dominated_removed, "failures"_a = front.failures.size());
        },
        "problem"_a, "k"_a = 20, "warm_start"_a = true, "threads"_a = 1u);

    m.def(
        "nc_crosscheck",
        [](const VariationalProblem& p, const Eigen::MatrixXd& y, std::size_t objective, double nc_tol,
           const py::kwargs& kw) {
            return nc_dict(nc_crosscheck(p, on_problem_grid(p, y), objective, make_options(kw), nc_tol));
        },
        "problem"_a, "y"_a, "objective"_a, "nc_tol"_a = kDefaultNcTolerance);

    m.def("dominance_filter", &dominance_filter, "points"_a, "tol"_a = kDefaultDominanceTolerance,
          "Indices of the non-dominated points, first occurrence kept among duplicates.");
}
