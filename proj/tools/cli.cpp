#include "cli.hpp"

#include "text_util.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/io.hpp"
#include "tsvar/pareto.hpp"
#include "tsvar/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace tsvar::cli {

namespace fs = std::filesystem;
using detail::format_double;

namespace {

/// Error that maps directly to an exit code.
struct Exit {
    int code;
    std::string message;
};

struct Common {
    std::string problem;
    std::optional<double> resolution;
    std::optional<std::uint64_t> seed;
    std::optional<int> multistart;
    std::optional<double> tol_grad;
    std::optional<double> tol_con;
    std::string method;
};

struct Selection {
    std::string weights;
    std::optional<int> objective;
};

void add_common(CLI::App& cmd, Common& c)
{
    cmd.add_option("problem", c.problem, "Problem file")->required();
    cmd.add_option("--resolution", c.resolution, "Sampling step for continuous segments")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--seed", c.seed, "Seed for multistart perturbations");
    cmd.add_option("--multistart", c.multistart, "Number of deterministic starts")->check(CLI::Range(1, 1000));
    cmd.add_option("--tol-grad", c.tol_grad, "Gradient tolerance")->check(CLI::PositiveNumber);
    cmd.add_option("--tol-con", c.tol_con, "Constraint tolerance")->check(CLI::PositiveNumber);
    cmd.add_option("--method", c.method, "Inner solver")->check(CLI::IsMember({"newton", "gradient"}));
}

void add_selection(CLI::App& cmd, Selection& s)
{
    auto* w = cmd.add_option("--weights", s.weights, "Comma-separated positive weights summing to 1");
    auto* o = cmd.add_option("--objective", s.objective, "Single objective index (1-based)");
    w->excludes(o);
}

struct Loaded {
    ProblemFile file;
    VariationalProblem problem;
    SolverOptions options;
};

Loaded load(const Common& c)
{
    ProblemFile file = read_problem_file(c.problem);
    VariationalProblem problem = file.build(c.resolution);
    SolverOptions o = file.solver;
    if (c.seed)
        o.seed = *c.seed;
    if (c.multistart)
        o.multistart = *c.multistart;
    if (c.tol_grad)
        o.grad_tol = *c.tol_grad;
    if (c.tol_con)
        o.constraint_tol = *c.tol_con;
    if (c.method == "newton")
        o.method = InnerMethod::Newton;
    else if (c.method == "gradient")
        o.method = InnerMethod::GradientDescent;
    return {std::move(file), std::move(problem), o};
}

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> out;
    for (std::string_view item : detail::split(text, ',')) {
        const auto v = detail::parse_double(detail::trim(item));
        if (!v)
            throw Exit{kInputError, std::string("bad ") + what + " value '" + std::string(detail::trim(item)) + "'"};
        out.push_back(*v);
    }
    return out;
}

/// Weights must be positive and sum to 1; sums within 1e-9 of 1 are normalized.
std::optional<ScalarObjective> selection(const Selection& s, const VariationalProblem& p)
{
    const std::size_t d = p.objective_count();
    if (!s.weights.empty()) {
        std::vector<double> w = parse_list(s.weights, "weight");
        if (w.size() != d)
            throw Exit{kInputError, "expected " + std::to_string(d) + " weights, got " + std::to_string(w.size())};
        double sum = 0.0;
        for (double x : w) {
            if (!(x > 0.0))
                throw Exit{kInputError, "weights must be strictly positive"};
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw Exit{kInputError, "weights must sum to 1 (got " + format_double(sum) + ")"};
        for (double& x : w)
            x /= sum;
        return ScalarObjective::weighted(std::move(w));
    }
    if (s.objective) {
        if (*s.objective < 1 || static_cast<std::size_t>(*s.objective) > d)
            throw Exit{kInputError, "--objective must be in 1.." + std::to_string(d)};
        return ScalarObjective::single(static_cast<std::size_t>(*s.objective - 1), d);
    }
    if (d == 1)
        return ScalarObjective::single(0, 1);
    return std::nullopt;
}

GridFunction load_solution(const std::string& path, const VariationalProblem& p)
{
    return solution_on_grid(p, read_solution_file(path));
}

std::string sibling(const fs::path& out, const std::string& suffix)
{
    fs::path p = out;
    p.replace_extension();
    return p.string() + suffix;
}

std::string render_solution(const GridFunction& y)
{
    std::ostringstream os;
    write_solution(os, y);
    return os.str();
}

// --- commands -------------------------------------------------------------------------------

int cmd_eval(const Common& c, const std::string& solution, std::ostream& out)
{
    const Loaded l = load(c);
    const GridFunction y = load_solution(solution, l.problem);
    const FunctionalValue v = evaluate(l.problem, y);
    out << "functional,value,violation\n";
    for (std::size_t i = 0; i < v.objectives.size(); ++i)
        out << 'L' << i + 1 << ',' << format_double(v.objectives[i]) << ",\n";
    for (std::size_t i = 0; i < v.constraints.size(); ++i)
        out << 'G' << i + 1 << ',' << format_double(v.constraints[i]) << ',' << format_double(v.violations[i]) << '\n';
    return kSuccess;
}

int cmd_solve(const Common& c, const Selection& s, const std::string& out_path, std::ostream& out)
{
    const Loaded l = load(c);
    const auto obj = selection(s, l.problem);
    if (!obj)
        throw Exit{kInputError, "a problem with several objectives needs --weights or --objective"};

    const SolveResult r = solve_scalar(l.problem, *obj, std::nullopt, l.options);
    const ELReport el = el_residual(l.problem, *obj, r);

    write_text_file(out_path, render_solution(r.y));
    write_text_file(sibling(out_path, ".report.json"), solve_report_json(*obj, r, el));
    std::ostringstream el_csv;
    write_el_residual(el_csv, el);
    write_text_file(sibling(out_path, ".el.csv"), el_csv.str());

    out << "status," << to_string(r.status) << '\n';
    out << "objective," << format_double(r.objective) << '\n';
    for (Eigen::Index i = 0; i < r.multipliers.size(); ++i)
        out << "lambda" << i + 1 << ',' << format_double(r.multipliers(i)) << '\n';
    out << "grad_norm," << format_double(r.grad_norm) << '\n';
    out << "max_violation," << format_double(r.max_violation) << '\n';
    out << "el_residual_max," << format_double(el.max_residual) << '\n';
    out << "iterations," << r.iterations << '\n';
    return r.converged() ? kSuccess : kSolverFailure;
}

int cmd_pareto(const Common& c, int k, const std::string& out_dir, bool no_warm_start, unsigned threads,
               std::ostream& out)
{
    const Loaded l = load(c);
    if (l.problem.objective_count() < 2)
        throw Exit{kInputError, "pareto needs at least 2 objectives"};

    SweepOptions so;
    so.solver = l.options;
    so.warm_start = !no_warm_start;
    so.threads = threads;
    const ParetoFront front = weighted_sweep(l.problem, k, so);

    const fs::path dir(out_dir);
    std::vector<std::string> names;
    for (std::size_t e = 0; e < front.entries.size(); ++e) {
        std::ostringstream name;
        name << "entry_" << std::setw(3) << std::setfill('0') << e << ".csv";
        names.push_back(name.str());
        write_text_file(dir / names.back(), render_solution(front.entries[e].result.y));
    }
    std::ostringstream table;
    write_front(table, front, names);
    write_text_file(dir / "front.csv", table.str());
    write_text_file(dir / "front.json", front_report_json(front, k, names));

    out << "entries," << front.entries.size() << '\n';
    out << "attempted," << front.attempted << '\n';
    out << "dominated_removed," << front.dominated_removed << '\n';
    out << "failures," << front.failures.size() << '\n';
    return front.entries.empty() ? kSolverFailure : kSuccess;
}

struct CheckArgs {
    std::string solution;
    std::string lambda;
    bool nc = false;
    std::optional<double> tol_el;
    std::optional<double> nc_tol;
};

int cmd_check(const Common& c, const Selection& s, const CheckArgs& a, std::ostream& out)
{
    const Loaded l = load(c);
    const VariationalProblem& p = l.problem;
    const GridFunction y = load_solution(a.solution, p);
    const auto obj = selection(s, p);
    bool pass = true;

    const FunctionalValue v = evaluate(p, y);
    for (std::size_t i = 0; i < v.violations.size(); ++i) {
        const bool ok = std::abs(v.violations[i]) <= l.options.constraint_tol;
        pass = pass && ok;
        out << "violation" << i + 1 << ',' << format_double(v.violations[i]) << ',' << (ok ? "ok" : "FAIL") << '\n';
    }

    if (obj) {
        Eigen::VectorXd lambda;
        if (!a.lambda.empty()) {
            const std::vector<double> values = parse_list(a.lambda, "lambda");
            if (values.size() != p.constraint_count())
                throw Exit{kInputError, "expected " + std::to_string(p.constraint_count()) + " multipliers"};
            lambda = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
        } else if (p.constraint_count() > 0) {
            const auto recovered = recover_multipliers(p, *obj, y);
            if (!recovered)
                throw Exit{kInputError, "multipliers are not recoverable; pass --lambda"};
            lambda = *recovered;
            for (Eigen::Index i = 0; i < lambda.size(); ++i)
                out << "lambda" << i + 1 << ',' << format_double(lambda(i)) << ",recovered\n";
        }
        const ELReport el = el_residual(p, *obj, y, lambda);
        const double el_tol
            = a.tol_el.value_or(l.file.el_tol.value_or(10.0 * l.options.grad_tol / p.grid().min_graininess()));
        const double dr_tol = el_tol * (p.grid().back() - p.grid().front());
        const bool el_ok = el.max_residual <= el_tol;
        const bool dr_ok = el.dubois_reymond_spread <= dr_tol;
        pass = pass && el_ok && dr_ok;
        out << "el_residual_max," << format_double(el.max_residual) << ',' << (el_ok ? "ok" : "FAIL") << '\n';
        out << "dubois_reymond_spread," << format_double(el.dubois_reymond_spread) << ',' << (dr_ok ? "ok" : "FAIL")
            << '\n';
    } else {
        out << "el_residual_max,skipped,no scalarization given\n";
    }

    if (a.nc) {
        if (p.objective_count() < 2)
            throw Exit{kInputError, "--nc needs at least 2 objectives"};
        const double nc_tol = a.nc_tol.value_or(l.file.nc_tol);
        for (std::size_t i = 0; i < p.objective_count(); ++i) {
            const NcReport r = nc_crosscheck(p, y, i, l.options, nc_tol);
            pass = pass && r.status == NcStatus::Confirmed;
            out << "nc_improvement" << i + 1 << ',' << format_double(r.improvement) << ',' << to_string(r.status)
                << '\n';
        }
    }
    out << "result," << (pass ? "pass" : "fail") << '\n';
    return pass ? kSuccess : kCheckFailure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multiobjective variational problems on time scales", "tsvar"};
    app.require_subcommand(1);

    Common common;
    Selection sel;

    std::string solution;
    auto* eval = app.add_subcommand("eval", "Evaluate objectives and constraints on a solution file");
    add_common(*eval, common);
    eval->add_option("solution", solution, "Solution file (t,y1,...,yn)")->required();

    std::string out_path = "solution.csv";
    auto* solve = app.add_subcommand("solve", "Minimize a weighted sum or a single objective");
    add_common(*solve, common);
    add_selection(*solve, sel);
    solve->add_option("--out", out_path, "Solution file to write");

    int k = 20;
    std::string out_dir = "front";
    bool no_warm_start = false;
    unsigned threads = 1;
    auto* pareto = app.add_subcommand("pareto", "Weighted-sum sweep of the Pareto front");
    add_common(*pareto, common);
    pareto->add_option("--grid", k, "Points per weight axis")->check(CLI::Range(2, 100000));
    pareto->add_option("--out", out_dir, "Output directory");
    pareto->add_flag("--no-warm-start", no_warm_start, "Solve each weight from the default start");
    pareto->add_option("--threads", threads, "Worker threads when warm start is off")->check(CLI::Range(1u, 256u));

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Verify first-order conditions of a solution");
    add_common(*check, common);
    add_selection(*check, sel);
    check->add_option("solution", check_args.solution, "Solution file (t,y1,...,yn)")->required();
    check->add_option("--lambda", check_args.lambda, "Comma-separated multipliers");
    check->add_flag("--nc", check_args.nc, "Cross-check each objective against the constrained re-solve");
    check->add_option("--tol-el", check_args.tol_el, "EL residual tolerance")->check(CLI::PositiveNumber);
    check->add_option("--nc-tol", check_args.nc_tol, "Improvement tolerance for --nc")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (*eval)
            return cmd_eval(common, solution, out);
        if (*solve)
            return cmd_solve(common, sel, out_path, out);
        if (*pareto)
            return cmd_pareto(common, k, out_dir, no_warm_start, threads, out);
        if (*check)
            return cmd_check(common, sel, check_args, out);
    } catch (const Exit& e) {
        err << "error: " << e.message << '\n';
        return e.code;
    } catch (const DimensionError& e) {
        err << "shape mismatch: " << e.what() << '\n';
        return kShapeMismatch;
    } catch (const ProblemFileError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << '\n';
        return kUnexpected;
    }
    return kInputError;
}

} // namespace tsvar::cli
