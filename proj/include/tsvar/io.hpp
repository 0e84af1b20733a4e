#pragma once

#include "tsvar/errors.hpp"
#include "tsvar/pareto.hpp"
#include "tsvar/problem.hpp"
#include "tsvar/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tsvar {

/// Malformed problem file. Carries the 1-based line, the section name and a byte offset
/// within the line (or within the expression, for expression errors).
class ProblemFileError : public Error {
public:
    ProblemFileError(const std::string& source, std::size_t line, std::string section, std::size_t offset,
                     const std::string& what);

    std::size_t line() const noexcept { return line_; }
    const std::string& section() const noexcept { return section_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t line_;
    std::string section_;
    std::size_t offset_;
};

/// Malformed solution or other tabular input.
class TableError : public Error {
public:
    using Error::Error;
};

inline constexpr double kDefaultResolution = 1e-3;

/// Parsed contents of a problem file. See docs/problem-format.md for the grammar.
struct ProblemFile {
    TimeScale scale;
    std::optional<double> resolution;
    int dim = 1;
    std::vector<Expr> objectives;
    std::vector<Constraint> constraints;
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    SolverOptions solver;
    /// Tolerance for the EL residual in `check`; unset means 10 * grad_tol / min graininess.
    std::optional<double> el_tol;
    double nc_tol = kDefaultNcTolerance;

    /// `resolution_override` wins over the file, which wins over kDefaultResolution.
    VariationalProblem build(std::optional<double> resolution_override = std::nullopt) const;
};

ProblemFile parse_problem(std::string_view text, const std::string& source = "<problem>");
ProblemFile read_problem_file(const std::filesystem::path& path);

/// Rows of a `t,y1,...,yn` table.
struct SolutionTable {
    std::vector<double> t;
    Eigen::MatrixXd values;
};

SolutionTable parse_solution(std::string_view text, const std::string& source = "<solution>");
SolutionTable read_solution_file(const std::filesystem::path& path);

/// Places a table on the problem grid. Throws DimensionError on a column count or grid mismatch.
GridFunction solution_on_grid(const VariationalProblem& p, const SolutionTable& table);

void write_solution(std::ostream& out, const GridFunction& y);
void write_el_residual(std::ostream& out, const ELReport& report);
/// One row per entry: gamma_1..gamma_d, L_1..L_d, solution path.
void write_front(std::ostream& out, const ParetoFront& front, const std::vector<std::string>& solution_paths);

std::string solve_report_json(const ScalarObjective& obj, const SolveResult& result, const ELReport& el);
std::string front_report_json(const ParetoFront& front, int k, const std::vector<std::string>& solution_paths);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace tsvar
