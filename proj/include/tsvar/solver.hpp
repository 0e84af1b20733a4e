#pragma once

#include "tsvar/problem.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsvar {

/// Scalarization of the problem's objectives: L_gamma = Sum_i gamma_i L_i.
class ScalarObjective {
public:
    static ScalarObjective weighted(std::vector<double> weights);
    /// Selects objective `index` (zero-based) out of `count`.
    static ScalarObjective single(std::size_t index, std::size_t count);

    const std::vector<double>& weights() const noexcept { return weights_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

    /// All weights > 0 and summing to 1 within tol.
    bool is_positive_simplex(double tol = 1e-9) const noexcept;

    /// Symbolic Sum gamma_i L_i for the problem's objectives.
    Expr lagrangian(const VariationalProblem& p) const;

    std::string describe() const;

private:
    std::vector<double> weights_;
    std::optional<std::size_t> index_;
};

enum class SolveStatus { Converged, MaxIterations, LineSearchFailure };
std::string to_string(SolveStatus s);

enum class InnerMethod {
    /// Modified Newton on the banded Hessian plus a rank-m penalty update, Armijo backtracking.
    Newton,
    /// Steepest descent with Armijo backtracking.
    GradientDescent,
};

struct SolverOptions {
    double grad_tol = 1e-8;
    double constraint_tol = 1e-8;
    double det_tol = 1e-10;
    int max_inner = 10'000;
    int max_outer = 50;

    double armijo_c = 1e-4;
    double shrink = 0.5;
    int max_backtracks = 60;

    double initial_penalty = 1.0;
    double penalty_growth = 10.0;
    /// Penalty grows unless the max violation shrank by at least this factor.
    double violation_reduction = 4.0;

    InnerMethod method = InnerMethod::Newton;

    int multistart = 1;
    double multistart_scale = 0.1;
    std::uint64_t seed = 0;
};

struct SolveResult {
    GridFunction y;
    /// Multipliers in F = L - Sum lambda_i G_i.
    Eigen::VectorXd multipliers;
    double objective = 0.0;
    FunctionalValue values;
    double grad_norm = 0.0;
    double max_violation = 0.0;
    int iterations = 0;
    int outer_iterations = 0;
    double penalty = 0.0;
    SolveStatus status = SolveStatus::MaxIterations;
    std::uint64_t seed = 0;
    int start_index = 0;

    bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Minimizes the scalarized functional subject to the problem's integral constraints with the
/// endpoints fixed. Unknowns are the interior samples; the default start is linear_guess().
/// The result is a stationary point, i.e. a candidate weak local minimum.
SolveResult solve_scalar(const VariationalProblem& p, const ScalarObjective& obj,
                         const std::optional<GridFunction>& init = std::nullopt,
                         const SolverOptions& options = {});

/// phi(y) = L_gamma[y] - Sum lambda_i (G_i[y] - xi_i) + penalty/2 Sum (G_i[y] - xi_i)^2, the
/// function minimized by each inner solve.
double augmented_lagrangian(const VariationalProblem& p, const ScalarObjective& obj, const GridFunction& y,
                            const Eigen::VectorXd& multipliers, double penalty);

/// Gradient of augmented_lagrangian() over the interior unknowns (point-major).
Eigen::VectorXd augmented_lagrangian_gradient(const VariationalProblem& p, const ScalarObjective& obj,
                                              const GridFunction& y, const Eigen::VectorXd& multipliers,
                                              double penalty);

/// Pointwise check of F_v^Delta = F_s with F = L_gamma - Sum lambda_i G_i.
struct ELReport {
    std::vector<double> t;          // t_0 .. t_{N-2}
    Eigen::MatrixXd residual;       // (N-1) x n
    double max_residual = 0.0;
    /// max_i ||F_v(t_i) - int_a^{t_i} F_s - c*|| over t_0..t_{N-1}, c* the mean.
    double dubois_reymond_spread = 0.0;
    Eigen::VectorXd dubois_reymond_constant;
};

ELReport el_residual(const VariationalProblem& p, const ScalarObjective& obj, const GridFunction& y,
                     const Eigen::VectorXd& multipliers);
ELReport el_residual(const VariationalProblem& p, const ScalarObjective& obj, const SolveResult& result);

/// det[ delta G_i[y; v_j] ]_{i,j=1..m}. Directions must vanish at both endpoints.
double regularity_probe(const VariationalProblem& p, const GridFunction& y, const std::vector<GridFunction>& directions);

/// Same with m seeded random endpoint-vanishing directions.
double regularity_probe(const VariationalProblem& p, const GridFunction& y, std::uint64_t seed);

std::vector<GridFunction> random_directions(const VariationalProblem& p, std::size_t count, std::uint64_t seed);

/// Least-squares lambda from grad L_gamma = Sum lambda_i grad G_i over the interior samples;
/// nullopt when the constraint gradients are linearly dependent.
std::optional<Eigen::VectorXd> recover_multipliers(const VariationalProblem& p, const ScalarObjective& obj,
                                                   const GridFunction& y);

struct BruteForceLattice {
    double lo = -4.0;
    double hi = 4.0;
    double step = 1e-3;
    /// Feasibility tolerance |G - xi|; negative means "use step".
    double constraint_tol = -1.0;
    std::uint64_t max_points = 100'000'000;
};

struct BruteForceResult {
    GridFunction y;
    double objective;
    std::uint64_t evaluated;
    std::uint64_t feasible;
};

/// Exhaustive lattice search over the interior samples of a purely discrete problem with at
/// most 3 interior points and 4 unknowns. nullopt when no lattice point is feasible.
/// Throws SearchSpaceError when the lattice exceeds max_points.
std::optional<BruteForceResult> brute_force_oracle(const VariationalProblem& p, const ScalarObjective& obj,
                                                   const BruteForceLattice& lattice = {});

} // namespace tsvar
