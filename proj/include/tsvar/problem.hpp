#pragma once

#include "tsvar/delta_calculus.hpp"
#include "tsvar/expr.hpp"
#include "tsvar/timescale.hpp"

#include <Eigen/Core>

#include <vector>

namespace tsvar {

/// Integral constraint int_a^b G(t, y^sigma, y^Delta) Delta t = target.
struct Constraint {
    Expr integrand;
    double target = 0.0;
};

/// Discretized functional Sum_{i<N} mu_i * L(t_i, y_{i+1}, (y_{i+1} - y_i) / mu_i) on a grid.
///
/// All derivatives are symbolic; they are exact derivatives of the sum, so gradients and
/// Gateaux derivatives are consistent with value() up to rounding.
class DiscreteFunctional {
public:
    DiscreteFunctional(Expr integrand, int dim);

    const Expr& integrand() const noexcept { return integrand_; }
    int dim() const noexcept { return dim_; }
    /// dL/dy_k and dL/dv_k (k zero-based).
    const Expr& partial_y(int k) const { return d_y_.at(static_cast<std::size_t>(k)); }
    const Expr& partial_v(int k) const { return d_v_.at(static_cast<std::size_t>(k)); }

    double value(const GridTimeScale& grid, const Eigen::MatrixXd& y) const;

    /// Gradient with respect to every sample y(t_0..t_N); rows match y.
    Eigen::MatrixXd gradient(const GridTimeScale& grid, const Eigen::MatrixXd& y) const;

    double gateaux(const GridTimeScale& grid, const Eigen::MatrixXd& y, const Eigen::MatrixXd& eta) const;

    /// Block-tridiagonal Hessian. diag[i] = d2/dy_i^2, off[i] = d2/dy_i dy_{i+1}; both n x n.
    struct Hessian {
        std::vector<Eigen::MatrixXd> diag;
        std::vector<Eigen::MatrixXd> off;
    };
    Hessian hessian(const GridTimeScale& grid, const Eigen::MatrixXd& y) const;

    /// Integrand partials F_s, F_v at every k-point (rows 0..N-1).
    void pointwise_partials(const GridTimeScale& grid, const Eigen::MatrixXd& y, Eigen::MatrixXd& f_s,
                            Eigen::MatrixXd& f_v) const;

private:
    Expr integrand_;
    int dim_;
    CompiledExpr compiled_;
    std::vector<Expr> d_y_;
    std::vector<Expr> d_v_;
    std::vector<CompiledExpr> c_y_;
    std::vector<CompiledExpr> c_v_;
    // second partials, row-major k*n + l
    std::vector<CompiledExpr> c_yy_;
    std::vector<CompiledExpr> c_yv_;
    std::vector<CompiledExpr> c_vv_;
};

struct FunctionalId {
    enum class Kind { Objective, Constraint };

    Kind kind = Kind::Objective;
    std::size_t index = 0;

    static FunctionalId objective(std::size_t i) { return {Kind::Objective, i}; }
    static FunctionalId constraint(std::size_t i) { return {Kind::Constraint, i}; }
};

struct FunctionalValue {
    std::vector<double> objectives;
    std::vector<double> constraints;
    std::vector<double> violations; // constraints[i] - target_i

    double max_violation() const noexcept;
};

/// Objectives, isoperimetric constraints and fixed endpoints on a sampled time scale.
class VariationalProblem {
public:
    VariationalProblem(TimeScale scale, double resolution, int dim, std::vector<Expr> objectives,
                       std::vector<Constraint> constraints, Eigen::VectorXd alpha, Eigen::VectorXd beta);

    const TimeScale& scale() const noexcept { return scale_; }
    double resolution() const noexcept { return resolution_; }
    const GridTimeScale& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    int dim() const noexcept { return dim_; }
    const std::vector<Expr>& objectives() const noexcept { return objectives_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    std::size_t objective_count() const noexcept { return objectives_.size(); }
    std::size_t constraint_count() const noexcept { return constraints_.size(); }
    const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
    const Eigen::VectorXd& beta() const noexcept { return beta_; }

    const DiscreteFunctional& objective_functional(std::size_t i) const { return objective_fns_.at(i); }
    const DiscreteFunctional& constraint_functional(std::size_t i) const { return constraint_fns_.at(i); }

    /// Interior samples y(t_1..t_{N-1}) are the unknowns.
    std::size_t interior_points() const noexcept { return grid_->size() - 2; }
    std::size_t unknown_count() const noexcept { return interior_points() * static_cast<std::size_t>(dim_); }

    /// Linear interpolation in t between alpha and beta.
    GridFunction linear_guess() const;
    /// Full grid function from interior unknowns (point-major); endpoints set to alpha/beta.
    GridFunction assemble(const Eigen::VectorXd& interior) const;
    Eigen::VectorXd interior(const GridFunction& y) const;

    /// Throws DimensionError unless y lives on this problem's grid with dimension n.
    void require_compatible(const GridFunction& y) const;

    /// Same scale, grid, dimension and boundary values with different functionals.
    VariationalProblem with_functionals(std::vector<Expr> objectives, std::vector<Constraint> constraints) const;

private:
    TimeScale scale_;
    double resolution_;
    GridPtr grid_;
    int dim_;
    std::vector<Expr> objectives_;
    std::vector<Constraint> constraints_;
    Eigen::VectorXd alpha_;
    Eigen::VectorXd beta_;
    std::vector<DiscreteFunctional> objective_fns_;
    std::vector<DiscreteFunctional> constraint_fns_;
};

FunctionalValue evaluate(const VariationalProblem& p, const GridFunction& y);

/// Directional derivative of the discretized functional `which` at y along eta.
double gateaux(const VariationalProblem& p, FunctionalId which, const GridFunction& y, const GridFunction& eta);

} // namespace tsvar
