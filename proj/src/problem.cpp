#include "tsvar/problem.hpp"

#include "tsvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsvar {

namespace {

// Per-term sample buffers: s = y(t_{i+1}), w = (y(t_{i+1}) - y(t_i)) / mu_i.
struct TermPoint {
    std::vector<double> s;
    std::vector<double> w;

    explicit TermPoint(int n)
        : s(static_cast<std::size_t>(n))
        , w(static_cast<std::size_t>(n))
    {}

    void load(const Eigen::MatrixXd& y, Eigen::Index i, double mu)
    {
        for (Eigen::Index k = 0; k < y.cols(); ++k) {
            s[static_cast<std::size_t>(k)] = y(i + 1, k);
            w[static_cast<std::size_t>(k)] = (y(i + 1, k) - y(i, k)) / mu;
        }
    }
};

// Number of integrand terms: the points with a successor.
Eigen::Index term_count(const GridTimeScale& grid, const Eigen::MatrixXd& y)
{
    if (static_cast<std::size_t>(y.rows()) != grid.size())
        throw DimensionError("samples do not match the grid");
    return y.rows() - 1;
}

} // namespace

DiscreteFunctional::DiscreteFunctional(Expr integrand, int dim)
    : integrand_(std::move(integrand))
    , dim_(dim)
    , compiled_(integrand_)
{
    if (integrand_.max_index() > dim_)
        throw DimensionError("integrand " + integrand_.to_string() + " exceeds dimension " + std::to_string(dim_));
    for (int k = 1; k <= dim_; ++k) {
        d_y_.push_back(diff(integrand_, Variable::y(k)));
        d_v_.push_back(diff(integrand_, Variable::v(k)));
        c_y_.emplace_back(d_y_.back());
        c_v_.emplace_back(d_v_.back());
    }
    const auto n = static_cast<std::size_t>(dim_);
    c_yy_.resize(n * n);
    c_yv_.resize(n * n);
    c_vv_.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const int col = static_cast<int>(l) + 1;
            c_yy_[k * n + l] = CompiledExpr(diff(d_y_[k], Variable::y(col)));
            c_yv_[k * n + l] = CompiledExpr(diff(d_y_[k], Variable::v(col)));
            c_vv_[k * n + l] = CompiledExpr(diff(d_v_[k], Variable::v(col)));
        }
    }
}

double DiscreteFunctional::value(const GridTimeScale& grid, const Eigen::MatrixXd& y) const
{
    const Eigen::Index terms = term_count(grid, y);
    TermPoint p(dim_);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < terms; ++i) {
        const double mu = grid.graininess(static_cast<std::size_t>(i));
        p.load(y, i, mu);
        sum += mu * compiled_(grid.point(static_cast<std::size_t>(i)), p.s.data(), p.w.data());
    }
    return sum;
}

Eigen::MatrixXd DiscreteFunctional::gradient(const GridTimeScale& grid, const Eigen::MatrixXd& y) const
{
    const Eigen::Index terms = term_count(grid, y);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(y.rows(), y.cols());
    TermPoint p(dim_);
    for (Eigen::Index i = 0; i < terms; ++i) {
        const double mu = grid.graininess(static_cast<std::size_t>(i));
        const double t = grid.point(static_cast<std::size_t>(i));
        p.load(y, i, mu);
        for (int k = 0; k < dim_; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const double ls = c_y_[ku].is_zero() ? 0.0 : c_y_[ku](t, p.s.data(), p.w.data());
            const double lv = c_v_[ku].is_zero() ? 0.0 : c_v_[ku](t, p.s.data(), p.w.data());
            g(i + 1, k) += mu * ls + lv;
            g(i, k) -= lv;
        }
    }
    return g;
}

double DiscreteFunctional::gateaux(const GridTimeScale& grid, const Eigen::MatrixXd& y,
                                   const Eigen::MatrixXd& eta) const
{
    if (eta.rows() != y.rows() || eta.cols() != y.cols())
        throw DimensionError("direction shape differs from the samples");
    const Eigen::Index terms = term_count(grid, y);
    TermPoint p(dim_);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < terms; ++i) {
        const double mu = grid.graininess(static_cast<std::size_t>(i));
        const double t = grid.point(static_cast<std::size_t>(i));
        p.load(y, i, mu);
        double term = 0.0;
        for (int k = 0; k < dim_; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const double ls = c_y_[ku].is_zero() ? 0.0 : c_y_[ku](t, p.s.data(), p.w.data());
            const double lv = c_v_[ku].is_zero() ? 0.0 : c_v_[ku](t, p.s.data(), p.w.data());
            term += ls * eta(i + 1, k) + lv * (eta(i + 1, k) - eta(i, k)) / mu;
        }
        sum += mu * term;
    }
    return sum;
}

DiscreteFunctional::Hessian DiscreteFunctional::hessian(const GridTimeScale& grid, const Eigen::MatrixXd& y) const
{
    const Eigen::Index terms = term_count(grid, y);
    const auto n = static_cast<std::size_t>(dim_);
    Hessian h;
    h.diag.assign(static_cast<std::size_t>(y.rows()), Eigen::MatrixXd::Zero(dim_, dim_));
    h.off.assign(static_cast<std::size_t>(terms), Eigen::MatrixXd::Zero(dim_, dim_));

    TermPoint p(dim_);
    Eigen::MatrixXd yy(dim_, dim_);
    Eigen::MatrixXd yv(dim_, dim_);
    Eigen::MatrixXd vv(dim_, dim_);
    for (Eigen::Index i = 0; i < terms; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const double mu = grid.graininess(iu);
        const double t = grid.point(iu);
        p.load(y, i, mu);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l) {
                const auto at = [&](const std::vector<CompiledExpr>& c) {
                    const CompiledExpr& e = c[k * n + l];
                    return e.is_zero() ? 0.0 : e(t, p.s.data(), p.w.data());
                };
                const auto ki = static_cast<Eigen::Index>(k);
                const auto li = static_cast<Eigen::Index>(l);
                yy(ki, li) = at(c_yy_);
                yv(ki, li) = at(c_yv_); // d2L / ds_k dv_l
                vv(ki, li) = at(c_vv_);
            }
        }
        // phi_i = mu L(s, w) with s = y_{i+1}, w = (y_{i+1} - y_i) / mu
        h.diag[iu + 1] += mu * yy + yv + yv.transpose() + vv / mu;
        h.diag[iu] += vv / mu;
        h.off[iu] += -(yv.transpose() + vv / mu);
    }
    return h;
}

void DiscreteFunctional::pointwise_partials(const GridTimeScale& grid, const Eigen::MatrixXd& y,
                                            Eigen::MatrixXd& f_s, Eigen::MatrixXd& f_v) const
{
    const Eigen::Index terms = term_count(grid, y);
    f_s.resize(terms, dim_);
    f_v.resize(terms, dim_);
    TermPoint p(dim_);
    for (Eigen::Index i = 0; i < terms; ++i) {
        const double mu = grid.graininess(static_cast<std::size_t>(i));
        const double t = grid.point(static_cast<std::size_t>(i));
        p.load(y, i, mu);
        for (int k = 0; k < dim_; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            f_s(i, k) = c_y_[ku](t, p.s.data(), p.w.data());
            f_v(i, k) = c_v_[ku](t, p.s.data(), p.w.data());
        }
    }
}

// ---------------------------------------------------------------------------

double FunctionalValue::max_violation() const noexcept
{
    double m = 0.0;
    for (double v : violations)
        m = std::max(m, std::abs(v));
    return m;
}

VariationalProblem::VariationalProblem(TimeScale scale, double resolution, int dim, std::vector<Expr> objectives,
                                       std::vector<Constraint> constraints, Eigen::VectorXd alpha,
                                       Eigen::VectorXd beta)
    : scale_(std::move(scale))
    , resolution_(resolution)
    , dim_(dim)
    , objectives_(std::move(objectives))
    , constraints_(std::move(constraints))
    , alpha_(std::move(alpha))
    , beta_(std::move(beta))
{
    if (dim_ < 1)
        throw DimensionError("dimension must be at least 1");
    if (scale_.is_degenerate())
        throw DegenerateScaleError("a variational problem needs a < b");
    if (objectives_.empty())
        throw DimensionError("at least one objective is required");
    if (alpha_.size() != dim_ || beta_.size() != dim_)
        throw DimensionError("boundary values must have " + std::to_string(dim_) + " components");
    if (!alpha_.allFinite() || !beta_.allFinite())
        throw DomainError("boundary values must be finite");
    for (const Constraint& c : constraints_)
        if (!std::isfinite(c.target))
            throw DomainError("constraint targets must be finite");

    grid_ = std::make_shared<const GridTimeScale>(scale_.sample(resolution_));
    for (const Expr& e : objectives_)
        objective_fns_.emplace_back(e, dim_);
    for (const Constraint& c : constraints_)
        constraint_fns_.emplace_back(c.integrand, dim_);
}

GridFunction VariationalProblem::linear_guess() const
{
    const double a = grid_->front();
    const double b = grid_->back();
    return GridFunction::from(grid_, dim_, [&](double t) -> Eigen::VectorXd {
        const double r = (t - a) / (b - a);
        return alpha_ + r * (beta_ - alpha_);
    });
}

GridFunction VariationalProblem::assemble(const Eigen::VectorXd& interior) const
{
    if (static_cast<std::size_t>(interior.size()) != unknown_count())
        throw DimensionError("expected " + std::to_string(unknown_count()) + " interior unknowns");
    Eigen::MatrixXd v(static_cast<Eigen::Index>(grid_->size()), dim_);
    v.row(0) = alpha_.transpose();
    v.row(v.rows() - 1) = beta_.transpose();
    for (Eigen::Index i = 1; i + 1 < v.rows(); ++i)
        v.row(i) = interior.segment((i - 1) * dim_, dim_).transpose();
    return GridFunction(grid_, std::move(v));
}

Eigen::VectorXd VariationalProblem::interior(const GridFunction& y) const
{
    require_compatible(y);
    Eigen::VectorXd x(static_cast<Eigen::Index>(unknown_count()));
    for (Eigen::Index i = 1; i + 1 < static_cast<Eigen::Index>(y.size()); ++i)
        x.segment((i - 1) * dim_, dim_) = y.values().row(i).transpose();
    return x;
}

void VariationalProblem::require_compatible(const GridFunction& y) const
{
    if (y.dim() != dim_)
        throw DimensionError("grid function has dimension " + std::to_string(y.dim()) + ", problem has "
                             + std::to_string(dim_));
    if (y.grid_ptr() != grid_ && !grid_->matches(y.grid().points()))
        throw DimensionError("grid function does not live on the problem grid");
}

VariationalProblem VariationalProblem::with_functionals(std::vector<Expr> objectives,
                                                        std::vector<Constraint> constraints) const
{
    VariationalProblem copy = *this;
    if (objectives.empty())
        throw DimensionError("at least one objective is required");
    copy.objectives_ = std::move(objectives);
    copy.constraints_ = std::move(constraints);
    copy.objective_fns_.clear();
    copy.constraint_fns_.clear();
    for (const Expr& e : copy.objectives_)
        copy.objective_fns_.emplace_back(e, dim_);
    for (const Constraint& c : copy.constraints_)
        copy.constraint_fns_.emplace_back(c.integrand, dim_);
    return copy;
}

FunctionalValue evaluate(const VariationalProblem& p, const GridFunction& y)
{
    p.require_compatible(y);
    FunctionalValue out;
    for (std::size_t i = 0; i < p.objective_count(); ++i)
        out.objectives.push_back(p.objective_functional(i).value(p.grid(), y.values()));
    for (std::size_t i = 0; i < p.constraint_count(); ++i) {
        const double g = p.constraint_functional(i).value(p.grid(), y.values());
        out.constraints.push_back(g);
        out.violations.push_back(g - p.constraints()[i].target);
    }
    return out;
}

double gateaux(const VariationalProblem& p, FunctionalId which, const GridFunction& y, const GridFunction& eta)
{
    p.require_compatible(y);
    p.require_compatible(eta);
    const bool objective = which.kind == FunctionalId::Kind::Objective;
    const std::size_t count = objective ? p.objective_count() : p.constraint_count();
    if (which.index >= count)
        throw DomainError("functional index " + std::to_string(which.index) + " out of range");
    const DiscreteFunctional& f = objective ? p.objective_functional(which.index)
                                            : p.constraint_functional(which.index);
    return f.gateaux(p.grid(), y.values(), eta.values());
}

} // namespace tsvar
