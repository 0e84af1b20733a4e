#include "tsvar/solver.hpp"

#include "tsvar/errors.hpp"
#include "text_util.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace tsvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interior rows (1..N-1) of a full-sample matrix, flattened point-major.
Eigen::VectorXd flatten_interior(const Eigen::MatrixXd& full)
{
    const Eigen::Index n = full.cols();
    const Eigen::Index interior = full.rows() - 2;
    Eigen::VectorXd x(interior * n);
    for (Eigen::Index i = 0; i < interior; ++i)
        x.segment(i * n, n) = full.row(i + 1).transpose();
    return x;
}

/// phi(x) = J(y) - Sum lambda_i c_i + rho/2 Sum c_i^2 with c_i = G_i(y) - xi_i.
class AugmentedLagrangian {
public:
    AugmentedLagrangian(const VariationalProblem& p, const DiscreteFunctional& objective)
        : p_(p)
        , objective_(objective)
        , targets_(static_cast<Eigen::Index>(p.constraint_count()))
        , lambda_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.constraint_count())))
    {
        for (std::size_t i = 0; i < p.constraint_count(); ++i)
            targets_(static_cast<Eigen::Index>(i)) = p.constraints()[i].target;
    }

    std::size_t m() const { return p_.constraint_count(); }
    Eigen::VectorXd& lambda() { return lambda_; }
    double& penalty() { return rho_; }

    Eigen::MatrixXd samples(const Eigen::VectorXd& x) const { return p_.assemble(x).values(); }

    Eigen::VectorXd violations(const Eigen::MatrixXd& y) const
    {
        Eigen::VectorXd c(static_cast<Eigen::Index>(m()));
        for (std::size_t i = 0; i < m(); ++i)
            c(static_cast<Eigen::Index>(i)) = p_.constraint_functional(i).value(p_.grid(), y) - targets_(static_cast<Eigen::Index>(i));
        return c;
    }

    /// +inf when the integrand cannot be evaluated at x.
    double value(const Eigen::VectorXd& x) const
    {
        try {
            const Eigen::MatrixXd y = samples(x);
            const Eigen::VectorXd c = violations(y);
            const double v = objective_.value(p_.grid(), y) - lambda_.dot(c) + 0.5 * rho_ * c.squaredNorm();
            return std::isfinite(v) ? v : kInf;
        } catch (const EvalError&) {
            return kInf;
        }
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const
    {
        const Eigen::MatrixXd y = samples(x);
        const Eigen::VectorXd c = violations(y);
        Eigen::MatrixXd g = objective_.gradient(p_.grid(), y);
        for (std::size_t i = 0; i < m(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            g -= (lambda_(ii) - rho_ * c(ii)) * p_.constraint_functional(i).gradient(p_.grid(), y);
        }
        return flatten_interior(g);
    }

    /// Solves (B + U U^T) d = -g where B is the banded part (shifted until positive definite)
    /// and U holds sqrt(rho) * grad G_i. Returns false if no factorization succeeded.
    bool newton_direction(const Eigen::VectorXd& x, const Eigen::VectorXd& g, Eigen::VectorXd& d) const
    {
        const Eigen::MatrixXd y = samples(x);
        const Eigen::VectorXd c = violations(y);
        const auto n = static_cast<Eigen::Index>(p_.dim());
        const Eigen::Index size = x.size();
        const Eigen::Index interior = size / n;

        DiscreteFunctional::Hessian h = objective_.hessian(p_.grid(), y);
        Eigen::MatrixXd u(size, static_cast<Eigen::Index>(m()));
        for (std::size_t i = 0; i < m(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const DiscreteFunctional& gi = p_.constraint_functional(i);
            const double w = rho_ * c(ii) - lambda_(ii);
            if (w != 0.0) {
                const DiscreteFunctional::Hessian hg = gi.hessian(p_.grid(), y);
                for (std::size_t k = 0; k < h.diag.size(); ++k)
                    h.diag[k] += w * hg.diag[k];
                for (std::size_t k = 0; k < h.off.size(); ++k)
                    h.off[k] += w * hg.off[k];
            }
            u.col(ii) = std::sqrt(rho_) * flatten_interior(gi.gradient(p_.grid(), y));
        }

        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(interior * n * n * 3));
        double scale = 0.0;
        for (Eigen::Index j = 0; j < interior; ++j) {
            const Eigen::MatrixXd& dj = h.diag[static_cast<std::size_t>(j + 1)];
            for (Eigen::Index k = 0; k < n; ++k) {
                scale = std::max(scale, std::abs(dj(k, k)));
                for (Eigen::Index l = 0; l < n; ++l)
                    triplets.emplace_back(j * n + k, j * n + l, dj(k, l));
            }
            if (j + 1 < interior) {
                const Eigen::MatrixXd& oj = h.off[static_cast<std::size_t>(j + 1)];
                for (Eigen::Index k = 0; k < n; ++k) {
                    for (Eigen::Index l = 0; l < n; ++l) {
                        triplets.emplace_back(j * n + k, (j + 1) * n + l, oj(k, l));
                        triplets.emplace_back((j + 1) * n + l, j * n + k, oj(k, l));
                    }
                }
            }
        }
        Eigen::SparseMatrix<double> banded(size, size);
        banded.setFromTriplets(triplets.begin(), triplets.end());

        Eigen::SparseMatrix<double> identity(size, size);
        identity.setIdentity();
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
        double shift = 0.0;
        const double base_shift = 1e-10 * std::max(1.0, scale);
        for (int attempt = 0; attempt < 40; ++attempt) {
            llt.compute(shift == 0.0 ? banded : Eigen::SparseMatrix<double>(banded + shift * identity));
            if (llt.info() == Eigen::Success)
                break;
            shift = shift == 0.0 ? base_shift : shift * 10.0;
        }
        if (llt.info() != Eigen::Success)
            return false;

        Eigen::VectorXd binv_g = llt.solve(g);
        if (m() > 0) {
            // Woodbury: (B + U U^T)^-1 g = B^-1 g - B^-1 U (I + U^T B^-1 U)^-1 U^T B^-1 g
            const Eigen::MatrixXd binv_u = llt.solve(u);
            Eigen::MatrixXd small = Eigen::MatrixXd::Identity(u.cols(), u.cols()) + u.transpose() * binv_u;
            const Eigen::VectorXd corr = small.ldlt().solve(u.transpose() * binv_g);
            binv_g -= binv_u * corr;
        }
        d = -binv_g;
        return d.allFinite();
    }

private:
    const VariationalProblem& p_;
    const DiscreteFunctional& objective_;
    Eigen::VectorXd targets_;
    Eigen::VectorXd lambda_;
    double rho_ = 1.0;
};

struct InnerOutcome {
    SolveStatus status;
    int iterations;
    double grad_norm;
};

InnerOutcome minimize_inner(const AugmentedLagrangian& al, Eigen::VectorXd& x, const SolverOptions& opt)
{
    double phi = al.value(x);
    if (!std::isfinite(phi))
        throw EvalError("objective cannot be evaluated at the starting point", 0.0);
    Eigen::VectorXd g = al.gradient(x);
    double gnorm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
    double gd_step = 1.0;

    for (int it = 0; it < opt.max_inner; ++it) {
        if (gnorm <= opt.grad_tol)
            return {SolveStatus::Converged, it, gnorm};

        Eigen::VectorXd d;
        bool newton = opt.method == InnerMethod::Newton && al.newton_direction(x, g, d);
        if (newton && !(g.dot(d) < 0.0))
            newton = false;
        if (!newton)
            d = -g;
        const double slope = g.dot(d);

        double step = newton ? 1.0 : std::min(1e8, 2.0 * gd_step);
        bool accepted = false;
        Eigen::VectorXd x_new;
        double phi_new = kInf;
        for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
            x_new = x + step * d;
            phi_new = al.value(x_new);
            if (phi_new <= phi + opt.armijo_c * step * slope) {
                accepted = true;
                break;
            }
            // At rounding level the decrease is invisible; accept a full step that still
            // reduces the gradient.
            if (bt == 0 && std::isfinite(phi_new) && std::abs(phi_new - phi) <= 1e-13 * (1.0 + std::abs(phi))) {
                const Eigen::VectorXd g_try = al.gradient(x_new);
                if (g_try.cwiseAbs().maxCoeff() < gnorm) {
                    accepted = true;
                    break;
                }
            }
            step *= opt.shrink;
        }
        if (!accepted) {
            if (newton) {
                // fall back to one steepest-descent attempt before giving up
                d = -g;
                step = 1.0;
                for (int bt = 0; bt <= opt.max_backtracks && !accepted; ++bt, step *= opt.shrink) {
                    x_new = x + step * d;
                    phi_new = al.value(x_new);
                    accepted = phi_new <= phi - opt.armijo_c * step * g.squaredNorm();
                }
            }
            if (!accepted)
                return {SolveStatus::LineSearchFailure, it, gnorm};
        }
        if (!newton)
            gd_step = step;
        x = std::move(x_new);
        phi = phi_new;
        g = al.gradient(x);
        gnorm = g.cwiseAbs().maxCoeff();
    }
    return {gnorm <= opt.grad_tol ? SolveStatus::Converged : SolveStatus::MaxIterations, opt.max_inner, gnorm};
}

SolveResult solve_from(const VariationalProblem& p, const ScalarObjective& obj, const DiscreteFunctional& objective,
                       Eigen::VectorXd x, const SolverOptions& opt)
{
    AugmentedLagrangian al(p, objective);
    al.penalty() = opt.initial_penalty;

    SolveResult r{p.assemble(x), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.constraint_count())), 0.0, {}};
    double previous_violation = kInf;
    const int outer_limit = al.m() == 0 ? 1 : opt.max_outer;

    for (int outer = 0; outer < outer_limit; ++outer) {
        const InnerOutcome inner = minimize_inner(al, x, opt);
        r.iterations += inner.iterations;
        r.outer_iterations = outer + 1;
        r.grad_norm = inner.grad_norm;

        const Eigen::MatrixXd y = al.samples(x);
        const Eigen::VectorXd c = al.violations(y);
        const double violation = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
        // lambda <- lambda - rho (G - xi); the inner gradient is then the Lagrangian gradient
        al.lambda() -= al.penalty() * c;
        r.max_violation = violation;
        r.penalty = al.penalty();

        if (inner.status == SolveStatus::LineSearchFailure) {
            r.status = SolveStatus::LineSearchFailure;
            break;
        }
        if (inner.status == SolveStatus::Converged && violation <= opt.constraint_tol) {
            r.status = SolveStatus::Converged;
            break;
        }
        if (inner.status == SolveStatus::MaxIterations && al.m() == 0) {
            r.status = SolveStatus::MaxIterations;
            break;
        }
        if (violation > previous_violation / opt.violation_reduction)
            al.penalty() *= opt.penalty_growth;
        previous_violation = violation;
        r.status = SolveStatus::MaxIterations;
    }

    r.y = p.assemble(x);
    r.multipliers = al.lambda();
    r.values = evaluate(p, r.y);
    r.objective = objective.value(p.grid(), r.y.values());
    (void)obj;
    return r;
}

bool better(const SolveResult& a, const SolveResult& b)
{
    if (a.converged() != b.converged())
        return a.converged();
    return a.objective < b.objective;
}

} // namespace

// ---------------------------------------------------------------------------

ScalarObjective ScalarObjective::weighted(std::vector<double> weights)
{
    if (weights.empty())
        throw DimensionError("at least one weight is required");
    for (double w : weights)
        if (!std::isfinite(w))
            throw DomainError("weights must be finite");
    ScalarObjective s;
    s.weights_ = std::move(weights);
    return s;
}

ScalarObjective ScalarObjective::single(std::size_t index, std::size_t count)
{
    if (index >= count)
        throw DomainError("objective index " + std::to_string(index + 1) + " out of range 1.."
                          + std::to_string(count));
    ScalarObjective s;
    s.weights_.assign(count, 0.0);
    s.weights_[index] = 1.0;
    s.index_ = index;
    return s;
}

bool ScalarObjective::is_positive_simplex(double tol) const noexcept
{
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0))
            return false;
        sum += w;
    }
    return std::abs(sum - 1.0) <= tol;
}

Expr ScalarObjective::lagrangian(const VariationalProblem& p) const
{
    if (weights_.size() != p.objective_count())
        throw DimensionError("scalarization has " + std::to_string(weights_.size()) + " weights for "
                             + std::to_string(p.objective_count()) + " objectives");
    return weighted_sum(weights_, p.objectives());
}

std::string ScalarObjective::describe() const
{
    if (index_)
        return "objective " + std::to_string(*index_ + 1);
    std::ostringstream os;
    os << "weights (";
    for (std::size_t i = 0; i < weights_.size(); ++i)
        os << (i ? "," : "") << detail::format_double(weights_[i]);
    os << ')';
    return os.str();
}

namespace {

AugmentedLagrangian configured(const VariationalProblem& p, const DiscreteFunctional& objective,
                               const Eigen::VectorXd& multipliers, double penalty)
{
    if (static_cast<std::size_t>(multipliers.size()) != p.constraint_count())
        throw DimensionError("expected " + std::to_string(p.constraint_count()) + " multipliers");
    AugmentedLagrangian al(p, objective);
    al.lambda() = multipliers;
    al.penalty() = penalty;
    return al;
}

} // namespace

double augmented_lagrangian(const VariationalProblem& p, const ScalarObjective& obj, const GridFunction& y,
                            const Eigen::VectorXd& multipliers, double penalty)
{
    p.require_compatible(y);
    const DiscreteFunctional objective(obj.lagrangian(p), p.dim());
    const AugmentedLagrangian al = configured(p, objective, multipliers, penalty);
    const Eigen::MatrixXd& v = y.values();
    const Eigen::VectorXd c = al.violations(v);
    return objective.value(p.grid(), v) - multipliers.dot(c) + 0.5 * penalty * c.squaredNorm();
}

Eigen::VectorXd augmented_lagrangian_gradient(const VariationalProblem& p, const ScalarObjective& obj,
                                              const GridFunction& y, const Eigen::VectorXd& multipliers,
                                              double penalty)
{
    p.require_compatible(y);
    const DiscreteFunctional objective(obj.lagrangian(p), p.dim());
    return configured(p, objective, multipliers, penalty).gradient(p.interior(y));
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged:
        return "Converged";
    case SolveStatus::MaxIterations:
        return "MaxIterations";
    case SolveStatus::LineSearchFailure:
        return "LineSearchFailure";
    }
    return "?";
}

SolveResult solve_scalar(const VariationalProblem& p, const ScalarObjective& obj, const std::optional<GridFunction>& init,
                         const SolverOptions& options)
{
    if (p.grid().size() < 3)
        throw DegenerateScaleError("solving needs at least one interior grid point");
    if (options.multistart < 1)
        throw DomainError("multistart must be at least 1");

    const DiscreteFunctional objective(obj.lagrangian(p), p.dim());
    GridFunction start = init ? *init : p.linear_guess();
    p.require_compatible(start);
    const Eigen::VectorXd x0 = p.interior(start);

    SolveResult best = solve_from(p, obj, objective, x0, options);
    best.seed = options.seed;
    best.start_index = 0;

    if (options.multistart > 1) {
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double amplitude
            = options.multistart_scale * (1.0 + (x0.size() ? x0.cwiseAbs().maxCoeff() : 0.0));
        for (int s = 1; s < options.multistart; ++s) {
            Eigen::VectorXd x = x0;
            for (Eigen::Index k = 0; k < x.size(); ++k)
                x(k) += amplitude * normal(rng);
            std::optional<SolveResult> r;
            try {
                r = solve_from(p, obj, objective, x, options);
            } catch (const EvalError&) {
                continue;
            }
            r->seed = options.seed;
            r->start_index = s;
            if (better(*r, best))
                best = std::move(*r);
        }
    }
    return best;
}

ELReport el_residual(const VariationalProblem& p, const ScalarObjective& obj, const GridFunction& y,
                     const Eigen::VectorXd& multipliers)
{
    p.require_compatible(y);
    if (static_cast<std::size_t>(multipliers.size()) != p.constraint_count())
        throw DimensionError("expected " + std::to_string(p.constraint_count()) + " multipliers");

    Expr f = obj.lagrangian(p);
    for (std::size_t i = 0; i < p.constraint_count(); ++i)
        f = f - Expr::constant(multipliers(static_cast<Eigen::Index>(i))) * p.constraints()[i].integrand;
    const DiscreteFunctional lagrangian(f, p.dim());

    Eigen::MatrixXd f_s;
    Eigen::MatrixXd f_v;
    lagrangian.pointwise_partials(p.grid(), y.values(), f_s, f_v);

    const GridTimeScale& grid = p.grid();
    const Eigen::Index kpoints = f_s.rows(); // N
    ELReport report;
    report.residual.resize(kpoints - 1, p.dim());
    for (Eigen::Index i = 0; i + 1 < kpoints; ++i) {
        const double mu = grid.graininess(static_cast<std::size_t>(i));
        report.t.push_back(grid.point(static_cast<std::size_t>(i)));
        report.residual.row(i) = (f_v.row(i + 1) - f_v.row(i)) / mu - f_s.row(i);
    }
    report.max_residual = report.residual.size() ? report.residual.cwiseAbs().maxCoeff() : 0.0;

    // D(t_i) = F_v(t_i) - int_a^{t_i} F_s, constant iff the Dubois-Reymond form holds
    Eigen::MatrixXd d(kpoints, p.dim());
    Eigen::RowVectorXd integral = Eigen::RowVectorXd::Zero(p.dim());
    for (Eigen::Index i = 0; i < kpoints; ++i) {
        d.row(i) = f_v.row(i) - integral;
        integral += grid.graininess(static_cast<std::size_t>(i)) * f_s.row(i);
    }
    report.dubois_reymond_constant = d.colwise().mean().transpose();
    report.dubois_reymond_spread
        = (d.rowwise() - report.dubois_reymond_constant.transpose()).cwiseAbs().maxCoeff();
    return report;
}

ELReport el_residual(const VariationalProblem& p, const ScalarObjective& obj, const SolveResult& result)
{
    return el_residual(p, obj, result.y, result.multipliers);
}

double regularity_probe(const VariationalProblem& p, const GridFunction& y, const std::vector<GridFunction>& directions)
{
    const std::size_t m = p.constraint_count();
    if (m == 0)
        throw DomainError("the regularity probe needs at least one constraint");
    if (directions.size() < m)
        throw DomainError("the regularity probe needs " + std::to_string(m) + " directions, got "
                          + std::to_string(directions.size()));
    p.require_compatible(y);
    Eigen::MatrixXd mat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
        const GridFunction& v = directions[j];
        p.require_compatible(v);
        const Eigen::Index last = static_cast<Eigen::Index>(v.size()) - 1;
        if (v.values().row(0).cwiseAbs().maxCoeff() > 1e-12 || v.values().row(last).cwiseAbs().maxCoeff() > 1e-12)
            throw DomainError("probe directions must vanish at both endpoints");
        for (std::size_t i = 0; i < m; ++i)
            mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                = p.constraint_functional(i).gateaux(p.grid(), y.values(), v.values());
    }
    return mat.fullPivLu().determinant();
}

std::vector<GridFunction> random_directions(const VariationalProblem& p, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<GridFunction> out;
    for (std::size_t j = 0; j < count; ++j) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(p.unknown_count()));
        for (Eigen::Index k = 0; k < x.size(); ++k)
            x(k) = normal(rng);
        GridFunction v = p.assemble(x);
        Eigen::MatrixXd vals = v.values();
        vals.row(0).setZero();
        vals.row(vals.rows() - 1).setZero();
        out.emplace_back(p.grid_ptr(), std::move(vals));
    }
    return out;
}

double regularity_probe(const VariationalProblem& p, const GridFunction& y, std::uint64_t seed)
{
    return regularity_probe(p, y, random_directions(p, p.constraint_count(), seed));
}

std::optional<Eigen::VectorXd> recover_multipliers(const VariationalProblem& p, const ScalarObjective& obj,
                                                   const GridFunction& y)
{
    p.require_compatible(y);
    const std::size_t m = p.constraint_count();
    if (m == 0)
        return Eigen::VectorXd();
    const DiscreteFunctional objective(obj.lagrangian(p), p.dim());
    const Eigen::VectorXd b = flatten_interior(objective.gradient(p.grid(), y.values()));
    Eigen::MatrixXd a(b.size(), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        a.col(static_cast<Eigen::Index>(i)) = flatten_interior(p.constraint_functional(i).gradient(p.grid(), y.values()));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(m))
        return std::nullopt;
    return Eigen::VectorXd(qr.solve(b));
}

std::optional<BruteForceResult> brute_force_oracle(const VariationalProblem& p, const ScalarObjective& obj,
                                                   const BruteForceLattice& lattice)
{
    if (!p.scale().is_discrete())
        throw DomainError("the brute-force oracle needs a purely discrete time scale");
    if (p.interior_points() < 1 || p.interior_points() > 3 || p.unknown_count() > 4)
        throw SearchSpaceError("the brute-force oracle handles 1-3 interior points and at most 4 unknowns");
    if (!(lattice.step > 0.0) || !(lattice.hi >= lattice.lo))
        throw DomainError("lattice needs step > 0 and hi >= lo");

    const auto per_axis = static_cast<std::uint64_t>(std::floor((lattice.hi - lattice.lo) / lattice.step + 1e-9)) + 1;
    const std::size_t unknowns = p.unknown_count();
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < unknowns; ++k) {
        if (total > lattice.max_points / per_axis)
            throw SearchSpaceError("lattice of " + std::to_string(per_axis) + "^" + std::to_string(unknowns)
                                   + " points exceeds the cap of " + std::to_string(lattice.max_points));
        total *= per_axis;
    }

    const double tol = lattice.constraint_tol < 0.0 ? lattice.step : lattice.constraint_tol;
    const DiscreteFunctional objective(obj.lagrangian(p), p.dim());
    const auto n = static_cast<Eigen::Index>(p.dim());

    Eigen::MatrixXd y = p.linear_guess().values();
    std::vector<std::uint64_t> digit(unknowns, 0);
    const auto set_unknown = [&](std::size_t k) {
        const auto point = static_cast<Eigen::Index>(k) / n + 1;
        const auto comp = static_cast<Eigen::Index>(k) % n;
        y(point, comp) = lattice.lo + static_cast<double>(digit[k]) * lattice.step;
    };
    for (std::size_t k = 0; k < unknowns; ++k)
        set_unknown(k);

    std::optional<BruteForceResult> best;
    Eigen::MatrixXd best_y;
    std::uint64_t feasible = 0;
    for (std::uint64_t count = 0; count < total; ++count) {
        bool ok = true;
        for (std::size_t i = 0; i < p.constraint_count() && ok; ++i) {
            try {
                const double c = p.constraint_functional(i).value(p.grid(), y) - p.constraints()[i].target;
                ok = std::abs(c) <= tol;
            } catch (const EvalError&) {
                ok = false;
            }
        }
        if (ok) {
            try {
                const double v = objective.value(p.grid(), y);
                ++feasible;
                if (!best || v < best->objective) {
                    best_y = y;
                    best = BruteForceResult{GridFunction(p.grid_ptr(), y), v, 0, 0};
                }
            } catch (const EvalError&) {
            }
        }
        // odometer, last unknown fastest
        for (std::size_t k = unknowns; k-- > 0;) {
            if (++digit[k] < per_axis) {
                set_unknown(k);
                break;
            }
            digit[k] = 0;
            set_unknown(k);
        }
    }
    if (best) {
        best->evaluated = total;
        best->feasible = feasible;
    }
    return best;
}

} // namespace tsvar
