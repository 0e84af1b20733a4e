#include "tsvar/delta_calculus.hpp"

#include "tsvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsvar {

namespace {

void require_two_points(const GridFunction& f, const char* op)
{
    if (f.size() < 2)
        throw DegenerateScaleError(std::string(op) + " needs a grid with at least two points");
}

GridPtr truncated(const GridFunction& f)
{
    return std::make_shared<const GridTimeScale>(f.grid().truncate_k());
}

} // namespace

GridFunction::GridFunction(GridPtr grid, Eigen::MatrixXd values)
    : grid_(std::move(grid))
    , values_(std::move(values))
{
    if (!grid_)
        throw DomainError("grid function needs a grid");
    if (static_cast<std::size_t>(values_.rows()) != grid_->size())
        throw DimensionError("grid function has " + std::to_string(values_.rows()) + " samples for a grid of "
                             + std::to_string(grid_->size()) + " points");
    if (values_.cols() < 1)
        throw DimensionError("grid function dimension must be at least 1");
    if (!values_.allFinite())
        throw DomainError("grid function samples must be finite");
}

GridFunction GridFunction::from(GridPtr grid, int dim, const std::function<Eigen::VectorXd(double)>& f)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(grid->size()), dim);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const Eigen::VectorXd row = f(grid->point(i));
        if (row.size() != dim)
            throw DimensionError("sampled function returned the wrong dimension");
        v.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::scalar(GridPtr grid, const std::function<double(double)>& f)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(grid->size()), 1);
    for (std::size_t i = 0; i < grid->size(); ++i)
        v(static_cast<Eigen::Index>(i), 0) = f(grid->point(i));
    return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::zero(GridPtr grid, int dim)
{
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid->size()), dim);
    return GridFunction(std::move(grid), std::move(v));
}

void GridFunction::require_compatible(const GridFunction& other) const
{
    if (other.values_.rows() != values_.rows() || other.values_.cols() != values_.cols())
        throw DimensionError("grid functions have different shapes");
    if (other.grid_ != grid_ && !grid_->matches(other.grid_->points(), 0.0))
        throw DimensionError("grid functions live on different grids");
}

GridFunction GridFunction::operator+(const GridFunction& other) const
{
    require_compatible(other);
    return GridFunction(grid_, values_ + other.values_);
}

GridFunction GridFunction::operator-(const GridFunction& other) const
{
    require_compatible(other);
    return GridFunction(grid_, values_ - other.values_);
}

GridFunction GridFunction::operator*(double c) const
{
    return GridFunction(grid_, values_ * c);
}

GridFunction GridFunction::cwise_product(const GridFunction& other) const
{
    require_compatible(other);
    return GridFunction(grid_, values_.cwiseProduct(other.values_));
}

GridFunction delta_derivative(const GridFunction& f)
{
    require_two_points(f, "delta_derivative");
    const auto& g = f.grid();
    const auto rows = static_cast<Eigen::Index>(f.size() - 1);
    Eigen::MatrixXd d(rows, f.dim());
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double mu = g.point(static_cast<std::size_t>(i) + 1) - g.point(static_cast<std::size_t>(i));
        d.row(i) = (f.values().row(i + 1) - f.values().row(i)) / mu;
    }
    return GridFunction(truncated(f), std::move(d));
}

GridFunction sigma_shift(const GridFunction& f)
{
    require_two_points(f, "sigma_shift");
    const auto rows = static_cast<Eigen::Index>(f.size() - 1);
    return GridFunction(truncated(f), f.values().bottomRows(rows));
}

Eigen::VectorXd delta_integral(const GridFunction& f, std::size_t c_index, std::size_t d_index)
{
    if (c_index > d_index || d_index > f.size())
        throw DomainError("delta_integral bounds [" + std::to_string(c_index) + ", " + std::to_string(d_index)
                          + ") outside a grid of " + std::to_string(f.size()) + " points");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(f.dim());
    for (std::size_t i = c_index; i < d_index; ++i)
        sum += f.grid().graininess(i) * f.values().row(static_cast<Eigen::Index>(i)).transpose();
    return sum;
}

Eigen::VectorXd delta_integral(const GridFunction& f)
{
    return delta_integral(f, 0, f.size());
}

GridFunction running_integral(const GridFunction& f)
{
    Eigen::MatrixXd acc(f.values().rows(), f.dim());
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(f.dim());
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
        acc.row(i) = sum;
        sum += f.grid().graininess(static_cast<std::size_t>(i)) * f.values().row(i);
    }
    return GridFunction(f.grid_ptr(), std::move(acc));
}

double vector_norm(const Eigen::Ref<const Eigen::VectorXd>& v, VectorNorm norm)
{
    if (v.size() == 0)
        return 0.0;
    return norm == VectorNorm::Max ? v.cwiseAbs().maxCoeff() : v.norm();
}

double c1rd_norm(const GridFunction& f, VectorNorm norm)
{
    require_two_points(f, "c1rd_norm");
    const GridFunction shifted = sigma_shift(f);
    const GridFunction slope = delta_derivative(f);
    double max_shift = 0.0;
    double max_slope = 0.0;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        max_shift = std::max(max_shift, vector_norm(shifted.at(i), norm));
        max_slope = std::max(max_slope, vector_norm(slope.at(i), norm));
    }
    return max_shift + max_slope;
}

} // namespace tsvar
