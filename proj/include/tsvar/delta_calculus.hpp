#pragma once

#include "tsvar/timescale.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace tsvar {

using GridPtr = std::shared_ptr<const GridTimeScale>;

enum class VectorNorm { Max, Euclidean };

/// Vector-valued function sampled on a grid: row i holds y(t_i) in R^n.
class GridFunction {
public:
    GridFunction(GridPtr grid, Eigen::MatrixXd values);

    /// Samples f(t) at every grid point.
    static GridFunction from(GridPtr grid, int dim, const std::function<Eigen::VectorXd(double)>& f);
    static GridFunction scalar(GridPtr grid, const std::function<double(double)>& f);
    static GridFunction zero(GridPtr grid, int dim);

    const GridTimeScale& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    int dim() const noexcept { return static_cast<int>(values_.cols()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    Eigen::VectorXd at(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)).transpose(); }
    double operator()(std::size_t i, int k = 0) const { return values_(static_cast<Eigen::Index>(i), k); }

    GridFunction operator+(const GridFunction& other) const;
    GridFunction operator-(const GridFunction& other) const;
    GridFunction operator*(double c) const;
    /// Componentwise product f_k(t) g_k(t).
    GridFunction cwise_product(const GridFunction& other) const;

private:
    void require_compatible(const GridFunction& other) const;

    GridPtr grid_;
    Eigen::MatrixXd values_;
};

inline GridFunction operator*(double c, const GridFunction& f) { return f * c; }

/// f^Delta(t_i) = (f(t_{i+1}) - f(t_i)) / mu(t_i), living on the k-truncated grid.
GridFunction delta_derivative(const GridFunction& f);

/// f^sigma(t_i) = f(t_{i+1}), living on the k-truncated grid.
GridFunction sigma_shift(const GridFunction& f);

/// Sum_{i=c}^{d-1} mu(t_i) f(t_i), per component, accumulated in ascending index order.
/// Requires c <= d <= number of grid points.
Eigen::VectorXd delta_integral(const GridFunction& f, std::size_t c_index, std::size_t d_index);
Eigen::VectorXd delta_integral(const GridFunction& f);

/// Running integral F(t_i) = int_a^{t_i} f, on the same grid as f (F(t_0) = 0).
GridFunction running_integral(const GridFunction& f);

/// max ||f^sigma|| + max ||f^Delta|| over [a,b]^k.
double c1rd_norm(const GridFunction& f, VectorNorm norm = VectorNorm::Max);

double vector_norm(const Eigen::Ref<const Eigen::VectorXd>& v, VectorNorm norm);

} // namespace tsvar
