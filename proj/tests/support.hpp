#pragma once

// Independent oracles and hand-rolled generators shared by the tests. Nothing here calls into
// the library's calculus: sums, differences and derivatives are recomputed from raw points.

#include "tsvar/delta_calculus.hpp"
#include "tsvar/timescale.hpp"

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace tsvar::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : engine_(seed)
    {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin() { return integer(0, 1) == 1; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline GridPtr make_grid(std::vector<double> points)
{
    return std::make_shared<const GridTimeScale>(std::move(points));
}

/// Strictly increasing points with gaps in [min_gap, max_gap].
inline std::vector<double> random_points(Rng& rng, int count, double min_gap = 0.05, double max_gap = 1.0)
{
    std::vector<double> pts{rng.uniform(-2.0, 2.0)};
    for (int i = 1; i < count; ++i)
        pts.push_back(pts.back() + rng.uniform(min_gap, max_gap));
    return pts;
}

inline GridFunction random_function(Rng& rng, const GridPtr& grid, int dim, double scale = 2.0)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(grid->size()), dim);
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index k = 0; k < v.cols(); ++k)
            v(i, k) = rng.uniform(-scale, scale);
    return GridFunction(grid, v);
}

/// Endpoint-vanishing random variation.
inline GridFunction random_variation(Rng& rng, const GridPtr& grid, int dim)
{
    GridFunction f = random_function(rng, grid, dim);
    Eigen::MatrixXd v = f.values();
    v.row(0).setZero();
    v.row(v.rows() - 1).setZero();
    return GridFunction(grid, v);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-6)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Sum_{i<N} (t_{i+1} - t_i) * L(t_i, y_{i+1}, (y_{i+1} - y_i) / (t_{i+1} - t_i)) for scalar y.
inline double direct_sum(const std::vector<double>& t, const std::vector<double>& y,
                         const std::function<double(double, double, double)>& L)
{
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        sum += h * L(t[i], y[i + 1], (y[i + 1] - y[i]) / h);
    }
    return sum;
}

inline std::vector<double> uniform_points(double a, double b, int steps)
{
    std::vector<double> pts;
    for (int i = 0; i <= steps; ++i)
        pts.push_back(a + (b - a) * i / steps);
    return pts;
}

/// Random expression text over t, y1..yn, v1..vn that stays finite for arguments in [-2, 2].
class ExprGenerator {
public:
    ExprGenerator(Rng& rng, int dim)
        : rng_(rng)
        , dim_(dim)
    {}

    std::string operator()(int depth = 3) { return node(depth); }

private:
    std::string leaf()
    {
        switch (rng_.integer(0, 3)) {
        case 0:
            return "t";
        case 1:
            return "y" + std::to_string(rng_.integer(1, dim_));
        case 2:
            return "v" + std::to_string(rng_.integer(1, dim_));
        default: {
            const double c = std::round(rng_.uniform(-3.0, 3.0) * 100.0) / 100.0;
            return c < 0 ? "(" + std::to_string(c) + ")" : std::to_string(c);
        }
        }
    }

    std::string node(int depth)
    {
        if (depth == 0 || rng_.integer(0, 4) == 0)
            return leaf();
        const std::string a = node(depth - 1);
        switch (rng_.integer(0, 10)) {
        case 0:
            return "(" + a + " + " + node(depth - 1) + ")";
        case 1:
            return "(" + a + " - " + node(depth - 1) + ")";
        case 2:
            return a + " * " + node(depth - 1);
        case 3:
            return "(" + a + ") / (2 + sin(" + node(depth - 1) + "))";
        case 4:
            return "(" + a + ")^2";
        case 5:
            return "-(" + a + ")";
        case 6:
            return "sin(" + a + ")";
        case 7:
            return "cos(" + a + ")";
        case 8:
            return "exp(sin(" + a + "))";
        case 9:
            return "log(2 + cos(" + a + "))";
        default:
            return "sqrt(1 + (" + a + ")^2)";
        }
    }

    Rng& rng_;
    int dim_;
};

} // namespace tsvar::testing
