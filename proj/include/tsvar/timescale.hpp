#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsvar {

inline constexpr double kDefaultPointTolerance = 1e-12;

/// Closed interval [lo, hi]; lo == hi encodes an isolated point.
struct Segment {
    double lo;
    double hi;

    bool is_point() const noexcept { return lo == hi; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

enum class RightClass { Dense, Scattered };
enum class LeftClass { Dense, Scattered };

struct PointClass {
    RightClass right;
    LeftClass left;

    friend bool operator==(const PointClass&, const PointClass&) = default;
};

std::string to_string(PointClass c);

class GridTimeScale;

/// Bounded time scale stored exactly as a finite union of closed intervals and isolated points.
///
/// Queries accept t within `tolerance` of a stored point so that values read back from text
/// files still resolve to the right segment.
class TimeScale {
public:
    explicit TimeScale(std::vector<Segment> segments, double tolerance = kDefaultPointTolerance);

    /// Parse the literal syntax `item;item;...` where an item is `p` or `[l,r]`.
    static TimeScale parse(std::string_view literal, double tolerance = kDefaultPointTolerance);

    double min() const noexcept { return segments_.front().lo; }
    double max() const noexcept { return segments_.back().hi; }
    double tolerance() const noexcept { return tolerance_; }
    std::span<const Segment> segments() const noexcept { return segments_; }

    /// Only a single point remains (possible after repeated truncation).
    bool is_degenerate() const noexcept { return min() == max(); }
    bool is_discrete() const noexcept;

    bool contains(double t) const noexcept;

    double sigma(double t) const;
    double rho(double t) const;
    double graininess(double t) const;
    PointClass classify(double t) const;

    /// T^k: removes the half-open tail (rho(b), b].
    TimeScale truncate_k() const;

    GridTimeScale sample(double resolution) const;

    std::string to_string() const;

    friend bool operator==(const TimeScale& a, const TimeScale& b) { return a.segments_ == b.segments_; }

private:
    // index of the segment holding t, or npos
    std::size_t locate(double t) const noexcept;
    std::size_t require(double t) const;

    std::vector<Segment> segments_;
    double tolerance_;
};

/// Finite, strictly increasing sample of a time scale.
///
/// graininess(i) is the gap to the next sample. A grid built from points has graininess 0 at
/// its last point (sigma(b) = b). A k-truncated grid keeps the graininess its points had in the
/// parent grid, so Delta-integrals of functions living on [a,b]^k still use the parent measure.
class GridTimeScale {
public:
    /// dense_flags may be empty (all false).
    explicit GridTimeScale(std::vector<double> points, std::vector<bool> dense_flags = {});

    std::size_t size() const noexcept { return points_.size(); }
    /// Index N of the last point.
    std::size_t last_index() const noexcept { return points_.size() - 1; }
    double point(std::size_t i) const { return points_.at(i); }
    double graininess(std::size_t i) const { return graininess_.at(i); }
    bool dense(std::size_t i) const { return dense_.at(i); }

    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> graininess() const noexcept { return graininess_; }

    double front() const noexcept { return points_.front(); }
    double back() const noexcept { return points_.back(); }

    /// Smallest positive graininess over indices 0..N-1.
    double min_graininess() const;
    bool any_dense() const noexcept;

    /// Drops the last point; remaining points keep their graininess.
    GridTimeScale truncate_k() const;

    /// Same number of points, each equal within tol * (1 + |t|).
    bool matches(std::span<const double> other, double tol = 1e-9) const noexcept;

private:
    GridTimeScale() = default;

    std::vector<double> points_;
    std::vector<double> graininess_;
    std::vector<bool> dense_;
};

} // namespace tsvar
