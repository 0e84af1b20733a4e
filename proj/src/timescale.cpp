#include "tsvar/timescale.hpp"

#include "tsvar/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tsvar {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr double kMergeDistance = 1e-12;

std::string format_point(double t)
{
    return detail::format_double(t);
}

} // namespace

std::string to_string(PointClass c)
{
    std::string s = c.right == RightClass::Dense ? "right-dense" : "right-scattered";
    s += c.left == LeftClass::Dense ? ", left-dense" : ", left-scattered";
    return s;
}

TimeScale::TimeScale(std::vector<Segment> segments, double tolerance)
    : segments_(std::move(segments))
    , tolerance_(tolerance)
{
    if (segments_.empty())
        throw DomainError("time scale must contain at least one point");
    if (!(tolerance_ >= 0.0) || !std::isfinite(tolerance_))
        throw DomainError("time scale tolerance must be finite and non-negative");
    for (std::size_t j = 0; j < segments_.size(); ++j) {
        const auto& s = segments_[j];
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi))
            throw DomainError("time scale endpoints must be finite");
        if (s.lo > s.hi)
            throw DomainError("interval [" + format_point(s.lo) + "," + format_point(s.hi) + "] has lo > hi");
        if (j > 0 && !(segments_[j - 1].hi < s.lo))
            throw DomainError("time scale segments must be sorted and disjoint near t=" + format_point(s.lo));
    }
}

TimeScale TimeScale::parse(std::string_view literal, double tolerance)
{
    std::vector<Segment> segments;
    std::size_t pos = 0;
    const auto fail = [&](const std::string& msg, std::size_t at) -> TimeScale {
        throw ParseError("time scale literal: " + msg, at);
    };

    for (;;) {
        std::size_t end = literal.find(';', pos);
        const std::size_t stop = end == std::string_view::npos ? literal.size() : end;
        std::string_view item = literal.substr(pos, stop - pos);
        const std::size_t lead = item.find_first_not_of(" \t");
        if (lead == std::string_view::npos)
            return fail("empty item", pos);
        const std::size_t item_start = pos + lead;
        item = detail::trim(item);

        if (item.front() == '[') {
            if (item.back() != ']')
                return fail("missing ']'", item_start);
            std::string_view inner = item.substr(1, item.size() - 2);
            const std::size_t comma = inner.find(',');
            if (comma == std::string_view::npos)
                return fail("interval needs two endpoints", item_start);
            const auto lo = detail::parse_double(detail::trim(inner.substr(0, comma)));
            const auto hi = detail::parse_double(detail::trim(inner.substr(comma + 1)));
            if (!lo || !hi)
                return fail("bad interval endpoint", item_start);
            segments.push_back({*lo, *hi});
        } else {
            const auto p = detail::parse_double(item);
            if (!p)
                return fail("bad point '" + std::string(item) + "'", item_start);
            segments.push_back({*p, *p});
        }

        if (end == std::string_view::npos)
            break;
        pos = end + 1;
    }
    try {
        return TimeScale(std::move(segments), tolerance);
    } catch (const DomainError& e) {
        throw ParseError(std::string("time scale literal: ") + e.what(), 0);
    }
}

bool TimeScale::is_discrete() const noexcept
{
    return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.is_point(); });
}

std::size_t TimeScale::locate(double t) const noexcept
{
    if (!std::isfinite(t))
        return npos;
    // first segment whose upper end is not below t - tol
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t - tolerance_,
                               [](const Segment& s, double v) { return s.hi < v; });
    if (it == segments_.end() || t < it->lo - tolerance_)
        return npos;
    return static_cast<std::size_t>(it - segments_.begin());
}

std::size_t TimeScale::require(double t) const
{
    const std::size_t j = locate(t);
    if (j == npos)
        throw DomainError("t=" + format_point(t) + " is not in the time scale " + to_string());
    return j;
}

bool TimeScale::contains(double t) const noexcept
{
    return locate(t) != npos;
}

double TimeScale::sigma(double t) const
{
    const std::size_t j = require(t);
    const Segment& s = segments_[j];
    if (t < s.hi - tolerance_)
        return t;
    if (j + 1 == segments_.size())
        return s.hi;
    return segments_[j + 1].lo;
}

double TimeScale::rho(double t) const
{
    const std::size_t j = require(t);
    const Segment& s = segments_[j];
    if (t > s.lo + tolerance_)
        return t;
    if (j == 0)
        return s.lo;
    return segments_[j - 1].hi;
}

double TimeScale::graininess(double t) const
{
    const std::size_t j = require(t);
    const Segment& s = segments_[j];
    if (t < s.hi - tolerance_ || j + 1 == segments_.size())
        return 0.0;
    return segments_[j + 1].lo - s.hi;
}

PointClass TimeScale::classify(double t) const
{
    const std::size_t j = require(t);
    const Segment& s = segments_[j];
    PointClass c{RightClass::Dense, LeftClass::Dense};
    if (t >= s.hi - tolerance_ && j + 1 < segments_.size())
        c.right = RightClass::Scattered;
    if (t <= s.lo + tolerance_ && j > 0)
        c.left = LeftClass::Scattered;
    return c;
}

TimeScale TimeScale::truncate_k() const
{
    const Segment& last = segments_.back();
    if (!last.is_point())
        return *this; // b is left-dense, rho(b) = b
    if (segments_.size() == 1)
        throw DegenerateScaleError("T^k of a single-point time scale is empty");
    std::vector<Segment> kept(segments_.begin(), segments_.end() - 1);
    return TimeScale(std::move(kept), tolerance_);
}

GridTimeScale TimeScale::sample(double resolution) const
{
    if (!(resolution > 0.0) || !std::isfinite(resolution))
        throw DomainError("sampling resolution must be positive and finite");

    std::vector<double> points;
    std::vector<bool> dense;
    const auto push = [&](double t, bool is_dense) {
        if (!points.empty() && t - points.back() < kMergeDistance) {
            // collapse onto the lower value; a point is dense if either copy was
            dense.back() = dense.back() || is_dense;
            return;
        }
        points.push_back(t);
        dense.push_back(is_dense);
    };

    for (const Segment& s : segments_) {
        if (s.is_point()) {
            push(s.lo, false);
            continue;
        }
        const double width = s.hi - s.lo;
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(width / resolution - 1e-9)));
        for (std::size_t k = 0; k < steps; ++k)
            push(s.lo + width * static_cast<double>(k) / static_cast<double>(steps), true);
        push(s.hi, true);
    }
    return GridTimeScale(std::move(points), std::move(dense));
}

std::string TimeScale::to_string() const
{
    std::ostringstream os;
    for (std::size_t j = 0; j < segments_.size(); ++j) {
        if (j > 0)
            os << ';';
        const Segment& s = segments_[j];
        if (s.is_point())
            os << format_point(s.lo);
        else
            os << '[' << format_point(s.lo) << ',' << format_point(s.hi) << ']';
    }
    return os.str();
}

// ---------------------------------------------------------------------------

GridTimeScale::GridTimeScale(std::vector<double> points, std::vector<bool> dense_flags)
    : points_(std::move(points))
    , dense_(std::move(dense_flags))
{
    if (points_.empty())
        throw DegenerateScaleError("grid must contain at least one point");
    if (dense_.empty())
        dense_.assign(points_.size(), false);
    if (dense_.size() != points_.size())
        throw DimensionError("dense flag count differs from point count");
    graininess_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]))
            throw DomainError("grid points must be finite");
        if (i + 1 < points_.size()) {
            if (!(points_[i + 1] > points_[i]))
                throw DomainError("grid points must be strictly increasing");
            graininess_[i] = points_[i + 1] - points_[i];
        }
    }
    graininess_.back() = 0.0;
}

double GridTimeScale::min_graininess() const
{
    if (points_.size() < 2)
        throw DegenerateScaleError("single-point grid has no positive graininess");
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        m = std::min(m, graininess_[i]);
    return m;
}

bool GridTimeScale::any_dense() const noexcept
{
    return std::find(dense_.begin(), dense_.end(), true) != dense_.end();
}

GridTimeScale GridTimeScale::truncate_k() const
{
    if (points_.size() < 2)
        throw DegenerateScaleError("k-truncation of a single-point grid is empty");
    GridTimeScale g;
    g.points_.assign(points_.begin(), points_.end() - 1);
    g.graininess_.assign(graininess_.begin(), graininess_.end() - 1);
    g.dense_.assign(dense_.begin(), dense_.end() - 1);
    return g;
}

bool GridTimeScale::matches(std::span<const double> other, double tol) const noexcept
{
    if (other.size() != points_.size())
        return false;
    for (std::size_t i = 0; i < other.size(); ++i)
        if (std::abs(other[i] - points_[i]) > tol * (1.0 + std::abs(points_[i])))
            return false;
    return true;
}

} // namespace tsvar
