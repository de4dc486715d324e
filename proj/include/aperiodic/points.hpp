#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <vector>

#include "aperiodic/error.hpp"
#include "aperiodic/zroot5.hpp"

namespace aperiodic {

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    bool covers(const Interval& other) const noexcept { return lo <= other.lo && other.hi <= hi; }
    double length() const noexcept { return hi > lo ? hi - lo : 0.0; }
    bool empty() const noexcept { return hi < lo; }
    Interval negated() const noexcept { return {-hi, -lo}; }
    Interval intersect(const Interval& o) const noexcept { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
    Interval widened(double r) const noexcept { return {lo - r, hi + r}; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

template <class P>
struct point_traits;

template <>
struct point_traits<QuadraticInt> {
    static constexpr bool exact = true;
    static double embed(const QuadraticInt& x) { return qi_embed(x); }
    static QuadraticInt negate(const QuadraticInt& x) { return -x; }
    static QuadraticInt add(const QuadraticInt& x, const QuadraticInt& y) { return x + y; }
    static bool less(const QuadraticInt& x, const QuadraticInt& y) { return x < y; }
    static bool same(const QuadraticInt& x, const QuadraticInt& y) { return x == y; }
};

/// Real-keyed points from non-Z[tau] tile lengths; coincidence up to kMergeTolerance.
template <>
struct point_traits<double> {
    static constexpr bool exact = false;
    static constexpr double kMergeTolerance = 1e-9;
    static double embed(double x) { return x; }
    static double negate(double x) { return -x; }
    static double add(double x, double y) { return x + y; }
    static bool less(double x, double y) { return x < y; }
    static bool same(double x, double y) { return std::abs(x - y) <= kMergeTolerance; }
};

template <class P>
concept PointType = requires(const P& p) {
    { point_traits<P>::embed(p) } -> std::convertible_to<double>;
    { point_traits<P>::negate(p) } -> std::same_as<P>;
};

template <PointType P>
double embed(const P& p) {
    return point_traits<P>::embed(p);
}

/// Disjoint union of per-type point lists, each strictly increasing, all inside `range`.
template <PointType P>
class TypedPointSet {
public:
    TypedPointSet() = default;

    TypedPointSet(std::vector<std::string> types, std::vector<std::vector<P>> points, Interval range)
        : types_(std::move(types)), points_(std::move(points)), range_(range) {
        if (types_.size() != points_.size()) {
            throw DomainError("TypedPointSet: type/list count mismatch");
        }
        for (std::size_t t = 0; t < points_.size(); ++t) {
            const auto& list = points_[t];
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!range_.contains(embed(list[i]))) {
                    throw DomainError("TypedPointSet: point outside range in type " + types_[t]);
                }
                if (i > 0 && !point_traits<P>::less(list[i - 1], list[i])) {
                    throw DomainError("TypedPointSet: type " + types_[t] + " not strictly increasing");
                }
            }
        }
        const auto all = all_points();
        for (std::size_t i = 1; i < all.size(); ++i) {
            if (point_traits<P>::same(all[i - 1], all[i])) {
                throw DomainError("TypedPointSet: types are not disjoint");
            }
        }
    }

    const std::vector<std::string>& types() const noexcept { return types_; }
    std::size_t type_count() const noexcept { return types_.size(); }
    Interval range() const noexcept { return range_; }
    static constexpr bool exact() noexcept { return point_traits<P>::exact; }

    std::size_t type_index(std::string_view type) const {
        const auto it = std::find(types_.begin(), types_.end(), type);
        if (it == types_.end()) throw DomainError("unknown type '" + std::string(type) + "'");
        return static_cast<std::size_t>(it - types_.begin());
    }

    const std::vector<P>& points(std::size_t type) const { return points_.at(type); }
    const std::vector<P>& points(std::string_view type) const { return points_[type_index(type)]; }

    std::size_t size() const noexcept {
        std::size_t n = 0;
        for (const auto& l : points_) n += l.size();
        return n;
    }

    std::vector<P> all_points() const {
        std::vector<P> all;
        all.reserve(size());
        for (const auto& l : points_) all.insert(all.end(), l.begin(), l.end());
        std::sort(all.begin(), all.end(), [](const P& x, const P& y) { return point_traits<P>::less(x, y); });
        return all;
    }

private:
    std::vector<std::string> types_;
    std::vector<std::vector<P>> points_;
    Interval range_{};
};

/// count / length(range) per type.
template <PointType P>
std::vector<double> densities(const TypedPointSet<P>& set) {
    const double len = set.range().length();
    if (!(len > 0.0)) throw DomainError("densities: degenerate range");
    std::vector<double> out;
    for (std::size_t t = 0; t < set.type_count(); ++t) {
        out.push_back(static_cast<double>(set.points(t).size()) / len);
    }
    return out;
}

template <PointType P>
double total_density(const TypedPointSet<P>& set) {
    double s = 0.0;
    for (double d : densities(set)) s += d;
    return s;
}

} // namespace aperiodic
