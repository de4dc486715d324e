#pragma once

// Weighted Dirac combs with exact (or tolerance-merged real) atom positions and
// the omega/nu splitting of typed point sets against a reference comb.

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "aperiodic/cps.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/points.hpp"

namespace aperiodic {

template <PointType P>
struct Atom {
    P point{};
    std::complex<double> weight{};

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite comb sum_x w(x) delta_x over a support range. Atoms are kept sorted by
/// embedded position; coincident atoms are summed and exact zeros dropped.
template <PointType P>
class WeightedComb {
public:
    WeightedComb() = default;

    WeightedComb(std::vector<Atom<P>> atoms, Interval range) : range_(range) {
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const Atom<P>& a, const Atom<P>& b) { return point_traits<P>::less(a.point, b.point); });
        for (auto& a : atoms) {
            if (!range_.contains(embed(a.point))) {
                throw DomainError("WeightedComb: atom at " + std::to_string(embed(a.point)) + " outside range");
            }
            if (!atoms_.empty() && point_traits<P>::same(atoms_.back().point, a.point)) {
                atoms_.back().weight += a.weight;
            } else {
                atoms_.push_back(a);
            }
        }
        std::erase_if(atoms_, [](const Atom<P>& a) { return a.weight == std::complex<double>{}; });
    }

    /// Unit (or constant) weight comb of a sorted point list.
    static WeightedComb from_points(const std::vector<P>& points, Interval range, std::complex<double> w = 1.0) {
        std::vector<Atom<P>> atoms;
        atoms.reserve(points.size());
        for (const auto& p : points) atoms.push_back({p, w});
        return WeightedComb(std::move(atoms), range);
    }

    const std::vector<Atom<P>>& atoms() const noexcept { return atoms_; }
    Interval range() const noexcept { return range_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    std::complex<double> weight_at(const P& x) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](const Atom<P>& a, const P& v) { return point_traits<P>::less(a.point, v); });
        if (it != atoms_.end() && point_traits<P>::same(it->point, x)) return it->weight;
        return {};
    }

    friend bool operator==(const WeightedComb&, const WeightedComb&) = default;

private:
    std::vector<Atom<P>> atoms_;
    Interval range_{};
};

/// w at x becomes conj(w) at -x.
template <PointType P>
WeightedComb<P> reflect_conjugate(const WeightedComb<P>& mu) {
    std::vector<Atom<P>> atoms;
    atoms.reserve(mu.size());
    for (auto it = mu.atoms().rbegin(); it != mu.atoms().rend(); ++it) {
        atoms.push_back({point_traits<P>::negate(it->point), std::conj(it->weight)});
    }
    return WeightedComb<P>(std::move(atoms), mu.range().negated());
}

/// Atoms inside the closed interval; the range shrinks accordingly.
template <PointType P>
WeightedComb<P> restrict(const WeightedComb<P>& mu, const Interval& k) {
    std::vector<Atom<P>> atoms;
    for (const auto& a : mu.atoms()) {
        if (k.contains(embed(a.point))) atoms.push_back(a);
    }
    const Interval r = mu.range().intersect(k);
    if (r.empty()) return WeightedComb<P>({}, Interval{k.lo, k.lo});
    return WeightedComb<P>(std::move(atoms), r);
}

template <PointType P>
using CombTerm = std::pair<std::complex<double>, const WeightedComb<P>*>;

/// sum_t c_t mu_t on the intersection of the term ranges.
template <PointType P>
WeightedComb<P> linear_combine(const std::vector<CombTerm<P>>& terms) {
    if (terms.empty()) throw DomainError("linear_combine: empty term list");
    Interval range = terms.front().second->range();
    for (const auto& t : terms) range = range.intersect(t.second->range());
    if (range.empty()) throw DomainError("linear_combine: disjoint ranges");
    std::vector<Atom<P>> atoms;
    for (const auto& [c, comb] : terms) {
        for (const auto& a : comb->atoms()) {
            if (range.contains(embed(a.point))) atoms.push_back({a.point, c * a.weight});
        }
    }
    return WeightedComb<P>(std::move(atoms), range);
}

template <PointType P>
WeightedComb<P> linear_combine(std::complex<double> a, const WeightedComb<P>& mu, std::complex<double> b,
                               const WeightedComb<P>& nu) {
    return linear_combine<P>({{a, &mu}, {b, &nu}});
}

/// omega = alpha * delta_reference and nu = delta_points - omega on a range.
template <PointType P>
struct SplitPair {
    WeightedComb<P> omega;
    WeightedComb<P> nu;
    double alpha = 0.0;
};

/// Requires points to be a subset of reference on the range (offenders reported).
template <PointType P>
SplitPair<P> split_against(const std::vector<P>& points, const std::vector<P>& reference, double alpha,
                           const Interval& range) {
    std::vector<P> inside;
    for (const auto& x : points)
        if (range.contains(embed(x))) inside.push_back(x);
    std::vector<P> offending;
    auto less = [](const P& a, const P& b) { return point_traits<P>::less(a, b); };
    for (const auto& x : inside) {
        auto it = std::lower_bound(reference.begin(), reference.end(), x, less);
        if (it == reference.end() || !point_traits<P>::same(*it, x)) {
            offending.push_back(x);
            if (offending.size() == 10) break;
        }
    }
    if (!offending.empty()) {
        std::string msg = "split: points outside the reference set:";
        for (const auto& x : offending) {
            if constexpr (std::is_same_v<P, QuadraticInt>) msg += " " + x.to_string();
            else msg += " " + std::to_string(x);
        }
        throw ContainmentError(msg);
    }
    std::vector<P> ref_inside;
    for (const auto& x : reference)
        if (range.contains(embed(x))) ref_inside.push_back(x);
    SplitPair<P> out;
    out.alpha = alpha;
    out.omega = WeightedComb<P>::from_points(ref_inside, range, alpha);
    const auto delta = WeightedComb<P>::from_points(inside, range);
    out.nu = linear_combine<P>(1.0, delta, -1.0, out.omega);
    return out;
}

/// alpha = dens(Lambda_i) / (dens(L) vol(W_i)).
inline double splitting_alpha(double density, const Window& w) {
    const double d = model_set_density(w);
    if (!(d > 0.0)) throw DomainError("splitting_alpha: window has zero volume");
    return density / d;
}

/// Model-set splitting of one type: omega = alpha delta_{model set of W} on the range.
inline SplitPair<QuadraticInt> split_pp(const std::vector<QuadraticInt>& points, const Window& w, double alpha,
                                        const Interval& range) {
    return split_against(points, cut_and_project(w, range), alpha, range);
}

/// Per-type splitting of a typed point set.
template <PointType P>
struct Splitting {
    std::vector<std::string> types;
    std::vector<SplitPair<P>> parts;

    const SplitPair<P>& part(std::string_view type) const {
        for (std::size_t i = 0; i < types.size(); ++i)
            if (types[i] == type) return parts[i];
        throw DomainError("no split for type '" + std::string(type) + "'");
    }
};

/// alpha_i from the measured density on the set's range and the window volume.
inline Splitting<QuadraticInt> split_model_sets(const TypedPointSet<QuadraticInt>& set, const ModelSetSpec& spec) {
    Splitting<QuadraticInt> out;
    const auto dens = densities(set);
    for (std::size_t t = 0; t < set.type_count(); ++t) {
        const Window& w = spec.window(set.types()[t]);
        out.types.push_back(set.types()[t]);
        out.parts.push_back(split_pp(set.points(t), w, splitting_alpha(dens[t], w), set.range()));
    }
    return out;
}

/// Integer-lattice splitting with a common reference Z on the range.
inline Splitting<QuadraticInt> split_lattice(const TypedPointSet<QuadraticInt>& set, const std::vector<double>& alphas) {
    if (alphas.size() != set.type_count()) throw DomainError("split_lattice: one alpha per type required");
    std::vector<QuadraticInt> lattice;
    const auto lo = static_cast<std::int64_t>(std::ceil(set.range().lo));
    const auto hi = static_cast<std::int64_t>(std::floor(set.range().hi));
    for (std::int64_t i = lo; i <= hi; ++i) lattice.push_back(QuadraticInt::integer(i));
    Splitting<QuadraticInt> out;
    for (std::size_t t = 0; t < set.type_count(); ++t) {
        out.types.push_back(set.types()[t]);
        out.parts.push_back(split_against(set.points(t), lattice, alphas[t], set.range()));
    }
    return out;
}

} // namespace aperiodic
