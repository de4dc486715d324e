#pragma once

// Finite-volume Eberlein convolutions, pair correlations and Fourier-Bohr
// coefficients, plus the orthogonality and decomposition reports built on them.
//
// Convention: the first argument of a convolution is restricted to -A and the
// second to A (or left unrestricted). For symmetric A this is the usual
// mu|_A * nu|_A; for one-sided A it keeps mu~ (x) nu consistent with
// (mu|_A)~ * nu|_A, which is what a pair correlation needs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "aperiodic/combs.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/points.hpp"
#include "aperiodic/summation.hpp"
#include "aperiodic/zroot5.hpp"

namespace aperiodic {

enum class AveragingShape { OneSided, Symmetric };
enum class Variant { BothRestricted, OneRestricted };

inline const char* to_string(AveragingShape s) { return s == AveragingShape::OneSided ? "one_sided" : "symmetric"; }
inline const char* to_string(Variant v) { return v == Variant::BothRestricted ? "both" : "one"; }

/// A single averaging set: [0, R] or [-R, R].
struct Averaging {
    AveragingShape shape = AveragingShape::Symmetric;
    double R = 0.0;

    Interval set() const { return shape == AveragingShape::OneSided ? Interval{0.0, R} : Interval{-R, R}; }
    double volume() const { return set().length(); }
};

/// Increasing radii along one shape; interval sequences are van Hove automatically.
struct AveragingSpec {
    AveragingShape shape = AveragingShape::Symmetric;
    std::vector<double> radii{1e2, 1e3, 1e4};

    AveragingSpec() = default;
    AveragingSpec(AveragingShape s, std::vector<double> r) : shape(s), radii(std::move(r)) { validate(); }

    void validate() const {
        if (radii.empty()) throw DomainError("AveragingSpec: empty radius list");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw DomainError("AveragingSpec: radii must be positive");
            if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("AveragingSpec: radii must increase strictly");
        }
    }
    Averaging at(std::size_t i) const { return {shape, radii.at(i)}; }
    std::size_t size() const noexcept { return radii.size(); }
};

template <PointType P>
struct CorrelationComb {
    std::vector<Atom<P>> atoms;  // sorted by distance
    Averaging averaging;
    double r_max = 0.0;
    Variant variant = Variant::BothRestricted;

    std::complex<double> at(const P& s) const {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), s,
                                   [](const Atom<P>& a, const P& v) { return point_traits<P>::less(a.point, v); });
        if (it != atoms.end() && point_traits<P>::same(it->point, s)) return it->weight;
        return {};
    }
    double sup_norm() const {
        double m = 0.0;
        for (const auto& a : atoms) m = std::max(m, std::abs(a.weight));
        return m;
    }
    std::complex<double> total() const {
        CompensatedComplexSum s;
        for (const auto& a : atoms) s.add(a.weight);
        return s.value();
    }
};

/// max over the union of supports of |a(s) - b(s)|.
template <PointType P>
double max_abs_difference(const CorrelationComb<P>& a, const CorrelationComb<P>& b) {
    double m = 0.0;
    for (const auto& x : a.atoms) m = std::max(m, std::abs(x.weight - b.at(x.point)));
    for (const auto& y : b.atoms) m = std::max(m, std::abs(y.weight - a.at(y.point)));
    return m;
}

namespace detail {

inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// Per-distance compensated accumulators; insertion order does not matter because
/// the final atoms are sorted.
template <PointType P>
class DistanceBins {
public:
    DistanceBins(bool dense, double r_max) : dense_(dense) {
        if (dense_) {
            offset_ = static_cast<std::int64_t>(std::floor(r_max));
            sums_.resize(static_cast<std::size_t>(2 * offset_ + 1));
            used_.assign(sums_.size(), false);
        }
    }

    void add(const P& s, std::complex<double> w) {
        if constexpr (std::is_same_v<P, QuadraticInt>) {
            if (dense_) {
                const auto i = static_cast<std::size_t>(s.m + offset_);
                sums_[i].add(w);
                used_[i] = true;
                return;
            }
            auto [it, fresh] = index_.try_emplace(s, sums_.size());
            if (fresh) {
                sums_.emplace_back();
                keys_.push_back(s);
            }
            sums_[it->second].add(w);
        } else {
            auto it = index_.lower_bound(s - point_traits<double>::kMergeTolerance);
            if (it == index_.end() || it->first > s + point_traits<double>::kMergeTolerance) {
                it = index_.emplace(s, sums_.size()).first;
                sums_.emplace_back();
                keys_.push_back(s);
            }
            sums_[it->second].add(w);
        }
    }

    std::vector<Atom<P>> atoms(double scale) const {
        std::vector<Atom<P>> out;
        if constexpr (std::is_same_v<P, QuadraticInt>) {
            if (dense_) {
                for (std::size_t i = 0; i < sums_.size(); ++i) {
                    if (!used_[i]) continue;
                    const auto w = sums_[i].value() / scale;
                    if (w != std::complex<double>{}) {
                        out.push_back({QuadraticInt::integer(static_cast<std::int64_t>(i) - offset_), w});
                    }
                }
                return out;
            }
        }
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            const auto w = sums_[i].value() / scale;
            if (w != std::complex<double>{}) out.push_back({keys_[i], w});
        }
        std::sort(out.begin(), out.end(),
                  [](const Atom<P>& a, const Atom<P>& b) { return point_traits<P>::less(a.point, b.point); });
        return out;
    }

private:
    bool dense_ = false;
    std::int64_t offset_ = 0;
    std::vector<CompensatedComplexSum> sums_;
    std::vector<bool> used_;
    std::vector<P> keys_;
    std::conditional_t<std::is_same_v<P, QuadraticInt>, std::unordered_map<QuadraticInt, std::size_t>,
                       std::map<double, std::size_t>>
        index_;
};

template <PointType P>
std::vector<Atom<P>> atoms_in(const WeightedComb<P>& mu, const Interval& k) {
    const auto& a = mu.atoms();
    auto lo = std::lower_bound(a.begin(), a.end(), k.lo, [](const Atom<P>& x, double v) { return embed(x.point) < v; });
    auto hi = std::upper_bound(lo, a.end(), k.hi, [](double v, const Atom<P>& x) { return v < embed(x.point); });
    return {lo, hi};
}

template <PointType P>
bool all_integer(const std::vector<Atom<P>>& atoms) {
    if constexpr (std::is_same_v<P, QuadraticInt>) {
        return std::all_of(atoms.begin(), atoms.end(), [](const Atom<P>& a) { return a.point.n == 0; });
    }
    return false;
}

} // namespace detail

/// Weight at s: (1/vol A) sum over x + y = s, |s| <= r_max, of mu(x) nu(y), with
/// x in -A and y in A (both-restricted) or y unrestricted (one-restricted).
/// Summation runs over ascending x, then ascending y.
template <PointType P>
CorrelationComb<P> eberlein_convolve(const WeightedComb<P>& mu, const WeightedComb<P>& nu, const Averaging& A,
                                     double r_max, Variant variant = Variant::BothRestricted) {
    if (!(r_max >= 0.0)) throw DomainError("eberlein_convolve: r_max must be >= 0");
    if (!(A.volume() > 0.0)) throw DomainError("eberlein_convolve: averaging set has zero volume");
    const Interval a_set = A.set();
    CorrelationComb<P> out{{}, A, r_max, variant};
    if (mu.empty() || nu.empty()) return out;
    if (!mu.range().covers(a_set.negated())) {
        throw RangeError("eberlein_convolve: first comb does not cover -A for R=" + std::to_string(A.R));
    }
    const Interval nu_need = variant == Variant::BothRestricted ? a_set : a_set.widened(r_max);
    if (!nu.range().covers(nu_need)) {
        throw RangeError("eberlein_convolve: second comb does not cover the required range for R=" + std::to_string(A.R));
    }
    const auto xs = detail::atoms_in(mu, a_set.negated());
    const auto ys = variant == Variant::BothRestricted ? detail::atoms_in(nu, a_set) : nu.atoms();
    detail::DistanceBins<P> bins(detail::all_integer(xs) && detail::all_integer(ys), r_max);
    const double margin = 1e-9 * std::max(1.0, A.R);
    for (const auto& x : xs) {
        const double ex = embed(x.point);
        auto it = std::lower_bound(ys.begin(), ys.end(), -r_max - ex - margin,
                                   [](const Atom<P>& y, double v) { return embed(y.point) < v; });
        for (; it != ys.end(); ++it) {
            const double ey = embed(it->point);
            if (ey > r_max - ex + margin) break;
            const P s = point_traits<P>::add(x.point, it->point);
            if (std::abs(embed(s)) > r_max) continue;
            bins.add(s, detail::cmul(x.weight, it->weight));
        }
    }
    out.atoms = bins.atoms(A.volume());
    return out;
}

/// gamma_ij = (delta_i)~ (x) delta_j; atoms sit at differences y - x.
template <PointType P>
CorrelationComb<P> pair_correlation(const WeightedComb<P>& delta_i, const WeightedComb<P>& delta_j, const Averaging& A,
                                    double r_max, Variant variant = Variant::BothRestricted) {
    return eberlein_convolve(reflect_conjugate(delta_i), delta_j, A, r_max, variant);
}

template <PointType P>
CorrelationComb<P> pair_correlation(const TypedPointSet<P>& set, std::size_t i, std::size_t j, const Averaging& A,
                                    double r_max, Variant variant = Variant::BothRestricted) {
    return pair_correlation(WeightedComb<P>::from_points(set.points(i), set.range()),
                            WeightedComb<P>::from_points(set.points(j), set.range()), A, r_max, variant);
}

using Wavevector = std::variant<FourierModulePoint, double>;

inline double wavevector_value(const Wavevector& k) {
    if (const auto* m = std::get_if<FourierModulePoint>(&k)) return m->value();
    return std::get<double>(k);
}

inline std::string to_string(const Wavevector& k) {
    if (const auto* m = std::get_if<FourierModulePoint>(&k)) return m->to_string();
    return std::to_string(std::get<double>(k));
}

namespace detail {

/// frac(k x), exact-phase path for module points on Z[tau] positions.
template <PointType P>
double phase_of(const Wavevector& k, const P& x) {
    if constexpr (std::is_same_v<P, QuadraticInt>) {
        if (const auto* m = std::get_if<FourierModulePoint>(&k)) return frac_phase(*m, x);
    }
    const double p = wavevector_value(k) * embed(x);
    return p - std::floor(p);
}

} // namespace detail

/// (1/vol A) sum_{x in A} mu(x) e^{-2 pi i k x}, ascending compensated summation.
template <PointType P>
std::complex<double> fb_coefficient(const WeightedComb<P>& mu, const Wavevector& k, const Averaging& A) {
    if (!(A.volume() > 0.0)) throw DomainError("fb_coefficient: averaging set has zero volume");
    if (!mu.empty() && !mu.range().covers(A.set())) {
        throw RangeError("fb_coefficient: comb does not cover A for R=" + std::to_string(A.R));
    }
    CompensatedComplexSum sum;
    for (const auto& a : detail::atoms_in(mu, A.set())) {
        sum.add(detail::cmul(a.weight, std::conj(unit_phase(detail::phase_of(k, a.point)))));
    }
    return sum.value() / A.volume();
}

struct FbRow {
    Wavevector k;
    double R = 0.0;
    std::complex<double> c;
    double cauchy_diff = std::numeric_limits<double>::quiet_NaN();  // |c(R) - c(R_prev)|, NaN on the first R
};

namespace detail {

/// Runs body(i) for i in [0, n) on up to `threads` workers; each index writes only its
/// own output, so scheduling cannot change results.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Rows ordered by k (input order), then R.
template <PointType P>
std::vector<FbRow> fb_scan(const WeightedComb<P>& mu, const std::vector<Wavevector>& ks, const AveragingSpec& spec,
                           std::size_t threads = 1) {
    spec.validate();
    std::vector<FbRow> rows(ks.size() * spec.size());
    detail::parallel_for(ks.size(), threads, [&](std::size_t i) {
        for (std::size_t r = 0; r < spec.size(); ++r) {
            FbRow& row = rows[i * spec.size() + r];
            row.k = ks[i];
            row.R = spec.radii[r];
            row.c = fb_coefficient(mu, ks[i], spec.at(r));
            if (r > 0) row.cauchy_diff = std::abs(row.c - rows[i * spec.size() + r - 1].c);
        }
    });
    return rows;
}

/// max |c| over the rows at radius R.
inline double fb_sup_at(const std::vector<FbRow>& rows, double R) {
    double m = 0.0;
    for (const auto& r : rows)
        if (r.R == R) m = std::max(m, std::abs(r.c));
    return m;
}

struct OrthogonalityRow {
    double R = 0.0;
    double sup_omega_nu = 0.0;  // sup |(omega~ (x) nu)(s)|, |s| <= r_max
    double sup_nu_omega = 0.0;  // sup |(nu~ (x) omega)(s)|
};

template <PointType P>
std::vector<OrthogonalityRow> orthogonality_report(const WeightedComb<P>& omega, const WeightedComb<P>& nu,
                                                   const AveragingSpec& spec, double r_max) {
    spec.validate();
    const auto omega_r = reflect_conjugate(omega);
    const auto nu_r = reflect_conjugate(nu);
    std::vector<OrthogonalityRow> rows;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto A = spec.at(i);
        rows.push_back({A.R, eberlein_convolve(omega_r, nu, A, r_max).sup_norm(),
                        eberlein_convolve(nu_r, omega, A, r_max).sup_norm()});
    }
    return rows;
}

/// FB coefficient of a finite correlation comb averaged over [-r_max, r_max].
template <PointType P>
std::complex<double> correlation_fb(const CorrelationComb<P>& g, const Wavevector& k) {
    if (!(g.r_max > 0.0)) return {};
    CompensatedComplexSum sum;
    for (const auto& a : g.atoms) sum.add(detail::cmul(a.weight, std::conj(unit_phase(detail::phase_of(k, a.point)))));
    return sum.value() / (2.0 * g.r_max);
}

template <PointType P>
struct DecompositionReport {
    CorrelationComb<P> gamma;       // (delta_i)~ (x) delta_j
    CorrelationComb<P> s_part;      // omega_i~ (x) omega_j
    CorrelationComb<P> zero_part;   // nu_i~ (x) nu_j
    CorrelationComb<P> cross_omega_nu;  // omega_i~ (x) nu_j
    CorrelationComb<P> cross_nu_omega;  // nu_i~ (x) omega_j
    double cross_sup = 0.0;
    double identity_residual = 0.0;  // max |gamma - (s + zero + crosses)|
    double zero_part_fb_max = 0.0;   // null-FB proxy over the supplied wavevectors
};

template <PointType P>
DecompositionReport<P> decomposition_report(const TypedPointSet<P>& set, const Splitting<P>& split, std::size_t i,
                                            std::size_t j, const Averaging& A, double r_max,
                                            const std::vector<Wavevector>& ks = {}) {
    const auto& pi = split.part(set.types()[i]);
    const auto& pj = split.part(set.types()[j]);
    DecompositionReport<P> rep;
    rep.gamma = pair_correlation(set, i, j, A, r_max);
    const auto omega_i = reflect_conjugate(pi.omega);
    const auto nu_i = reflect_conjugate(pi.nu);
    rep.s_part = eberlein_convolve(omega_i, pj.omega, A, r_max);
    rep.zero_part = eberlein_convolve(nu_i, pj.nu, A, r_max);
    rep.cross_omega_nu = eberlein_convolve(omega_i, pj.nu, A, r_max);
    rep.cross_nu_omega = eberlein_convolve(nu_i, pj.omega, A, r_max);
    rep.cross_sup = std::max(rep.cross_omega_nu.sup_norm(), rep.cross_nu_omega.sup_norm());

    auto sum_at = [&](const P& s) {
        return rep.s_part.at(s) + rep.zero_part.at(s) + rep.cross_omega_nu.at(s) + rep.cross_nu_omega.at(s);
    };
    double res = 0.0;
    for (const auto* part : {&rep.gamma, &rep.s_part, &rep.zero_part, &rep.cross_omega_nu, &rep.cross_nu_omega}) {
        for (const auto& a : part->atoms) res = std::max(res, std::abs(rep.gamma.at(a.point) - sum_at(a.point)));
    }
    rep.identity_residual = res;
    for (const auto& k : ks) rep.zero_part_fb_max = std::max(rep.zero_part_fb_max, std::abs(correlation_fb(rep.zero_part, k)));
    return rep;
}

struct SmoothedFbCheck {
    std::complex<double> c_smoothed;  // c_{phi * mu}(k) by grid integration
    std::complex<double> c_mu;        // c_mu(k)
    double phi_hat = 0.0;             // w sinc^2(pi k w)
    double residual = 0.0;            // |c_smoothed - phi_hat c_mu|
};

/// Triangular kernel phi(x) = max(0, 1 - |x|/w); midpoint grid of spacing <= w/64.
template <PointType P>
SmoothedFbCheck smoothed_fb_check(const WeightedComb<P>& mu, double w, double k, const Averaging& A) {
    if (!(w > 0.0)) throw DomainError("smoothed_fb_check: kernel width must be positive");
    const Interval a_set = A.set();
    const double vol = A.volume();
    const auto cells = static_cast<std::size_t>(std::ceil(vol * 64.0 / w));
    const double h = vol / static_cast<double>(cells);
    const auto& atoms = mu.atoms();
    CompensatedComplexSum integral;
    std::size_t first = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        const double t = a_set.lo + (static_cast<double>(c) + 0.5) * h;
        while (first < atoms.size() && embed(atoms[first].point) <= t - w) ++first;
        std::complex<double> f{};
        for (std::size_t q = first; q < atoms.size(); ++q) {
            const double d = t - embed(atoms[q].point);
            if (d <= -w) break;
            f += atoms[q].weight * (1.0 - std::abs(d) / w);
        }
        const double p = k * t;
        integral.add(detail::cmul(f, std::conj(unit_phase(p - std::floor(p)))) * h);
    }
    SmoothedFbCheck out;
    out.c_smoothed = integral.value() / vol;
    out.c_mu = fb_coefficient(mu, Wavevector{k}, A);
    const double z = std::numbers::pi * k * w;
    const double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
    out.phi_hat = w * sinc * sinc;
    out.residual = std::abs(out.c_smoothed - out.phi_hat * out.c_mu);
    return out;
}

/// vol(boundary^K A)/vol(A) for K = [-r, r] and an interval A of length L:
/// the outer collar has length 2r and the inner one min(2r, L).
inline double boundary_fraction(const Averaging& A, double r_max) {
    if (!(r_max >= 0.0)) throw DomainError("boundary_fraction: r_max must be >= 0");
    const double L = A.volume();
    if (!(L > 0.0)) throw DomainError("boundary_fraction: averaging set has zero volume");
    return (2.0 * r_max + std::min(2.0 * r_max, L)) / L;
}

} // namespace aperiodic
