#pragma once

// Diffraction-side quantities: the Thue-Morse autocorrelation coefficients,
// Riesz product coefficients, pure-point intensities from window amplitudes and
// the density formula at k = 0.

#include <boost/rational.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aperiodic/cps.hpp"
#include "aperiodic/eberlein.hpp"
#include "aperiodic/error.hpp"

namespace aperiodic {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// eta(0..m_max) of the signed Thue-Morse sequence from
/// eta(2m) = eta(m), eta(2m+1) = -(eta(m) + eta(m+1))/2, eta(0) = 1 (hence eta(1) = -1/3).
inline std::vector<Rational> tm_eta(std::int64_t m_max) {
    if (m_max < 0) throw DomainError("tm_eta: m_max must be >= 0");
    std::vector<Rational> eta(static_cast<std::size_t>(std::max<std::int64_t>(m_max, 1)) + 1);
    eta[0] = 1;
    eta[1] = Rational(-1, 3);
    for (std::size_t m = 2; m < eta.size(); ++m) {
        const std::size_t j = m / 2;
        eta[m] = (m % 2 == 0) ? eta[j] : -(eta[j] + eta[j + 1]) / 2;
    }
    eta.resize(static_cast<std::size_t>(m_max) + 1);
    return eta;
}

/// Coefficients of e^{2 pi i m k} in P_L(k) = prod_{l<L} (1 - cos(2^{l+1} pi k)),
/// held as integer numerators over 2^L for m = 0 .. 2^L - 1 (c_{-m} = c_m).
struct RieszCoefficients {
    int L = 0;
    std::vector<std::int64_t> numerators;

    std::int64_t denominator() const noexcept { return std::int64_t{1} << L; }
    std::int64_t numerator(std::int64_t m) const {
        const auto i = static_cast<std::size_t>(m < 0 ? -m : m);
        return i < numerators.size() ? numerators[i] : 0;
    }
    Rational c(std::int64_t m) const { return Rational(numerator(m), denominator()); }
    double c_float(std::int64_t m) const {
        return static_cast<double>(numerator(m)) / static_cast<double>(denominator());
    }
    /// P_L(k) from the coefficients.
    double evaluate(double k) const {
        double s = c_float(0);
        for (std::size_t m = 1; m < numerators.size(); ++m) {
            if (numerators[m] != 0) s += 2.0 * c_float(static_cast<std::int64_t>(m)) * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) * k);
        }
        return s;
    }
};

inline constexpr int kMaxRieszDepth = 24;

/// P_{l+1} = P_l - (shift of P_l by +2^l and by -2^l)/2, in exact dyadic arithmetic.
inline RieszCoefficients riesz_coefficients(int L) {
    if (L < 0 || L > kMaxRieszDepth) {
        throw DomainError("riesz_coefficients: depth must lie in [0, " + std::to_string(kMaxRieszDepth) + "]");
    }
    const std::size_t size = std::size_t{1} << L;
    std::vector<std::int64_t> c(size, 0), next(size, 0);
    c[0] = 1;
    auto at = [&](std::int64_t m, std::size_t support) -> std::int64_t {
        const auto i = static_cast<std::size_t>(m < 0 ? -m : m);
        return i < support ? c[i] : 0;
    };
    std::size_t support = 1;  // c[m] may be nonzero for m < support
    for (int l = 0; l < L; ++l) {
        const auto shift = std::int64_t{1} << l;
        const std::size_t new_support = support + static_cast<std::size_t>(shift);
        for (std::size_t m = 0; m < new_support; ++m) {
            const auto mi = static_cast<std::int64_t>(m);
            next[m] = 2 * at(mi, support) - at(mi - shift, support) - at(mi + shift, support);
        }
        std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(new_support), c.begin());
        support = new_support;
    }
    return {L, std::move(c)};
}

/// gamma_ab(m) = (1 + eps_ab eta(|m|))/4 on Z, eps = +1 for equal types, -1 otherwise.
inline double tm_pair_prediction(std::string_view alpha, std::string_view beta, std::int64_t m) {
    auto valid = [](std::string_view t) { return t == "a" || t == "b"; };
    if (!valid(alpha) || !valid(beta)) throw DomainError("tm_pair_prediction: types must be 'a' or 'b'");
    const std::int64_t am = m < 0 ? -m : m;
    const double eta = to_double(tm_eta(am).back());
    const double eps = alpha == beta ? 1.0 : -1.0;
    return 0.25 * (1.0 + eps * eta);
}

struct IntensityRow {
    FourierModulePoint k;
    std::vector<std::complex<double>> amplitudes;  // per type
    double intensity = 0.0;                         // |sum_i u_i A_i(k)|^2
};

/// A_i(k) = alpha_i * window_amplitude(W_i, k), so A_i(0) = dens(Lambda_i).
inline std::vector<IntensityRow> pp_intensity(const ModelSetSpec& spec, const std::vector<double>& alphas,
                                              const std::vector<std::complex<double>>& weights,
                                              const std::vector<FourierModulePoint>& ks) {
    if (alphas.size() != spec.windows.size() || weights.size() != spec.windows.size()) {
        throw DomainError("pp_intensity: one alpha and one weight per window required");
    }
    std::vector<IntensityRow> rows;
    for (const auto& k : ks) {
        IntensityRow row{k, {}, 0.0};
        std::complex<double> total{};
        for (std::size_t i = 0; i < spec.windows.size(); ++i) {
            const auto a = alphas[i] * window_amplitude(spec.windows[i], k);
            row.amplitudes.push_back(a);
            total += weights[i] * a;
        }
        row.intensity = std::norm(total);
        rows.push_back(std::move(row));
    }
    return rows;
}

struct PolarisationCheck {
    double c0 = 0.0;      // mean of the correlation comb over [-r_max, r_max]
    double dens_p = 0.0;
    double dens_q = 0.0;
    double residual = 0.0;  // |c0 - dens_p dens_q|
};

/// The mean counts atoms at |s| = r_max with weight 1/2, which makes it exact for
/// lattice combs at integer r_max.
template <PointType P>
PolarisationCheck polarisation_zero_check(const WeightedComb<P>& p, const WeightedComb<P>& q, const Averaging& A,
                                          double r_max) {
    if (!(r_max > 0.0)) throw DomainError("polarisation_zero_check: r_max must be positive");
    PolarisationCheck out;
    const auto count = [&](const WeightedComb<P>& c) {
        CompensatedSum s;
        for (const auto& a : c.atoms())
            if (A.set().contains(embed(a.point))) s.add(a.weight.real());
        return s.value() / A.volume();
    };
    out.dens_p = count(p);
    out.dens_q = count(q);
    if (!p.empty() && !q.empty()) {
        const auto g = pair_correlation(p, q, A, r_max);
        CompensatedSum s;
        for (const auto& a : g.atoms) {
            const double w = std::abs(embed(a.point)) >= r_max ? 0.5 : 1.0;
            s.add(w * a.weight.real());
        }
        out.c0 = s.value() / (2.0 * r_max);
    }
    out.residual = std::abs(out.c0 - out.dens_p * out.dens_q);
    return out;
}

} // namespace aperiodic
