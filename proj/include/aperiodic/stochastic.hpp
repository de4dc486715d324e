#pragma once

// Seeded samplers for the Bernoulli lattice gas and the random Fibonacci
// inflation, with their splitting diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "aperiodic/combs.hpp"
#include "aperiodic/eberlein.hpp"
#include "aperiodic/inflate.hpp"
#include "aperiodic/random.hpp"

namespace aperiodic {

/// Each site of {-N, ..., N} kept independently with probability p. The draw of
/// site i depends on i only, so larger N extends smaller samples.
inline TypedPointSet<QuadraticInt> bernoulli_gas(double p, std::int64_t N, const RngSpec& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli_gas: p must lie in [0,1]");
    if (N < 0) throw DomainError("bernoulli_gas: N must be >= 0");
    const CounterRng gen(rng);
    std::vector<QuadraticInt> pts;
    pts.reserve(static_cast<std::size_t>(std::ceil(p * static_cast<double>(2 * N + 1))) + 16);
    for (std::int64_t i = -N; i <= N; ++i) {
        if (gen.uniform(0, static_cast<std::uint64_t>(i)) < p) pts.push_back(QuadraticInt::integer(i));
    }
    const auto n = static_cast<double>(N);
    return TypedPointSet<QuadraticInt>({"a"}, {std::move(pts)}, Interval{-n, n});
}

struct BernoulliReport {
    double p = 0.0;
    std::int64_t N = 0;
    double r_max = 0.0;
    double density = 0.0;
    CorrelationComb<QuadraticInt> gamma;      // delta~ (x) delta
    CorrelationComb<QuadraticInt> zero_part;  // nu~ (x) nu
    double cross_sup = 0.0;                   // max of sup|omega~ (x) nu|, sup|nu~ (x) omega|
    double gamma0_error = 0.0;                // |gamma(0) - p|
    double gamma_off_error = 0.0;             // max_{1<=|m|<=r_max} |gamma(m) - p^2|
    double zero0_error = 0.0;                 // |zero(0) - p(1-p)|
    double zero_off_max = 0.0;                // max_{m != 0} |zero(m)|
};

/// omega = p delta_Z, nu = delta_Lambda - omega, symmetric averaging with R = N.
inline BernoulliReport bernoulli_verify(double p, std::int64_t N, const RngSpec& rng, double r_max) {
    const auto gas = bernoulli_gas(p, N, rng);
    const auto split = split_lattice(gas, {p});
    const auto& omega = split.parts[0].omega;
    const auto& nu = split.parts[0].nu;
    const Averaging A{AveragingShape::Symmetric, static_cast<double>(N)};
    BernoulliReport rep;
    rep.p = p;
    rep.N = N;
    rep.r_max = r_max;
    rep.density = static_cast<double>(gas.size()) / A.volume();
    rep.gamma = pair_correlation(gas, 0, 0, A, r_max);
    const auto nu_r = reflect_conjugate(nu);
    rep.zero_part = eberlein_convolve(nu_r, nu, A, r_max);
    rep.cross_sup = std::max(eberlein_convolve(reflect_conjugate(omega), nu, A, r_max).sup_norm(),
                             eberlein_convolve(nu_r, omega, A, r_max).sup_norm());
    const auto r = static_cast<std::int64_t>(std::floor(r_max));
    rep.gamma0_error = std::abs(rep.gamma.at(QuadraticInt{}) - p);
    rep.zero0_error = std::abs(rep.zero_part.at(QuadraticInt{}) - p * (1.0 - p));
    for (std::int64_t m = -r; m <= r; ++m) {
        if (m == 0) continue;
        const auto s = QuadraticInt::integer(m);
        rep.gamma_off_error = std::max(rep.gamma_off_error, std::abs(rep.gamma.at(s) - p * p));
        rep.zero_off_max = std::max(rep.zero_off_max, std::abs(rep.zero_part.at(s)));
    }
    return rep;
}

/// Local random inflation a -> ab (p) | ba (1-p), b -> a from seed a, one
/// independent draw per tile and level; lengths tau and 1.
inline TypedPointSet<QuadraticInt> random_fibonacci(double p, double R, const RngSpec& rng) {
    return realize_geometric(random_fibonacci_rule(p), "a", R, rng);
}

struct EmpiricalAmplitudeRow {
    FourierModulePoint k;
    double R = 0.0;
    std::vector<std::complex<double>> amplitudes;  // per type, c_k(delta_type) on [0, R]
    std::vector<double> cauchy_diff;               // per type |c(R) - c(R_prev)|, NaN on first R
    double intensity = 0.0;                        // |sum_a u_a c_a(k)|^2
};

struct ResidualRow {
    FourierModulePoint k;
    double fejer_mean = 0.0;  // (1/r) sum_{|s|<=r} (1 - |s|/r) gamma_mu(s) e^{-2 pi i k s}
    double intensity = 0.0;
    double residual = 0.0;    // fejer_mean - intensity: continuous plus leaked mass near k
};

struct EmpiricalSplit {
    std::vector<EmpiricalAmplitudeRow> amplitudes;  // ordered by k, then R
    std::vector<ResidualRow> residuals;             // at the largest R
    double pp_intensity_sum = 0.0;                  // sum over k of the largest-R intensities
};

/// Amplitudes are estimated from the sample; the window functions of the
/// covering model set are not reconstructed.
inline EmpiricalSplit empirical_pp_split(const TypedPointSet<QuadraticInt>& set,
                                         const std::vector<FourierModulePoint>& ks, const AveragingSpec& spec,
                                         const std::vector<std::complex<double>>& weights, double r_max = 20.0) {
    spec.validate();
    if (weights.size() != set.type_count()) throw DomainError("empirical_pp_split: one weight per type required");
    std::vector<WeightedComb<QuadraticInt>> combs;
    std::vector<Atom<QuadraticInt>> mu_atoms;
    for (std::size_t t = 0; t < set.type_count(); ++t) {
        combs.push_back(WeightedComb<QuadraticInt>::from_points(set.points(t), set.range()));
        for (const auto& x : set.points(t)) mu_atoms.push_back({x, weights[t]});
    }
    EmpiricalSplit out;
    for (const auto& k : ks) {
        std::vector<std::complex<double>> prev;
        for (std::size_t r = 0; r < spec.size(); ++r) {
            EmpiricalAmplitudeRow row;
            row.k = k;
            row.R = spec.radii[r];
            std::complex<double> total{};
            for (std::size_t t = 0; t < combs.size(); ++t) {
                const auto c = fb_coefficient(combs[t], Wavevector{k}, spec.at(r));
                row.amplitudes.push_back(c);
                row.cauchy_diff.push_back(prev.empty() ? std::numeric_limits<double>::quiet_NaN() : std::abs(c - prev[t]));
                total += weights[t] * c;
            }
            row.intensity = std::norm(total);
            prev = row.amplitudes;
            out.amplitudes.push_back(std::move(row));
        }
        out.pp_intensity_sum += out.amplitudes.back().intensity;
    }
    const WeightedComb<QuadraticInt> mu(std::move(mu_atoms), set.range());
    const auto gamma = pair_correlation(mu, mu, spec.at(spec.size() - 1), r_max);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CompensatedComplexSum s;
        for (const auto& a : gamma.atoms) {
            const double f = 1.0 - std::abs(qi_embed(a.point)) / r_max;
            if (f <= 0.0) continue;
            s.add(f * a.weight * std::conj(unit_phase(frac_phase(ks[i], a.point))));
        }
        ResidualRow row;
        row.k = ks[i];
        row.fejer_mean = s.value().real() / r_max;
        row.intensity = out.amplitudes[(i + 1) * spec.size() - 1].intensity;
        row.residual = row.fejer_mean - row.intensity;
        out.residuals.push_back(row);
    }
    return out;
}

} // namespace aperiodic
