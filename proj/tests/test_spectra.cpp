#include <gtest/gtest.h>

#include "aperiodic/acceptance.hpp"
#include "aperiodic/spectra.hpp"

using namespace aperiodic;
using Q = QuadraticInt;

TEST(Eta, RecursionMatchesDirectAverage) {
    const auto eta = tm_eta(64);
    ASSERT_EQ(eta.size(), 65u);
    EXPECT_EQ(eta[0], Rational(1));
    EXPECT_EQ(eta[1], Rational(-1, 3));
    EXPECT_EQ(eta[2], Rational(-1, 3));
    EXPECT_EQ(eta[3], Rational(1, 3));
    for (std::int64_t m = 0; m <= 64; ++m)
        EXPECT_NEAR(to_double(eta[static_cast<std::size_t>(m)]), acceptance::tm_eta_direct(m), 2e-3) << m;
    EXPECT_EQ(tm_eta(0).size(), 1u);
    EXPECT_THROW((void)tm_eta(-1), DomainError);
}

TEST(Riesz, CoefficientsApproachEta) {
    const auto eta = tm_eta(8);
    const auto c20 = riesz_coefficients(20);
    EXPECT_EQ(c20.denominator(), std::int64_t{1} << 20);
    for (std::int64_t m = 0; m <= 8; ++m) {
        const Rational d = c20.c(m) - eta[static_cast<std::size_t>(m)];
        EXPECT_LE(std::abs(to_double(d)), 1e-5) << m;
        EXPECT_EQ(c20.c(-m), c20.c(m));
    }
}

TEST(Riesz, SuccessiveDepthsHalve) {
    auto prev = riesz_coefficients(4);
    for (int L = 5; L <= 18; ++L) {
        const auto cur = riesz_coefficients(L);
        for (std::int64_t m = 0; m <= 8; ++m) {
            const double d = std::abs(to_double(cur.c(m) - prev.c(m)));
            EXPECT_LE(d, std::ldexp(1.0, -(L - 3))) << "L=" << L << " m=" << m;
        }
        prev = cur;
    }
}

TEST(Riesz, MatchesDirectProductAndIsNonnegative) {
    const int L = 10;
    const auto c = riesz_coefficients(L);
    const int grid = 1 << 14;
    for (int i = 0; i < grid; ++i) {
        const double k = static_cast<double>(i) / grid;
        double direct = 1.0;
        for (int l = 0; l < L; ++l) direct *= 1.0 - std::cos(2.0 * std::numbers::pi * std::ldexp(1.0, l) * k);
        const double via = c.evaluate(k);
        ASSERT_NEAR(via, direct, 1e-9) << k;
        ASSERT_GE(via, -1e-9) << k;
    }
    EXPECT_EQ(riesz_coefficients(0).numerator(0), 1);
    EXPECT_THROW((void)riesz_coefficients(25), DomainError);
    EXPECT_THROW((void)riesz_coefficients(-1), DomainError);
}

TEST(ThueMorse, PairPredictionsAndDecomposition) {
    EXPECT_DOUBLE_EQ(tm_pair_prediction("a", "a", 0), 0.5);
    EXPECT_DOUBLE_EQ(tm_pair_prediction("a", "b", 0), 0.0);
    EXPECT_DOUBLE_EQ(tm_pair_prediction("a", "b", 1), 0.25 * (1.0 + 1.0 / 3.0));
    EXPECT_THROW((void)tm_pair_prediction("a", "c", 1), DomainError);
    const double N = 1 << 18;
    const auto set = realize_geometric(thue_morse_rule(), "a", N);
    const auto split = split_lattice(set, {0.5, 0.5});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const auto rep = decomposition_report(set, split, i, j, Averaging{AveragingShape::OneSided, N}, 8);
            for (std::int64_t m = -8; m <= 8; ++m) {
                EXPECT_NEAR(rep.gamma.at(Q::integer(m)).real(), tm_pair_prediction(set.types()[i], set.types()[j], m), 2e-3);
                // omega~ omega = delta_Z / 4 in the limit
                EXPECT_NEAR(rep.s_part.at(Q::integer(m)).real(), 0.25, 2e-3);
            }
            EXPECT_LT(rep.identity_residual, 1e-12);
        }
}

TEST(Intensity, ZeroWavevectorGivesDensities) {
    const auto spec = fibonacci_windows();
    const auto rows = pp_intensity(spec, {1.0, 1.0}, {1.0, 1.0}, {FourierModulePoint{}});
    EXPECT_NEAR(rows[0].amplitudes[0].real(), 1.0 / kSqrt5, 1e-15);
    EXPECT_NEAR(rows[0].intensity, (kTau / kSqrt5) * (kTau / kSqrt5), 1e-14);
    EXPECT_THROW((void)pp_intensity(spec, {1.0}, {1.0, 1.0}, {}), DomainError);
}

TEST(Intensity, ConsistentPhaseAgainstMeasuredAmplitudes) {
    const double R = 1e4;
    const auto set = realize_geometric(twisted_fibonacci_rule(), "a", R);
    const auto spec = twisted_fibonacci_windows();
    const auto ks = acceptance::phase_kset();
    const std::vector<std::complex<double>> w{{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.5, 0.5}};
    const auto rows = pp_intensity(spec, {0.5, 0.5, 0.5, 0.5}, w, ks);
    const Averaging A{AveragingShape::OneSided, R};
    for (std::size_t i = 0; i < ks.size(); ++i) {
        std::complex<double> measured{};
        for (std::size_t t = 0; t < 4; ++t)
            measured += w[t] * fb_coefficient(WeightedComb<Q>::from_points(set.points(t), set.range()), Wavevector{ks[i]}, A);
        EXPECT_NEAR(std::norm(measured), rows[i].intensity, 0.01) << ks[i].to_string();
    }
}

TEST(Polarisation, DensityFormulaAtZero) {
    const double R = 1e4;
    const auto set = realize_geometric(fibonacci_rule(), "a", R);
    const auto a = WeightedComb<Q>::from_points(set.points(0), set.range());
    const auto b = WeightedComb<Q>::from_points(set.points(1), set.range());
    const auto pc = polarisation_zero_check(a, b, Averaging{AveragingShape::OneSided, R}, 50);
    EXPECT_NEAR(pc.dens_p, 1.0 / kSqrt5, 1e-3);
    EXPECT_LT(pc.residual / (pc.dens_p * pc.dens_q), 0.01);
    const auto z = WeightedComb<Q>::from_points({}, Interval{0, R});
    EXPECT_EQ(polarisation_zero_check(z, z, Averaging{AveragingShape::OneSided, R}, 5).c0, 0.0);
    EXPECT_THROW((void)polarisation_zero_check(a, b, Averaging{AveragingShape::OneSided, R}, 0), DomainError);
}
