#include <gtest/gtest.h>

#include "aperiodic/acceptance.hpp"
#include "aperiodic/stochastic.hpp"

using namespace aperiodic;
using Q = QuadraticInt;

TEST(Bernoulli, ReproducibleAndExtending) {
    const auto a = bernoulli_gas(0.6, 1000, RngSpec{42, 0});
    const auto b = bernoulli_gas(0.6, 1000, RngSpec{42, 0});
    const auto big = bernoulli_gas(0.6, 5000, RngSpec{42, 0});
    EXPECT_EQ(a.points(0), b.points(0));
    for (const auto& x : a.points(0)) EXPECT_TRUE(std::binary_search(big.points(0).begin(), big.points(0).end(), x));
    EXPECT_NE(a.points(0), bernoulli_gas(0.6, 1000, RngSpec{43, 0}).points(0));
    EXPECT_EQ(bernoulli_gas(1.0, 10, RngSpec{1, 0}).size(), 21u);
    EXPECT_EQ(bernoulli_gas(0.0, 10, RngSpec{1, 0}).size(), 0u);
    EXPECT_THROW((void)bernoulli_gas(1.5, 10, RngSpec{}), DomainError);
    EXPECT_THROW((void)bernoulli_gas(0.5, -1, RngSpec{}), DomainError);
}

TEST(Bernoulli, DensityEstimatorIsUnbiased) {
    const double p = 0.37;
    const std::int64_t N = 100000;
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 32; ++s) {
        const auto g = bernoulli_gas(p, N, RngSpec{s, 0});
        mean += static_cast<double>(g.size()) / static_cast<double>(2 * N + 1);
    }
    EXPECT_NEAR(mean / 32.0, p, 5e-4);
}

TEST(Bernoulli, AutocorrelationTargets) {
    const double p = 0.6;
    const auto rep = bernoulli_verify(p, 200000, RngSpec{42, 0}, 10);
    EXPECT_LT(rep.gamma0_error, 5e-3);
    EXPECT_LT(rep.gamma_off_error, 5e-3);
    EXPECT_LT(rep.zero0_error, 5e-3);
    EXPECT_LT(rep.zero_off_max, 5e-3);
    EXPECT_LT(rep.cross_sup, 5e-3);
    EXPECT_NEAR(rep.density, p, 5e-3);
}

TEST(RandomFibonacci, DegenerateLimitAndDensity) {
    const auto det = realize_geometric(fibonacci_rule(), "a", 1e4);
    const auto p1 = random_fibonacci(1.0, 1e4, RngSpec{7, 0});
    EXPECT_EQ(det.points(0), p1.points(0));
    EXPECT_EQ(det.points(1), p1.points(1));
    const auto half = random_fibonacci(0.5, 1e4, RngSpec{7, 0});
    EXPECT_NEAR(total_density(half), kTau / kSqrt5, 0.01 * kTau / kSqrt5);
    EXPECT_EQ(half.points(0), random_fibonacci(0.5, 1e4, RngSpec{7, 0}).points(0));
}

TEST(RandomFibonacci, EmpiricalAmplitudes) {
    // p = 1: amplitudes reproduce the model-set values
    const auto ks = acceptance::random_fibonacci_kset();
    const auto det = random_fibonacci(1.0, 1e4, RngSpec{7, 0});
    const auto es = empirical_pp_split(det, ks, AveragingSpec(AveragingShape::OneSided, {5e3, 1e4}), {1.0, 1.0});
    const auto spec = fibonacci_windows();
    for (const auto& row : es.amplitudes) {
        if (row.R != 1e4) continue;
        EXPECT_LT(std::abs(row.amplitudes[0] - window_amplitude(spec.window("a"), row.k)), 0.01);
        EXPECT_LT(std::abs(row.amplitudes[1] - window_amplitude(spec.window("b"), row.k)), 0.01);
    }
    // k = 0 gives the measured density
    const auto half = random_fibonacci(0.5, 1e4, RngSpec{7, 0});
    const auto e0 = empirical_pp_split(half, {FourierModulePoint{}}, AveragingSpec(AveragingShape::OneSided, {1e4}), {1.0, 1.0});
    EXPECT_NEAR(e0.amplitudes[0].amplitudes[0].real() + e0.amplitudes[0].amplitudes[1].real(), total_density(half), 1e-3);
    EXPECT_EQ(e0.residuals.size(), 1u);
    EXPECT_THROW((void)empirical_pp_split(half, ks, AveragingSpec(), {1.0}), DomainError);
}

TEST(RandomFibonacci, CauchyStabilisation) {
    const auto set = random_fibonacci(0.5, 1e4, RngSpec{7, 0});
    const auto es = empirical_pp_split(set, acceptance::random_fibonacci_kset(),
                                       AveragingSpec(AveragingShape::OneSided, {5e3, 1e4}), {1.0, 1.0});
    for (const auto& row : es.amplitudes) {
        if (row.R == 5e3) {
            for (double d : row.cauchy_diff) EXPECT_TRUE(std::isnan(d));
        } else {
            for (double d : row.cauchy_diff) EXPECT_LE(d, 0.02);
        }
    }
}
