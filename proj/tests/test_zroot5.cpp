#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

#include "aperiodic/summation.hpp"
#include "aperiodic/zroot5.hpp"

using namespace aperiodic;
using Big = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<80>>;

namespace {

Big big_sqrt5() { return Big(kSqrt5Decimal); }
Big big_tau() { return (1 + sqrt(Big(5))) / 2; }
Big big_value(const QuadraticInt& x) { return Big(x.m) + Big(x.n) * big_tau(); }

Big big_frac(const Big& v) { return v - floor(v); }

} // namespace

TEST(QuadraticInt, TauSquaredIsTauPlusOne) {
    const QuadraticInt tau{0, 1};
    EXPECT_EQ(tau * tau, tau + QuadraticInt::integer(1));
    EXPECT_EQ((QuadraticInt{-1, 1} * tau), QuadraticInt::integer(1));  // tau^{-1} = tau - 1
}

TEST(QuadraticInt, RingLawsOnRandomElements) {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::int64_t> d(-100000, 100000);
    for (int i = 0; i < 2000; ++i) {
        const QuadraticInt x{d(gen), d(gen)}, y{d(gen), d(gen)}, z{d(gen), d(gen)};
        EXPECT_EQ(x * y, y * x);
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x - x, QuadraticInt{});
    }
}

TEST(QuadraticInt, MultiplicationMatchesHighPrecisionProduct) {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
    for (int i = 0; i < 500; ++i) {
        const QuadraticInt x{d(gen), d(gen)}, y{d(gen), d(gen)};
        const Big diff = big_value(x * y) - big_value(x) * big_value(y);
        EXPECT_LT(abs(diff), Big("1e-40"));
    }
}

TEST(QuadraticInt, OverflowReportsOperands) {
    const QuadraticInt big{std::int64_t{1} << 62, 1};
    try {
        (void)(big * big);
        FAIL() << "expected overflow";
    } catch (const OverflowError& e) {
        EXPECT_EQ(e.kind(), std::string("overflow"));
        EXPECT_NE(std::string(e.what()).find(big.to_string()), std::string::npos);
    }
    EXPECT_THROW((void)(QuadraticInt{INT64_MAX, 0} + QuadraticInt{1, 0}), OverflowError);
    EXPECT_THROW((void)qi_star(QuadraticInt{INT64_MAX, 1}), OverflowError);
}

TEST(QuadraticInt, StarIsRingHomomorphism) {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::int64_t> d(-5000, 5000);
    EXPECT_EQ(qi_star(QuadraticInt{0, 1}), (QuadraticInt{1, -1}));
    for (int i = 0; i < 1000; ++i) {
        const QuadraticInt x{d(gen), d(gen)}, y{d(gen), d(gen)};
        EXPECT_EQ(qi_star(x * y), qi_star(x) * qi_star(y));
        EXPECT_EQ(qi_star(x + y), qi_star(x) + qi_star(y));
        EXPECT_EQ(qi_star(qi_star(x)), x);
    }
}

TEST(QuadraticInt, EmbeddingIsCorrectlyRounded) {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
    for (int i = 0; i < 1000; ++i) {
        const QuadraticInt x{d(gen), d(gen)};
        const Big exact = big_value(x);
        const double got = qi_embed(x);
        const double ulp = std::nextafter(std::abs(got), INFINITY) - std::abs(got);
        EXPECT_LE(abs(Big(got) - exact), Big(ulp)) << x.to_string();
    }
}

TEST(QuadraticInt, OrderingMatchesHighPrecisionIncludingNearTies) {
    std::vector<QuadraticInt> xs;
    // F_{k+1} - F_k tau -> 0 with alternating sign: the hardest comparisons.
    std::int64_t a = 1, b = 1;
    for (int k = 0; k < 85; ++k) {
        xs.push_back({b, -a});
        xs.push_back({-b, a});
        const std::int64_t c = a + b;
        a = b;
        b = c;
    }
    std::mt19937_64 gen(13);
    std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
    for (int i = 0; i < 200; ++i) xs.push_back({d(gen), d(gen)});
    xs.push_back({});
    for (const auto& x : xs) {
        for (const auto& y : xs) {
            const Big dx = big_value(x), dy = big_value(y);
            const int expect = dx < dy ? -1 : (dx > dy ? 1 : 0);
            const auto c = x <=> y;
            const int got = c < 0 ? -1 : (c > 0 ? 1 : 0);
            ASSERT_EQ(got, expect) << x.to_string() << " vs " << y.to_string();
        }
        const int s = x.sign();
        EXPECT_EQ(s, big_value(x) < 0 ? -1 : (big_value(x) > 0 ? 1 : 0));
    }
}

TEST(QuadraticInt, ConstantsAgreeWithDecimalExpansion) {
    const Big s = big_sqrt5();
    EXPECT_LT(abs(Big(kSqrt5) + Big(kSqrt5Tail) - s), Big("1e-30"));
    EXPECT_LT(abs(Big(kTau) + Big(kTauTail) - big_tau()), Big("1e-30"));
    EXPECT_LT(abs(s * s - 5), Big("1e-40"));
}

TEST(FourierModule, ValueAndStarValue) {
    const FourierModulePoint k{1, 2};
    const Big v = (Big(1) + 2 * big_tau()) / big_sqrt5();
    const Big vs = -(Big(1) + 2 * (1 - big_tau())) / big_sqrt5();
    EXPECT_NEAR(k.value(), v.convert_to<double>(), 1e-15);
    EXPECT_NEAR(k.star_value(), vs.convert_to<double>(), 1e-15);
    EXPECT_EQ(-k, (FourierModulePoint{-1, -2}));
    EXPECT_TRUE((FourierModulePoint{}).is_zero());
}

TEST(FracPhase, MatchesHighPrecisionForLargeArguments) {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<std::int64_t> dk(-50, 50);
    std::uniform_int_distribution<std::int64_t> dx(-(std::int64_t{1} << 30), std::int64_t{1} << 30);
    for (int i = 0; i < 2000; ++i) {
        const FourierModulePoint k{dk(gen), dk(gen)};
        const QuadraticInt x{dx(gen), dx(gen)};
        const Big kv = (Big(k.a) + Big(k.b) * big_tau()) / big_sqrt5();
        const double expect = big_frac(kv * big_value(x)).convert_to<double>();
        double got = frac_phase(k, x);
        ASSERT_GE(got, 0.0);
        ASSERT_LT(got, 1.0);
        double diff = std::abs(got - expect);
        diff = std::min(diff, 1.0 - diff);  // wrap-around at integers
        ASSERT_LT(diff, 1e-15) << k.to_string() << " " << x.to_string();
    }
}

TEST(FracPhase, IntegerProductsGiveZeroOrHalf) {
    // (-1 + 2 tau)/sqrt5 = 1 exactly
    EXPECT_EQ(frac_phase({-1, 2}, QuadraticInt::integer(7)), 0.0);
    EXPECT_EQ(frac_phase({-1, 2}, QuadraticInt{0, 0}), 0.0);
    EXPECT_NEAR(frac_phase({-1, 2}, QuadraticInt{3, 1}), kTau - 1.0, 1e-15);
    EXPECT_THROW((void)frac_phase({INT64_MAX / 2, 1}, QuadraticInt{INT64_MAX / 2, 3}), OverflowError);
}

TEST(FracPhase, UnitPhaseIsOnTheCircle) {
    for (double p : {0.0, 0.25, 0.5, 0.75, 0.999999}) {
        const auto z = unit_phase(p);
        EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
    }
    EXPECT_NEAR(unit_phase(0.25).imag(), 1.0, 1e-15);
    EXPECT_NEAR(unit_phase(0.5).real(), -1.0, 1e-15);
}

TEST(Summation, CompensationRecoversCancelledTerms) {
    CompensatedSum s;
    s.add(1.0);
    s.add(1e100);
    s.add(1.0);
    s.add(-1e100);
    EXPECT_EQ(s.value(), 2.0);
    CompensatedSum t;
    for (int i = 0; i < 10; ++i) t.add(0.1);
    EXPECT_EQ(t.value(), 1.0);
}
