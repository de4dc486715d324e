#include <gtest/gtest.h>

#include "aperiodic/points.hpp"
#include "aperiodic/random.hpp"

using namespace aperiodic;

TEST(Interval, BasicOperations) {
    const Interval a{0.0, 10.0};
    EXPECT_TRUE(a.contains(0.0));
    EXPECT_TRUE(a.contains(10.0));
    EXPECT_FALSE(a.contains(10.5));
    EXPECT_TRUE(a.covers({1.0, 9.0}));
    EXPECT_FALSE(a.covers({-1.0, 9.0}));
    EXPECT_EQ(a.negated().lo, -10.0);
    EXPECT_EQ(a.widened(2.0).hi, 12.0);
    EXPECT_EQ(a.intersect({5.0, 20.0}).length(), 5.0);
    EXPECT_TRUE((Interval{1.0, 0.0}).empty());
}

TEST(TypedPointSet, ValidatesOrderRangeAndDisjointness) {
    using Q = QuadraticInt;
    EXPECT_NO_THROW(TypedPointSet<Q>({"a", "b"}, {{Q{0, 0}, Q{0, 1}}, {Q{1, 0}}}, Interval{0, 3}));
    EXPECT_THROW(TypedPointSet<Q>({"a"}, {{Q{0, 1}, Q{0, 0}}}, Interval{0, 3}), DomainError);
    EXPECT_THROW(TypedPointSet<Q>({"a"}, {{Q{5, 0}}}, Interval{0, 3}), DomainError);
    EXPECT_THROW(TypedPointSet<Q>({"a", "b"}, {{Q{1, 0}}, {Q{1, 0}}}, Interval{0, 3}), DomainError);
    EXPECT_THROW(TypedPointSet<Q>({"a"}, {}, Interval{0, 3}), DomainError);
}

TEST(TypedPointSet, InexactPointsMergeAtTolerance) {
    EXPECT_THROW(TypedPointSet<double>({"a", "b"}, {{1.0}, {1.0 + 1e-12}}, Interval{0, 3}), DomainError);
    EXPECT_NO_THROW(TypedPointSet<double>({"a", "b"}, {{1.0}, {1.0 + 1e-6}}, Interval{0, 3}));
    EXPECT_FALSE(TypedPointSet<double>::exact());
    EXPECT_TRUE(TypedPointSet<QuadraticInt>::exact());
}

TEST(TypedPointSet, DensitiesAndAccessors) {
    using Q = QuadraticInt;
    const TypedPointSet<Q> s({"a", "b"}, {{Q{0, 0}, Q{2, 0}}, {Q{1, 0}}}, Interval{0, 4});
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.type_index("b"), 1u);
    EXPECT_THROW((void)s.type_index("c"), DomainError);
    EXPECT_EQ(s.all_points(), (std::vector<Q>{Q{0, 0}, Q{1, 0}, Q{2, 0}}));
    const auto d = densities(s);
    EXPECT_DOUBLE_EQ(d[0], 0.5);
    EXPECT_DOUBLE_EQ(total_density(s), 0.75);
    const TypedPointSet<Q> degenerate({"a"}, {{Q{0, 0}}}, Interval{0, 0});
    EXPECT_THROW((void)densities(degenerate), DomainError);
}

TEST(CounterRng, PureFunctionOfCounters) {
    const CounterRng a({42, 0}), b({42, 0}), c({42, 1}), d({43, 0});
    for (std::uint64_t i = 0; i < 100; ++i) {
        EXPECT_EQ(a.bits(3, i), b.bits(3, i));
        EXPECT_NE(a.bits(3, i), c.bits(3, i));
        EXPECT_NE(a.bits(3, i), d.bits(3, i));
        EXPECT_NE(a.bits(3, i), a.bits(4, i));
        const double u = a.uniform(0, i);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(CounterRng, UniformMoments) {
    const CounterRng g({1, 0});
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = g.uniform(0, static_cast<std::uint64_t>(i));
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 5e-3);
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 5e-3);
}
