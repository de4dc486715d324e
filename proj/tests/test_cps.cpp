#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

#include "aperiodic/cps.hpp"
#include "aperiodic/eberlein.hpp"
#include "aperiodic/inflate.hpp"

using namespace aperiodic;
using Big = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<50>>;

namespace {

const Big& big_tau() {
    static const Big t = (1 + sqrt(Big(5))) / 2;
    return t;
}

// Brute force over a box of (m, n), evaluated in 50-digit arithmetic.
std::vector<QuadraticInt> scan(Big wlo, Big whi, bool lc, bool hc, double R) {
    std::vector<QuadraticInt> out;
    const auto nmax = static_cast<std::int64_t>(R) + 5;
    for (std::int64_t n = -nmax; n <= nmax; ++n) {
        for (std::int64_t m = -2 * nmax; m <= 2 * nmax; ++m) {
            const Big x = Big(m) + Big(n) * big_tau();
            if (x < 0 || x > Big(R)) continue;
            const Big y = Big(m) + Big(n) * (1 - big_tau());
            const bool in = (y > wlo || (lc && y == wlo)) && (y < whi || (hc && y == whi));
            if (in) out.push_back({m, n});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Window, NormalisationMergesAndDropsEmpty) {
    const Window w({WindowInterval{1.0, 2.0}, WindowInterval{0.0, 1.0}, WindowInterval{3.0, 3.0},
                    WindowInterval{0.5, 1.5}});
    ASSERT_EQ(w.intervals().size(), 1u);
    EXPECT_EQ(endpoint_value(w.intervals()[0].lo), 0.0);
    EXPECT_EQ(endpoint_value(w.intervals()[0].hi), 2.0);
    EXPECT_DOUBLE_EQ(w.volume(), 2.0);
    const Window gap({WindowInterval{0.0, 1.0, true, false}, WindowInterval{1.0, 2.0, false, true}});
    EXPECT_EQ(gap.intervals().size(), 2u);  // the point 1 is missing
    EXPECT_FALSE(gap.contains(1.0));
    EXPECT_TRUE(Window({WindowInterval{3.0, 3.0, true, true}}).contains(QuadraticInt::integer(3)));
}

TEST(Window, ExactEndpointsDecideBoundaryPoints) {
    const auto w = fibonacci_windows().window("a");  // [tau - 2, tau - 1)
    EXPECT_TRUE(w.contains(QuadraticInt{-2, 1}));
    EXPECT_FALSE(w.contains(QuadraticInt{-1, 1}));
    EXPECT_TRUE(w.with_closure(true, true).contains(QuadraticInt{-1, 1}));
    EXPECT_FALSE(w.with_closure(false, true).contains(QuadraticInt{-2, 1}));
    EXPECT_NEAR(w.volume(), 1.0, 1e-15);
    EXPECT_NEAR(fibonacci_windows().window("b").volume(), kTau - 1.0, 1e-15);
    const auto t = w.translated(QuadraticInt{1, 0});
    EXPECT_TRUE(t.contains(QuadraticInt{-1, 1}));
}

TEST(CutAndProject, MatchesHighPrecisionScan) {
    const auto spec = fibonacci_windows();
    const double R = 60.0;
    const auto a = cut_and_project(spec.window("a"), Interval{0, R});
    const auto b = cut_and_project(spec.window("b"), Interval{0, R});
    EXPECT_EQ(a, scan(big_tau() - 2, big_tau() - 1, true, false, R));
    EXPECT_EQ(b, scan(Big(-1), big_tau() - 2, true, false, R));
    const auto closed = cut_and_project(spec.window("a").with_closure(true, true), Interval{0, R});
    EXPECT_EQ(closed, scan(big_tau() - 2, big_tau() - 1, true, true, R));
    // a real-endpoint window
    const auto w = Window::interval(-0.3, 0.45);
    EXPECT_EQ(cut_and_project(w, Interval{0, R}), scan(Big(-0.3), Big(0.45), true, false, R));
}

TEST(CutAndProject, FibonacciWindowsReproduceTheInflation) {
    const double R = 1e4;
    const auto set = realize_geometric(fibonacci_rule(), "a", R);
    const auto spec = fibonacci_windows();
    EXPECT_EQ(cut_and_project(spec.window("a"), Interval{0, R}), set.points("a"));
    EXPECT_EQ(cut_and_project(spec.window("b"), Interval{0, R}), set.points("b"));
}

TEST(CutAndProject, CountingMatchesDensity) {
    const double R = 1e4;
    for (const auto& w : fibonacci_windows().windows) {
        const double count = static_cast<double>(cut_and_project(w, Interval{0, R}).size());
        EXPECT_NEAR(count / R, model_set_density(w), 0.02 * model_set_density(w));
    }
    const auto w = Window::interval(0.1, 0.9);
    EXPECT_NEAR(static_cast<double>(cut_and_project(w, Interval{0, R}).size()) / R, 0.8 / kSqrt5, 0.02 * 0.8 / kSqrt5);
    EXPECT_NEAR(model_set_density(fibonacci_windows().window("a")), 1.0 / kSqrt5, 1e-15);
    EXPECT_THROW((void)cut_and_project(w, Interval{0, INFINITY}), DomainError);
    EXPECT_TRUE(cut_and_project(Window{}, Interval{0, R}).empty());
}

TEST(FourierModule, EnumerationIsCompleteAndOrdered) {
    const double km = 3.0, ksm = 2.0;
    const auto ks = fourier_module(km, ksm);
    std::size_t brute = 0;
    for (std::int64_t a = -40; a <= 40; ++a)
        for (std::int64_t b = -40; b <= 40; ++b) {
            const FourierModulePoint k{a, b};
            if (std::abs(k.value()) <= km && std::abs(k.star_value()) <= ksm) ++brute;
        }
    EXPECT_EQ(ks.size(), brute);
    EXPECT_TRUE(ks.front().is_zero());
    for (std::size_t i = 1; i < ks.size(); ++i) EXPECT_LE(std::abs(ks[i - 1].value()), std::abs(ks[i].value()));
    for (const auto& k : ks) EXPECT_NE(std::find(ks.begin(), ks.end(), -k), ks.end());
    EXPECT_THROW((void)fourier_module(0.0, 1.0), DomainError);
}

TEST(WindowAmplitude, MatchesQuadrature) {
    const auto spec = fibonacci_windows();
    for (const auto& w : spec.windows) {
        for (const auto& k : fourier_module(3.0, 3.0)) {
            const double lo = endpoint_value(w.intervals()[0].lo), hi = endpoint_value(w.intervals()[0].hi);
            const int n = 4000;  // composite Simpson
            const double h = (hi - lo) / n;
            std::complex<double> s{};
            for (int i = 0; i <= n; ++i) {
                const double y = lo + i * h;
                const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                s += c * std::polar(1.0, 2.0 * std::numbers::pi * k.star_value() * y);
            }
            const auto quad = s * h / 3.0 / kSqrt5;
            EXPECT_LT(std::abs(window_amplitude(w, k) - quad), 1e-10) << k.to_string();
        }
    }
}

TEST(WindowAmplitude, BoundedByDensity) {
    std::mt19937_64 gen(2);
    std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
    const auto w = Window({WindowInterval{-0.7, -0.2}, WindowInterval{0.1, 0.4}});
    for (int i = 0; i < 1000; ++i) {
        const FourierModulePoint k{d(gen), d(gen)};
        EXPECT_LE(std::abs(window_amplitude(w, k)), model_set_density(w) * (1 + 1e-12));
    }
    EXPECT_EQ(window_amplitude(w, FourierModulePoint{}), model_set_density(w));
}

TEST(WindowAmplitude, SignConventionAgreesWithFourierBohrCoefficients) {
    const double R = 1e4;
    const auto w = fibonacci_windows().window("a");
    const auto comb = WeightedComb<QuadraticInt>::from_points(cut_and_project(w, Interval{0, R}), Interval{0, R});
    const FourierModulePoint k{1, 1};
    const auto c = fb_coefficient(comb, Wavevector{k}, Averaging{AveragingShape::OneSided, R});
    EXPECT_LT(std::abs(c - window_amplitude(w, k)), 0.01);
    EXPECT_GT(std::abs(c - std::conj(window_amplitude(w, k))), 0.05);  // the opposite sign is rejected
}

TEST(Calibration, FibonacciDefaultClosureSucceeds) {
    const auto set = realize_geometric(fibonacci_rule(), "a", 1e4);
    const auto cal = calibrate_windows(set, fibonacci_windows());
    ASSERT_TRUE(cal.ok);
    for (const auto& t : cal.types) {
        EXPECT_TRUE(t.lo_closed);
        EXPECT_FALSE(t.hi_closed);
        EXPECT_EQ(t.shift, QuadraticInt{});
    }
}

TEST(Calibration, MisplacedWindowsAreReportedAndShiftsRecover) {
    const auto set = realize_geometric(fibonacci_rule(), "a", 1e3);
    auto spec = fibonacci_windows();
    const QuadraticInt s{1, -1};  // star image of tau, a lattice translate
    for (auto& w : spec.windows) w = w.translated(s);
    const auto bad = calibrate_windows(set, spec);
    EXPECT_FALSE(bad.ok);
    EXPECT_FALSE(bad.types[0].offending.empty());
    EXPECT_LE(bad.types[0].offending.size(), 10u);
    const auto good = calibrate_windows(set, spec, 1e3, {QuadraticInt{}, -s});
    EXPECT_TRUE(good.ok);
    EXPECT_EQ(good.types[0].shift, -s);
}

TEST(Calibration, TwistedContainment) {
    const auto set = realize_geometric(twisted_fibonacci_rule(), "a", 1e4);
    const auto cal = calibrate_windows(set, twisted_fibonacci_windows(), 1e4);
    EXPECT_TRUE(cal.ok);
}
