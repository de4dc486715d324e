// Splits the twisted Fibonacci a-points into omega + nu and prints FB
// amplitudes and the cross-correlation sup norm.

#include <cstdio>

#include "aperiodic/aperiodic.hpp"

using namespace aperiodic;

int main() {
    const double R = 1e4;
    const auto set = realize_geometric(twisted_fibonacci_rule(), "a", R);
    const auto cal = calibrate_windows(set, twisted_fibonacci_windows());
    if (!cal.ok) {
        std::puts("calibration failed");
        return 1;
    }
    const auto split = split_model_sets(set, cal.spec());
    const auto& a = split.part("a");
    std::printf("alpha_a = %.5f\n", a.alpha);

    const Averaging A{AveragingShape::OneSided, R};
    const auto delta = WeightedComb<QuadraticInt>::from_points(set.points("a"), set.range());
    std::printf("%-18s %12s %12s %12s\n", "k", "|c_delta|", "|c_omega|", "|c_nu|");
    for (const auto& k : fourier_module(1.5, 1.5)) {
        const Wavevector kv{k};
        std::printf("%-18s %12.6f %12.6f %12.2e\n", k.to_string().c_str(), std::abs(fb_coefficient(delta, kv, A)),
                    std::abs(fb_coefficient(a.omega, kv, A)), std::abs(fb_coefficient(a.nu, kv, A)));
    }
    const auto rows = orthogonality_report(a.omega, a.nu, AveragingSpec(AveragingShape::OneSided, {1e2, 1e3, 1e4}), 20);
    for (const auto& r : rows) std::printf("R = %-8g sup |omega~ * nu| = %.2e\n", r.R, r.sup_omega_nu);
}
