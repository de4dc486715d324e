#pragma once

#ifdef __FAST_MATH__
#error "-ffast-math removes the compensation terms"
#endif

#include <cmath>
#include <complex>

namespace aperiodic {

/// Neumaier-compensated accumulator. Results depend only on the order of
/// `add` calls, so a fixed iteration order gives bit-reproducible sums.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(std::complex<double> z) noexcept {
        re_.add(z.real());
        im_.add(z.imag());
    }
    std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

} // namespace aperiodic
