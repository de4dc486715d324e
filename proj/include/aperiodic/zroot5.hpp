#pragma once

// Exact arithmetic in the ring Z[tau], tau^2 = tau + 1, together with the
// Galois conjugation (star map) and characters evaluated on module points.

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>

#include "aperiodic/error.hpp"

namespace aperiodic {

inline constexpr double kTau = std::numbers::phi;          // correctly rounded
inline constexpr double kTauTail = -5.432115203682506e-17;  // tau - kTau
inline constexpr double kSqrt5 = 2.23606797749979;          // correctly rounded
inline constexpr double kSqrt5Tail = -1.0864230407365012e-16;
inline constexpr const char* kSqrt5Decimal = "2.236067977499789696409173668731276235440618";

namespace detail {

// round(sqrt(5)/10 * 2^128), i.e. Q0.128 fixed point. Must agree with kSqrt5Decimal.
inline constexpr unsigned __int128 kSqrt5Over10Q128 =
    (static_cast<unsigned __int128>(0x393e4b8b7fdbb26aULL) << 64) | 0xca528ce01295f4d7ULL;

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* op) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw OverflowError(std::string(op) + ": " + std::to_string(a) + " + " + std::to_string(b));
    }
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b, const char* op) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) {
        throw OverflowError(std::string(op) + ": " + std::to_string(a) + " - " + std::to_string(b));
    }
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* op) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw OverflowError(std::string(op) + ": " + std::to_string(a) + " * " + std::to_string(b));
    }
    return r;
}

/// m + n*tau in double, using a two-term tau so the only rounding is the final one
/// (for |m|, |n| < 2^53).
inline double embed_pair(std::int64_t m, std::int64_t n, double tau_hi, double tau_lo) {
    const double nd = static_cast<double>(n);
    const double p = nd * tau_hi;
    const double e = std::fma(nd, tau_hi, -p);
    return (static_cast<double>(m) + p) + (e + nd * tau_lo);
}

/// Exact sign of m + n*tau, evaluated as sign(u + v*sqrt5) with u = 2m+n, v = n.
inline int sign_of(__int128 m, __int128 n) {
    const __int128 u = 2 * m + n;
    const __int128 v = n;
    const int su = (u > 0) - (u < 0);
    const int sv = (v > 0) - (v < 0);
    if (su == 0) return sv;
    if (sv == 0 || su == sv) return su;
    const unsigned __int128 au = static_cast<unsigned __int128>(u < 0 ? -u : u);
    const unsigned __int128 av = static_cast<unsigned __int128>(v < 0 ? -v : v);
    constexpr unsigned __int128 kMaxU = ~static_cast<unsigned __int128>(0) >> 64;  // 2^64 - 1
    constexpr unsigned __int128 kMaxV = static_cast<unsigned __int128>(1) << 62;
    if (au > kMaxU || av >= kMaxV) {
        throw OverflowError("sign_of: operands exceed exact comparison range");
    }
    const unsigned __int128 uu = au * au;
    const unsigned __int128 vv = 5 * av * av;
    // u and v*sqrt5 have opposite signs; the larger magnitude wins.
    if (uu > vv) return su;
    return sv;  // uu == vv is impossible for v != 0 (sqrt5 irrational)
}

} // namespace detail

/// Exact element m + n*tau of Z[tau]. Plain integers are the n == 0 slice.
/// Ordering is by embedded real value, computed exactly.
struct QuadraticInt {
    std::int64_t m = 0;
    std::int64_t n = 0;

    constexpr QuadraticInt() = default;
    constexpr QuadraticInt(std::int64_t m_, std::int64_t n_) : m(m_), n(n_) {}
    static constexpr QuadraticInt integer(std::int64_t v) { return {v, 0}; }

    friend constexpr bool operator==(const QuadraticInt&, const QuadraticInt&) = default;

    friend std::strong_ordering operator<=>(const QuadraticInt& x, const QuadraticInt& y) {
        // embedding error scales with the coefficient sizes, not with the value
        const double ex = detail::embed_pair(x.m, x.n, kTau, kTauTail);
        const double ey = detail::embed_pair(y.m, y.n, kTau, kTauTail);
        const double scale = std::abs(double(x.m)) + std::abs(double(x.n)) * kTau +
                             std::abs(double(y.m)) + std::abs(double(y.n)) * kTau;
        const double tol = 1e-12 * std::max(1.0, scale);
        if (ex < ey - tol) return std::strong_ordering::less;
        if (ex > ey + tol) return std::strong_ordering::greater;
        const int s = detail::sign_of(static_cast<__int128>(x.m) - y.m, static_cast<__int128>(x.n) - y.n);
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend QuadraticInt operator+(const QuadraticInt& x, const QuadraticInt& y) {
        return {detail::checked_add(x.m, y.m, "qi_add"), detail::checked_add(x.n, y.n, "qi_add")};
    }
    friend QuadraticInt operator-(const QuadraticInt& x, const QuadraticInt& y) {
        return {detail::checked_sub(x.m, y.m, "qi_sub"), detail::checked_sub(x.n, y.n, "qi_sub")};
    }
    friend QuadraticInt operator-(const QuadraticInt& x) { return QuadraticInt{} - x; }
    friend QuadraticInt operator*(const QuadraticInt& x, const QuadraticInt& y);

    bool is_integer() const noexcept { return n == 0; }
    int sign() const { return detail::sign_of(m, n); }
    std::string to_string() const { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; }
};

/// (m1 + n1 tau)(m2 + n2 tau) = (m1 m2 + n1 n2) + (m1 n2 + m2 n1 + n1 n2) tau
inline QuadraticInt qi_mul(const QuadraticInt& x, const QuadraticInt& y) {
    using detail::checked_add;
    using detail::checked_mul;
    try {
        const std::int64_t nn = checked_mul(x.n, y.n, "qi_mul");
        const std::int64_t m = checked_add(checked_mul(x.m, y.m, "qi_mul"), nn, "qi_mul");
        const std::int64_t n = checked_add(
            checked_add(checked_mul(x.m, y.n, "qi_mul"), checked_mul(y.m, x.n, "qi_mul"), "qi_mul"), nn,
            "qi_mul");
        return {m, n};
    } catch (const OverflowError&) {
        throw OverflowError("qi_mul overflow: " + x.to_string() + " * " + y.to_string());
    }
}

inline QuadraticInt operator*(const QuadraticInt& x, const QuadraticInt& y) { return qi_mul(x, y); }

/// Galois conjugation sqrt5 -> -sqrt5: tau* = 1 - tau, so (m + n tau)* = (m + n) - n tau.
inline QuadraticInt qi_star(const QuadraticInt& x) {
    return {detail::checked_add(x.m, x.n, "qi_star"), detail::checked_sub(0, x.n, "qi_star")};
}

inline double qi_embed(const QuadraticInt& x) { return detail::embed_pair(x.m, x.n, kTau, kTauTail); }

/// Embedded value of the star image, m + n (1 - tau).
inline double qi_embed_star(const QuadraticInt& x) { return qi_embed(qi_star(x)); }

/// Module point k = (a + b tau)/sqrt5 of the Fourier module of Z[tau].
struct FourierModulePoint {
    std::int64_t a = 0;
    std::int64_t b = 0;

    friend constexpr bool operator==(const FourierModulePoint&, const FourierModulePoint&) = default;

    bool is_zero() const noexcept { return a == 0 && b == 0; }
    double value() const { return qi_embed({a, b}) / kSqrt5; }
    /// Star image -(a + b(1 - tau))/sqrt5; the sign comes from (1/sqrt5)* = -1/sqrt5.
    double star_value() const { return -qi_embed_star({a, b}) / kSqrt5; }
    FourierModulePoint operator-() const {
        return {detail::checked_sub(0, a, "fmp_neg"), detail::checked_sub(0, b, "fmp_neg")};
    }
    std::string to_string() const { return "(" + std::to_string(a) + "," + std::to_string(b) + ")/sqrt5"; }
};

/// Fractional part of k*x in [0, 1) for a module point k and x in Z[tau].
/// With A + B tau = (a + b tau)(m + n tau) one has k x = ((2A+B) sqrt5 + 5B)/10,
/// evaluated with a 128-bit fixed-point sqrt5/10; absolute error below 1e-18.
inline double frac_phase(const FourierModulePoint& k, const QuadraticInt& x) {
    QuadraticInt prod;
    try {
        prod = qi_mul({k.a, k.b}, x);
    } catch (const OverflowError&) {
        throw OverflowError("frac_phase overflow: k=" + k.to_string() + " x=" + x.to_string());
    }
    std::int64_t v;
    if (__builtin_mul_overflow(prod.m, std::int64_t{2}, &v) || __builtin_add_overflow(v, prod.n, &v)) {
        throw OverflowError("frac_phase overflow in 2A+B: k=" + k.to_string() + " x=" + x.to_string());
    }
    unsigned __int128 r = static_cast<unsigned __int128>(static_cast<__int128>(v)) * detail::kSqrt5Over10Q128;
    if (prod.n & 1) r += static_cast<unsigned __int128>(1) << 127;  // + B/2 mod 1
    return static_cast<double>(static_cast<std::uint64_t>(r >> 75)) * 0x1p-53;
}

/// e^{2 pi i phase} with phase reduced to [-1/2, 1/2).
inline std::complex<double> unit_phase(double phase) {
    phase -= std::floor(phase + 0.5);
    const double angle = 2.0 * std::numbers::pi * phase;
    return {std::cos(angle), std::sin(angle)};
}

} // namespace aperiodic

template <>
struct std::hash<aperiodic::QuadraticInt> {
    std::size_t operator()(const aperiodic::QuadraticInt& x) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(x.m) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(x.n) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};
