#pragma once

// Fibonacci cut-and-project scheme (R, R, L) with L the Minkowski embedding of
// Z[tau]. The lattice has density 1/sqrt5, so dens(model set) = vol(W)/sqrt5.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "aperiodic/error.hpp"
#include "aperiodic/points.hpp"
#include "aperiodic/zroot5.hpp"

namespace aperiodic {

inline constexpr double kLatticeDensity = 1.0 / kSqrt5;

using Endpoint = std::variant<QuadraticInt, double>;

inline double endpoint_value(const Endpoint& e) {
    if (const auto* q = std::get_if<QuadraticInt>(&e)) return qi_embed(*q);
    return std::get<double>(e);
}

/// sign(y - e), exact when e is a Z[tau] endpoint.
inline int compare_to_endpoint(const QuadraticInt& y, const Endpoint& e) {
    if (const auto* q = std::get_if<QuadraticInt>(&e)) return (y - *q).sign();
    const double v = qi_embed(y), d = std::get<double>(e);
    return (v > d) - (v < d);
}

inline int compare_endpoints(const Endpoint& a, const Endpoint& b) {
    if (const auto* qa = std::get_if<QuadraticInt>(&a)) {
        if (const auto* qb = std::get_if<QuadraticInt>(&b)) return (*qa - *qb).sign();
    }
    const double x = endpoint_value(a), y = endpoint_value(b);
    return (x > y) - (x < y);
}

inline Endpoint shift_endpoint(const Endpoint& e, const QuadraticInt& s) {
    if (const auto* q = std::get_if<QuadraticInt>(&e)) return *q + s;
    return std::get<double>(e) + qi_embed(s);
}

struct WindowInterval {
    Endpoint lo = 0.0;
    Endpoint hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = false;

    bool contains(const QuadraticInt& y) const {
        const int a = compare_to_endpoint(y, lo);
        const int b = compare_to_endpoint(y, hi);
        return (a > 0 || (a == 0 && lo_closed)) && (b < 0 || (b == 0 && hi_closed));
    }
    bool contains(double y) const {
        const double l = endpoint_value(lo), h = endpoint_value(hi);
        return (y > l || (y == l && lo_closed)) && (y < h || (y == h && hi_closed));
    }
    double volume() const {
        if (const auto* ql = std::get_if<QuadraticInt>(&lo)) {
            if (const auto* qh = std::get_if<QuadraticInt>(&hi)) return std::max(0.0, qi_embed(*qh - *ql));
        }
        return std::max(0.0, endpoint_value(hi) - endpoint_value(lo));
    }
};

/// Finite union of disjoint intervals in internal space. Construction sorts the
/// pieces, drops empty ones and merges overlapping or touching ones.
class Window {
public:
    Window() = default;
    explicit Window(std::vector<WindowInterval> parts) {
        std::vector<WindowInterval> kept;
        for (auto& p : parts) {
            const int c = compare_endpoints(p.lo, p.hi);
            if (c < 0 || (c == 0 && p.lo_closed && p.hi_closed)) kept.push_back(std::move(p));
        }
        std::sort(kept.begin(), kept.end(), [](const WindowInterval& x, const WindowInterval& y) {
            const int c = compare_endpoints(x.lo, y.lo);
            return c < 0 || (c == 0 && x.lo_closed && !y.lo_closed);
        });
        for (auto& p : kept) {
            if (!parts_.empty()) {
                auto& cur = parts_.back();
                const int c = compare_endpoints(p.lo, cur.hi);
                if (c < 0 || (c == 0 && (cur.hi_closed || p.lo_closed))) {
                    const int d = compare_endpoints(p.hi, cur.hi);
                    if (d > 0 || (d == 0 && p.hi_closed)) {
                        cur.hi = p.hi;
                        cur.hi_closed = p.hi_closed;
                    }
                    continue;
                }
            }
            parts_.push_back(std::move(p));
        }
    }

    static Window interval(Endpoint lo, Endpoint hi, bool lo_closed = true, bool hi_closed = false) {
        return Window({WindowInterval{std::move(lo), std::move(hi), lo_closed, hi_closed}});
    }

    const std::vector<WindowInterval>& intervals() const noexcept { return parts_; }
    bool empty() const noexcept { return parts_.empty(); }

    double volume() const {
        double v = 0.0;
        for (const auto& p : parts_) v += p.volume();
        return v;
    }
    bool contains(const QuadraticInt& y) const {
        return std::any_of(parts_.begin(), parts_.end(), [&](const auto& p) { return p.contains(y); });
    }
    bool contains(double y) const {
        return std::any_of(parts_.begin(), parts_.end(), [&](const auto& p) { return p.contains(y); });
    }

    Window translated(const QuadraticInt& s) const {
        std::vector<WindowInterval> out;
        for (const auto& p : parts_) out.push_back({shift_endpoint(p.lo, s), shift_endpoint(p.hi, s), p.lo_closed, p.hi_closed});
        return Window(std::move(out));
    }
    Window with_closure(bool lo_closed, bool hi_closed) const {
        std::vector<WindowInterval> out;
        for (const auto& p : parts_) out.push_back({p.lo, p.hi, lo_closed, hi_closed});
        return Window(std::move(out));
    }

private:
    std::vector<WindowInterval> parts_;
};

/// One window per type, all in the same Fibonacci scheme.
struct ModelSetSpec {
    std::vector<std::string> types;
    std::vector<Window> windows;

    const Window& window(std::string_view type) const {
        for (std::size_t i = 0; i < types.size(); ++i)
            if (types[i] == type) return windows[i];
        throw DomainError("no window for type '" + std::string(type) + "'");
    }
};

// tau - 2, tau - 1 and -1 as exact endpoints.
inline ModelSetSpec fibonacci_windows() {
    return {{"a", "b"},
            {Window::interval(QuadraticInt{-2, 1}, QuadraticInt{-1, 1}),
             Window::interval(QuadraticInt{-1, 0}, QuadraticInt{-2, 1})}};
}

inline ModelSetSpec twisted_fibonacci_windows() {
    const auto f = fibonacci_windows();
    return {{"a", "a_", "b", "b_"}, {f.windows[0], f.windows[0], f.windows[1], f.windows[1]}};
}

namespace detail {

inline void check_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": unbounded input");
}

/// All (m, n) with m + n tau in [plo, phi] and m + n(1 - tau) in [ilo, ihi] up to a
/// small real margin; callers filter exactly.
template <class F>
void enumerate_strip(double plo, double phi, double ilo, double ihi, F&& visit) {
    constexpr double kMargin = 1e-9;
    if (phi < plo || ihi < ilo) return;
    const auto n_lo = static_cast<std::int64_t>(std::floor((plo - ihi) / kSqrt5)) - 1;
    const auto n_hi = static_cast<std::int64_t>(std::ceil((phi - ilo) / kSqrt5)) + 1;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const double nd = static_cast<double>(n);
        const double lo = std::max(plo - nd * kTau, ilo - nd * (1.0 - kTau)) - kMargin;
        const double hi = std::min(phi - nd * kTau, ihi - nd * (1.0 - kTau)) + kMargin;
        if (hi < lo) continue;
        const auto m_lo = static_cast<std::int64_t>(std::ceil(lo)) - 1;
        const auto m_hi = static_cast<std::int64_t>(std::floor(hi)) + 1;
        for (std::int64_t m = m_lo; m <= m_hi; ++m) visit(QuadraticInt{m, n});
    }
}

} // namespace detail

/// Model set points x in Z[tau] with embed(x) in the closed range and x* in W, sorted.
inline std::vector<QuadraticInt> cut_and_project(const Window& w, const Interval& range) {
    detail::check_finite(range.lo, "cut_and_project");
    detail::check_finite(range.hi, "cut_and_project");
    std::vector<QuadraticInt> out;
    for (const auto& part : w.intervals()) {
        const double u = endpoint_value(part.lo), v = endpoint_value(part.hi);
        detail::check_finite(u, "cut_and_project");
        detail::check_finite(v, "cut_and_project");
        detail::enumerate_strip(range.lo, range.hi, u, v, [&](const QuadraticInt& x) {
            if (range.contains(qi_embed(x)) && part.contains(qi_star(x))) out.push_back(x);
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline double model_set_density(const Window& w) { return w.volume() * kLatticeDensity; }

/// Module points (a + b tau)/sqrt5 with |k| <= k_max and |k*| <= kstar_max, ordered
/// by |k|, then k, then (a, b).
inline std::vector<FourierModulePoint> fourier_module(double k_max, double kstar_max) {
    if (!(k_max > 0.0) || !(kstar_max > 0.0)) throw DomainError("fourier_module: bounds must be positive");
    detail::check_finite(k_max, "fourier_module");
    detail::check_finite(kstar_max, "fourier_module");
    std::vector<FourierModulePoint> out;
    // k sqrt5 = a + b tau and -k* sqrt5 = a + b (1 - tau): the same strip as a model set.
    detail::enumerate_strip(-k_max * kSqrt5, k_max * kSqrt5, -kstar_max * kSqrt5, kstar_max * kSqrt5,
                            [&](const QuadraticInt& x) {
                                const FourierModulePoint k{x.m, x.n};
                                if (std::abs(k.value()) <= k_max && std::abs(k.star_value()) <= kstar_max) {
                                    out.push_back(k);
                                }
                            });
    std::sort(out.begin(), out.end(), [](const FourierModulePoint& x, const FourierModulePoint& y) {
        const double ax = std::abs(x.value()), ay = std::abs(y.value());
        if (ax != ay) return ax < ay;
        if (x.value() != y.value()) return x.value() < y.value();
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    return out;
}

/// (1/sqrt5) * integral over W of e^{2 pi i kstar y} dy, for a real internal wavenumber.
inline std::complex<double> window_transform(const Window& w, double kstar) {
    std::complex<double> sum{};
    const double omega = 2.0 * std::numbers::pi * kstar;
    for (const auto& p : w.intervals()) {
        const double len = p.volume();
        const double mid = 0.5 * (endpoint_value(p.lo) + endpoint_value(p.hi));
        const double half = 0.5 * omega * len;
        const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
        sum += std::polar(len * sinc, omega * mid);
    }
    return sum * kLatticeDensity;
}

/// Fourier-Bohr amplitude of the model set comb at a module point; the e^{+2 pi i k* y}
/// sign follows from k x + k* x* being an integer.
inline std::complex<double> window_amplitude(const Window& w, const FourierModulePoint& k) {
    if (k.is_zero()) return model_set_density(w);
    return window_transform(w, k.star_value());
}

struct TypeCalibration {
    std::string type;
    bool ok = false;
    Window window;
    QuadraticInt shift;  // internal-space translate applied to the configured window
    bool lo_closed = true;
    bool hi_closed = false;
    std::vector<QuadraticInt> offending;  // with the default closure, if !ok (first 10)
};

struct CalibrationResult {
    bool ok = true;
    std::vector<TypeCalibration> types;

    ModelSetSpec spec() const {
        ModelSetSpec s;
        for (const auto& t : types) {
            s.types.push_back(t.type);
            s.windows.push_back(t.window);
        }
        return s;
    }
};

/// Picks, per type, the first (shift, closure) for which every point of the set up
/// to check_R has its star image inside the window. Closures are tried in the order
/// [lo,hi), [lo,hi], (lo,hi], (lo,hi). Failure is reported, never patched.
inline CalibrationResult calibrate_windows(const TypedPointSet<QuadraticInt>& set, const ModelSetSpec& spec,
                                           double check_R = 1e3,
                                           const std::vector<QuadraticInt>& shifts = {QuadraticInt{}}) {
    constexpr std::pair<bool, bool> kClosures[] = {{true, false}, {true, true}, {false, true}, {false, false}};
    CalibrationResult result;
    for (std::size_t t = 0; t < set.type_count(); ++t) {
        const auto& name = set.types()[t];
        const Window& base = spec.window(name);
        std::vector<QuadraticInt> pts;
        for (const auto& x : set.points(t)) {
            if (qi_embed(x) <= check_R) pts.push_back(qi_star(x));
        }
        TypeCalibration cal;
        cal.type = name;
        for (const auto& s : shifts) {
            for (auto [lc, hc] : kClosures) {
                Window w = base.translated(s).with_closure(lc, hc);
                if (std::all_of(pts.begin(), pts.end(), [&](const QuadraticInt& y) { return w.contains(y); })) {
                    cal.ok = true;
                    cal.window = std::move(w);
                    cal.shift = s;
                    cal.lo_closed = lc;
                    cal.hi_closed = hc;
                    break;
                }
            }
            if (cal.ok) break;
        }
        if (!cal.ok) {
            cal.window = base;
            for (const auto& x : set.points(t)) {
                if (qi_embed(x) > check_R) break;
                if (!base.contains(qi_star(x))) cal.offending.push_back(x);
                if (cal.offending.size() == 10) break;
            }
            result.ok = false;
        }
        result.types.push_back(std::move(cal));
    }
    return result;
}

} // namespace aperiodic
