#pragma once

// The verification suites: each criterion runs a fixed experiment and reports
// measured values against pinned thresholds.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "aperiodic/cps.hpp"
#include "aperiodic/eberlein.hpp"
#include "aperiodic/inflate.hpp"
#include "aperiodic/spectra.hpp"
#include "aperiodic/stochastic.hpp"

namespace aperiodic::acceptance {

using nlohmann::json;

struct Check {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", "<", ">=", "==" or "in"
    double upper = 0.0;    // upper end for "in"
    bool pass = false;
};

struct Criterion {
    Criterion(int i, std::string t) : id(i), title(std::move(t)) {}

    int id = 0;
    std::string title;
    json params = json::object();
    json details = json::object();
    std::vector<Check> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

inline Check at_most(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, "<=", 0.0, measured <= threshold};
}
inline Check less_than(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, "<", 0.0, measured < threshold};
}
inline Check within(std::string name, double measured, double lo, double hi) {
    return {std::move(name), measured, lo, "in", hi, measured >= lo && measured <= hi};
}
inline Check equals(std::string name, double measured, double expected) {
    return {std::move(name), measured, expected, "==", 0.0, measured == expected};
}

// ---- preset wavevector sets --------------------------------------------------

inline std::vector<FourierModulePoint> nonzero_module_points(double k_max, double kstar_max, std::size_t n) {
    std::vector<FourierModulePoint> out;
    for (const auto& k : fourier_module(k_max, kstar_max)) {
        if (k.is_zero()) continue;
        if (out.size() == n) break;
        out.push_back(k);
    }
    return out;
}

/// 20 module points (k = 0 included) and 5 reals outside the module.
inline std::vector<Wavevector> null_fb_kset() {
    std::vector<Wavevector> ks;
    const auto module = fourier_module(3.0, 3.0);
    for (std::size_t i = 0; i < 20 && i < module.size(); ++i) ks.emplace_back(module[i]);
    for (const double x : {std::sqrt(2.0) / 3.0, std::numbers::pi / 7.0, std::numbers::e / 5.0, std::sqrt(3.0) / 2.0,
                           std::log(2.0)})
        ks.emplace_back(x);
    return ks;
}

inline std::vector<FourierModulePoint> phase_kset() { return nonzero_module_points(2.0, 2.0, 10); }
inline std::vector<FourierModulePoint> random_fibonacci_kset() { return nonzero_module_points(2.0, 1.0, 5); }

// ---- oracles -----------------------------------------------------------------

/// (1/N) sum_{n<N} t_n t_{n+m} with t_n = (-1)^{popcount n}.
inline double tm_eta_direct(std::int64_t m, std::int64_t N = std::int64_t{1} << 20) {
    std::int64_t s = 0;
    for (std::int64_t n = 0; n < N; ++n) {
        const bool a = __builtin_popcountll(static_cast<unsigned long long>(n)) & 1;
        const bool b = __builtin_popcountll(static_cast<unsigned long long>(n + m)) & 1;
        s += a == b ? 1 : -1;
    }
    return static_cast<double>(s) / static_cast<double>(N);
}

inline json to_json(const Check& c) {
    json j{{"name", c.name}, {"measured", c.measured}, {"relation", c.relation}, {"threshold", c.threshold}, {"pass", c.pass}};
    if (c.relation == "in") j["upper"] = c.upper;
    return j;
}

inline json to_json(const Criterion& c) {
    json checks = json::array();
    for (const auto& k : c.checks) checks.push_back(to_json(k));
    return {{"id", c.id}, {"title", c.title}, {"params", c.params}, {"details", c.details}, {"checks", checks},
            {"pass", c.pass()}};
}

inline std::complex<double> cz(double x) { return {x, 0.0}; }

// ---- criteria ------------------------------------------------------------------

inline Criterion exact_eberlein() {
    Criterion c{1, "exact Eberlein convolution of the integer lattice"};
    const double R = 100.0;
    const double r_max = 20.0;
    std::vector<QuadraticInt> z;
    for (std::int64_t i = -100; i <= 100; ++i) z.push_back(QuadraticInt::integer(i));
    const auto delta = WeightedComb<QuadraticInt>::from_points(z, Interval{-R, R});
    const auto g = pair_correlation(delta, delta, Averaging{AveragingShape::Symmetric, R}, r_max);
    double worst = 0.0;
    json atoms = json::array();
    for (std::int64_t m = -20; m <= 20; ++m) {
        const double expected = static_cast<double>(201 - std::abs(m)) / 200.0;
        const double got = g.at(QuadraticInt::integer(m)).real();
        worst = std::max(worst, std::abs(got - expected));
        atoms.push_back({{"m", m}, {"weight", got}, {"prediction", expected}});
    }
    c.params = {{"R", R}, {"r_max", r_max}, {"variant", "both"}, {"averaging", "symmetric"}};
    c.details = {{"atoms", atoms}, {"atom_count", g.atoms.size()}};
    c.checks.push_back(equals("max |gamma(m) - (201-|m|)/200|", worst, 0.0));
    c.checks.push_back(equals("extra atoms beyond |m| <= 20", static_cast<double>(g.atoms.size()) - 41.0, 0.0));
    return c;
}

inline Criterion thue_morse() {
    Criterion c{2, "Thue-Morse pair correlations"};
    const std::int64_t N = std::int64_t{1} << 20;
    const auto set = realize_geometric(thue_morse_rule(), "a", static_cast<double>(N));
    const Averaging A{AveragingShape::OneSided, static_cast<double>(N)};
    std::vector<double> eta_direct;
    for (std::int64_t m = 0; m <= 64; ++m) eta_direct.push_back(tm_eta_direct(m));
    const auto eta = tm_eta(64);
    double rec_err = 0.0;
    for (std::size_t m = 0; m < eta.size(); ++m) rec_err = std::max(rec_err, std::abs(to_double(eta[m]) - eta_direct[m]));
    double worst = 0.0;
    json pairs = json::array();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const auto g = pair_correlation(set, i, j, A, 32.0);
            const double eps = i == j ? 1.0 : -1.0;
            json atoms = json::array();
            for (std::int64_t m = -32; m <= 32; ++m) {
                const double pred = 0.25 * (1.0 + eps * eta_direct[static_cast<std::size_t>(std::abs(m))]);
                const double got = g.at(QuadraticInt::integer(m)).real();
                worst = std::max(worst, std::abs(got - pred));
                if (m >= 0 && m <= 8) atoms.push_back({{"m", m}, {"weight", got}, {"prediction", pred}});
            }
            pairs.push_back({{"pair", set.types()[i] + set.types()[j]}, {"atoms", atoms}});
        }
    }
    c.params = {{"N", N}, {"m_max", 32}, {"averaging", "one_sided"}, {"variant", "both"}};
    c.details = {{"pairs", pairs}};
    c.checks.push_back(at_most("max |gamma_ab(m) - (1 + eps eta(m))/4|, |m| <= 32", worst, 2e-3));
    c.checks.push_back(at_most("max |eta_recursion(m) - eta_direct(m)|, m <= 64", rec_err, 2e-3));
    return c;
}

inline Criterion riesz() {
    Criterion c{3, "Riesz product coefficients against eta"};
    const int L = 20;
    const auto rc = riesz_coefficients(L);
    const auto eta = tm_eta(8);
    Rational worst(0);
    json rows = json::array();
    for (std::int64_t m = 0; m <= 8; ++m) {
        const Rational d = rc.c(m) - eta[static_cast<std::size_t>(m)];
        const Rational ad = d < 0 ? -d : d;
        if (ad > worst) worst = ad;
        rows.push_back({{"m", m}, {"c_m_numerator", rc.numerator(m)}, {"c_m_denominator", rc.denominator()},
                        {"eta_numerator", eta[static_cast<std::size_t>(m)].numerator()},
                        {"eta_denominator", eta[static_cast<std::size_t>(m)].denominator()}});
    }
    c.params = {{"L", L}, {"m_max", 8}};
    c.details = {{"coefficients", rows}, {"max_error_numerator", worst.numerator()},
                 {"max_error_denominator", worst.denominator()}};
    c.checks.push_back(at_most("max |c_m(P_20) - eta(m)|, |m| <= 8", to_double(worst), 1e-5));
    return c;
}

inline Criterion twisted_density() {
    Criterion c{4, "twisted Fibonacci half density"};
    const double R = 1e4;
    const auto set = realize_geometric(twisted_fibonacci_rule(), "a", R);
    const auto spec = twisted_fibonacci_windows();
    const auto d = densities(set);
    for (std::size_t t = 0; t < set.type_count(); ++t) {
        const auto& name = set.types()[t];
        const double ratio = d[t] / model_set_density(spec.window(name));
        c.details[name] = {{"density", d[t]}, {"model_set_density", model_set_density(spec.window(name))}};
        c.checks.push_back(within("dens ratio " + name, ratio, 0.49, 0.51));
    }
    c.params = {{"R", R}, {"seed", "a"}};
    return c;
}

struct TwistedSplit {
    TypedPointSet<QuadraticInt> set;
    Splitting<QuadraticInt> split;
    bool calibrated = false;
};

inline TwistedSplit twisted_split(double R) {
    auto set = realize_geometric(twisted_fibonacci_rule(), "a", R);
    const auto cal = calibrate_windows(set, twisted_fibonacci_windows());
    auto split = split_model_sets(set, cal.spec());
    return {std::move(set), std::move(split), cal.ok};
}

inline Criterion null_fb() {
    Criterion c{5, "null Fourier-Bohr spectrum of nu"};
    const auto ts = twisted_split(1e4);
    const auto ks = null_fb_kset();
    const auto rows = fb_scan(ts.split.part("a").nu, ks, AveragingSpec(AveragingShape::OneSided, {1e2, 1e3, 1e4}));
    const double s2 = fb_sup_at(rows, 1e2), s3 = fb_sup_at(rows, 1e3), s4 = fb_sup_at(rows, 1e4);
    c.params = {{"R", 1e4}, {"type", "a"}, {"k_count", ks.size()}, {"averaging", "one_sided"}};
    c.details = {{"sup_R1e2", s2}, {"sup_R1e3", s3}, {"sup_R1e4", s4}, {"alpha", ts.split.part("a").alpha},
                 {"calibrated", ts.calibrated}};
    c.checks.push_back(at_most("max_k |c_nu_a(k)| at R=1e4", s4, 0.05));
    c.checks.push_back(less_than("max_k |c_nu_a(k)| at R=1e4 vs R=1e2", s4, s2));
    return c;
}

inline Criterion orthogonality() {
    Criterion c{6, "orthogonality of omega and nu"};
    const auto ts = twisted_split(1e4);
    const auto& p = ts.split.part("a");
    const auto rows = orthogonality_report(p.omega, p.nu, AveragingSpec(AveragingShape::OneSided, {1e2, 1e3, 1e4}), 20.0);
    json table = json::array();
    for (const auto& r : rows) table.push_back({{"R", r.R}, {"sup_omega_nu", r.sup_omega_nu}, {"sup_nu_omega", r.sup_nu_omega}});
    c.params = {{"R", 1e4}, {"r_max", 20.0}, {"type", "a"}};
    c.details = {{"rows", table}};
    c.checks.push_back(at_most("sup |omega~ (x) nu| at R=1e4", rows.back().sup_omega_nu, 0.02));
    c.checks.push_back(at_most("sup |nu~ (x) omega| at R=1e4", rows.back().sup_nu_omega, 0.02));
    return c;
}

inline Criterion consistent_phase() {
    Criterion c{7, "consistent phase on Fibonacci model sets"};
    const double R = 1e4;
    const Interval range{0.0, R};
    const auto set = realize_geometric(fibonacci_rule(), "a", R);
    const auto cal = calibrate_windows(set, fibonacci_windows());
    const auto ks = phase_kset();
    const Averaging A{AveragingShape::OneSided, R};
    c.params = {{"R", R}, {"k_count", ks.size()}};
    c.checks.push_back(equals("closure calibration ok", cal.ok ? 1.0 : 0.0, 1.0));
    for (const auto& t : cal.types) {
        const auto comb = WeightedComb<QuadraticInt>::from_points(cut_and_project(t.window, range), range);
        double worst = 0.0;
        for (const auto& k : ks) worst = std::max(worst, std::abs(fb_coefficient(comb, Wavevector{k}, A) - window_amplitude(t.window, k)));
        c.details[t.type] = {{"lo_closed", t.lo_closed}, {"hi_closed", t.hi_closed}};
        c.checks.push_back(at_most("max_k |c(k) - window_amplitude(W_" + t.type + ", k)|", worst, 0.01));
    }
    return c;
}

inline Criterion bernoulli(std::uint64_t seed = 42) {
    Criterion c{8, "Bernoulli lattice gas"};
    const double p = 0.6;
    const std::int64_t N = 1000000;
    const auto rep = bernoulli_verify(p, N, RngSpec{seed, 0}, 50.0);
    json atoms = json::array();
    for (std::int64_t m = 0; m <= 5; ++m) {
        const auto s = QuadraticInt::integer(m);
        atoms.push_back({{"m", m}, {"gamma", rep.gamma.at(s).real()}, {"gamma_prediction", m == 0 ? p : p * p},
                         {"zero_part", rep.zero_part.at(s).real()}, {"zero_prediction", m == 0 ? p * (1 - p) : 0.0}});
    }
    c.params = {{"p", p}, {"N", N}, {"r_max", 50}, {"seed", seed}};
    c.details = {{"atoms", atoms}, {"density", rep.density}, {"cross_sup", rep.cross_sup}};
    c.checks.push_back(at_most("|gamma(0) - p|", rep.gamma0_error, 2e-3));
    c.checks.push_back(at_most("max_{1<=|m|<=50} |gamma(m) - p^2|", rep.gamma_off_error, 3e-3));
    c.checks.push_back(at_most("|zero(0) - p(1-p)|", rep.zero0_error, 3e-3));
    c.checks.push_back(at_most("max_{m != 0} |zero(m)|", rep.zero_off_max, 3e-3));
    return c;
}

inline Criterion polarisation() {
    Criterion c{9, "density formula at k = 0"};
    const double R = 1e4;
    const double r_max = 50.0;
    const auto set = realize_geometric(fibonacci_rule(), "a", R);
    const auto comb = WeightedComb<QuadraticInt>::from_points(set.all_points(), set.range());
    const auto pc = polarisation_zero_check(comb, comb, Averaging{AveragingShape::OneSided, R}, r_max);
    const double d2 = (kTau / kSqrt5) * (kTau / kSqrt5);
    c.params = {{"R", R}, {"r_max", r_max}};
    c.details = {{"c0", pc.c0}, {"density_measured", pc.dens_p}, {"prediction", d2}};
    c.checks.push_back(at_most("|c0 - (tau/sqrt5)^2| / (tau/sqrt5)^2", std::abs(pc.c0 - d2) / d2, 0.01));
    return c;
}

inline Criterion random_fibonacci_criterion(std::uint64_t seed = 7) {
    Criterion c{10, "random Fibonacci inflation"};
    const double R = 1e4;
    const RngSpec rng{seed, 0};
    const auto set = random_fibonacci(0.5, R, rng);
    const double dens = kTau / kSqrt5;
    const auto ks = random_fibonacci_kset();
    const auto es = empirical_pp_split(set, ks, AveragingSpec(AveragingShape::OneSided, {5e3, 1e4}),
                                       std::vector<std::complex<double>>(set.type_count(), cz(1.0)));
    double cauchy = 0.0;
    json amps = json::array();
    for (const auto& row : es.amplitudes) {
        if (row.R != R) continue;
        for (std::size_t t = 0; t < row.amplitudes.size(); ++t) {
            cauchy = std::max(cauchy, row.cauchy_diff[t]);
            amps.push_back({{"k_a", row.k.a}, {"k_b", row.k.b}, {"type", set.types()[t]},
                            {"re", row.amplitudes[t].real()}, {"im", row.amplitudes[t].imag()},
                            {"cauchy_diff", row.cauchy_diff[t]}});
        }
    }
    const auto det = realize_geometric(fibonacci_rule(), "a", R);
    const auto p1 = random_fibonacci(1.0, R, rng);
    bool same = det.types() == p1.types();
    for (std::size_t t = 0; same && t < det.type_count(); ++t) same = det.points(t) == p1.points(t);
    c.params = {{"p", 0.5}, {"seed", seed}, {"R", R}, {"k_count", ks.size()}};
    c.details = {{"amplitudes", amps}, {"density", total_density(set)}};
    c.checks.push_back(at_most("|dens - tau/sqrt5| / (tau/sqrt5)", std::abs(total_density(set) - dens) / dens, 0.01));
    c.checks.push_back(at_most("max |c(1e4) - c(5e3)|", cauchy, 0.02));
    c.checks.push_back(equals("p = 1 equals deterministic Fibonacci", same ? 1.0 : 0.0, 1.0));
    return c;
}

// ---- suites --------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"exact",         "tm",    "riesz",     "twisted",      "orthogonality",
                                                "phase",         "bernoulli", "polarisation", "random_fibonacci", "all"};
    return names;
}

struct SuiteOptions {
    std::uint64_t bernoulli_seed = 42;
    std::uint64_t random_fibonacci_seed = 7;
};

inline std::vector<int> suite_criteria(const std::string& suite) {
    static const std::map<std::string, std::vector<int>> table{
        {"exact", {1}},     {"tm", {2}},           {"riesz", {3}},        {"twisted", {4, 5}},
        {"orthogonality", {6}}, {"phase", {7}},     {"bernoulli", {8}},    {"polarisation", {9}},
        {"random_fibonacci", {10}}, {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}};
    const auto it = table.find(suite);
    if (it == table.end()) throw ConfigError("unknown suite '" + suite + "'");
    return it->second;
}

inline Criterion run_criterion(int id, const SuiteOptions& opt = {}) {
    switch (id) {
    case 1: return exact_eberlein();
    case 2: return thue_morse();
    case 3: return riesz();
    case 4: return twisted_density();
    case 5: return null_fb();
    case 6: return orthogonality();
    case 7: return consistent_phase();
    case 8: return bernoulli(opt.bernoulli_seed);
    case 9: return polarisation();
    case 10: return random_fibonacci_criterion(opt.random_fibonacci_seed);
    default: throw ConfigError("unknown criterion " + std::to_string(id));
    }
}

inline std::vector<Criterion> run_suite(const std::string& suite, const SuiteOptions& opt = {}) {
    std::vector<Criterion> out;
    for (const int id : suite_criteria(suite)) out.push_back(run_criterion(id, opt));
    return out;
}

} // namespace aperiodic::acceptance
