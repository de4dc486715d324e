#pragma once

// JSON schemas for rules and windows, and CSV writers with a provenance header.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aperiodic/cps.hpp"
#include "aperiodic/eberlein.hpp"
#include "aperiodic/inflate.hpp"
#include "aperiodic/spectra.hpp"

namespace aperiodic::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.0";

/// FNV-1a 64 of s.
inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Hash of the canonical dump (keys sorted, no whitespace).
inline std::string config_hash(const json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

/// Shortest round-trip decimal form; locale independent.
inline std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline std::string fmt(std::int64_t x) { return std::to_string(x); }

// ---- JSON readers ----------------------------------------------------------

inline void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

inline std::int64_t get_int(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
    return j.at(key).get<std::int64_t>();
}

/// {m, n} pair or a real number.
inline std::variant<QuadraticInt, double> number_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_object()) {
        reject_unknown_keys(j, {"m", "n"}, where);
        return QuadraticInt{get_int(j, "m", where), get_int(j, "n", where)};
    }
    throw ConfigError(where + ": expected {m, n} or a number");
}

inline json to_json(const QuadraticInt& x) { return {{"m", x.m}, {"n", x.n}}; }

inline Word word_from_json(const json& j, const std::vector<std::string>& alphabet, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": word must be an array of letters");
    Word w;
    for (const auto& l : j) {
        if (!l.is_string()) throw ConfigError(where + ": letters must be strings");
        const auto it = std::find(alphabet.begin(), alphabet.end(), l.get<std::string>());
        if (it == alphabet.end()) throw RuleError(where + ": letter '" + l.get<std::string>() + "' not in alphabet");
        w.push_back(static_cast<int>(it - alphabet.begin()));
    }
    return w;
}

/// {"name", "alphabet": [...], "images": {letter: word | [{"word", "probability"}]},
///  "lengths": {letter: {m, n} | real}}
inline SubstitutionRule rule_from_json(const json& j) {
    reject_unknown_keys(j, {"name", "alphabet", "images", "lengths"}, "rule");
    if (!j.contains("alphabet") || !j.at("alphabet").is_array()) throw ConfigError("rule: 'alphabet' must be an array");
    std::vector<std::string> alphabet;
    for (const auto& a : j.at("alphabet")) {
        if (!a.is_string()) throw ConfigError("rule: alphabet entries must be strings");
        alphabet.push_back(a.get<std::string>());
    }
    const auto& images = j.at("images");
    const auto& lengths = j.at("lengths");
    if (!images.is_object() || !lengths.is_object()) throw ConfigError("rule: 'images' and 'lengths' must be objects");
    for (auto it = images.begin(); it != images.end(); ++it)
        if (std::find(alphabet.begin(), alphabet.end(), it.key()) == alphabet.end())
            throw RuleError("rule: image for unknown letter '" + it.key() + "'");
    std::vector<std::vector<Branch>> branches;
    std::vector<TileLength> lens;
    for (const auto& letter : alphabet) {
        const std::string where = "rule.images." + letter;
        if (!images.contains(letter)) throw RuleError(where + ": missing");
        const auto& img = images.at(letter);
        std::vector<Branch> bs;
        if (img.is_array() && (img.empty() || img.front().is_string())) {
            bs.push_back({word_from_json(img, alphabet, where), 1.0});
        } else if (img.is_array()) {
            for (const auto& b : img) {
                reject_unknown_keys(b, {"word", "probability"}, where);
                if (!b.contains("probability") || !b.at("probability").is_number())
                    throw ConfigError(where + ": branch needs a numeric 'probability'");
                bs.push_back({word_from_json(b.at("word"), alphabet, where), b.at("probability").get<double>()});
            }
        } else {
            throw ConfigError(where + ": expected a word or a list of branches");
        }
        branches.push_back(std::move(bs));
        if (!lengths.contains(letter)) throw RuleError("rule.lengths." + letter + ": missing");
        lens.push_back(number_from_json(lengths.at(letter), "rule.lengths." + letter));
    }
    return SubstitutionRule(j.value("name", std::string("custom")), std::move(alphabet), std::move(branches), std::move(lens));
}

/// {type: [{"lo", "hi", "lo_closed", "hi_closed"}, ...]}
inline ModelSetSpec windows_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("windows: expected an object keyed by type");
    ModelSetSpec spec;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string where = "windows." + it.key();
        if (!it->is_array()) throw ConfigError(where + ": expected a list of intervals");
        std::vector<WindowInterval> parts;
        for (const auto& p : *it) {
            reject_unknown_keys(p, {"lo", "hi", "lo_closed", "hi_closed"}, where);
            if (!p.contains("lo") || !p.contains("hi")) throw ConfigError(where + ": 'lo' and 'hi' required");
            WindowInterval w;
            w.lo = number_from_json(p.at("lo"), where + ".lo");
            w.hi = number_from_json(p.at("hi"), where + ".hi");
            w.lo_closed = p.value("lo_closed", true);
            w.hi_closed = p.value("hi_closed", false);
            if (compare_endpoints(w.lo, w.hi) > 0) throw DomainError(where + ": lo > hi");
            parts.push_back(w);
        }
        spec.types.push_back(it.key());
        spec.windows.emplace_back(std::move(parts));
    }
    return spec;
}

inline json endpoint_to_json(const Endpoint& e) {
    if (const auto* q = std::get_if<QuadraticInt>(&e)) return to_json(*q);
    return std::get<double>(e);
}

inline json windows_to_json(const ModelSetSpec& spec) {
    json j = json::object();
    for (std::size_t i = 0; i < spec.types.size(); ++i) {
        json parts = json::array();
        for (const auto& p : spec.windows[i].intervals())
            parts.push_back({{"lo", endpoint_to_json(p.lo)}, {"hi", endpoint_to_json(p.hi)},
                             {"lo_closed", p.lo_closed}, {"hi_closed", p.hi_closed}});
        j[spec.types[i]] = parts;
    }
    return j;
}

// ---- CSV -------------------------------------------------------------------

/// Writes "# tool ..." / "# config_hash ..." comment lines, then a header row.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::string& hash, std::initializer_list<const char*> columns,
              const std::vector<std::string>& notes = {})
        : os_(os), width_(columns.size()) {
        os_ << "# aperiodic " << kToolVersion << "\n# config_hash " << hash << '\n';
        for (const auto& n : notes) os_ << "# " << n << '\n';
        bool first = true;
        for (const auto* c : columns) {
            os_ << (first ? "" : ",") << c;
            first = false;
        }
        os_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw DomainError("CsvWriter: row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
        os_ << '\n';
    }

private:
    std::ostream& os_;
    std::size_t width_;
};

namespace detail {

template <PointType P>
std::vector<std::string> point_cells(const P& p) {
    if constexpr (std::is_same_v<P, QuadraticInt>) return {fmt(p.m), fmt(p.n), fmt(qi_embed(p))};
    else return {"", "", fmt(p)};
}

inline std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <PointType P>
std::vector<std::string> inexact_note() {
    if constexpr (std::is_same_v<P, QuadraticInt>) return {};
    else return {"inexact"};
}

} // namespace detail

template <PointType P>
void write_points_csv(std::ostream& os, const std::string& hash, const TypedPointSet<P>& set) {
    CsvWriter w(os, hash, {"type", "m", "n", "value"}, detail::inexact_note<P>());
    for (std::size_t t = 0; t < set.type_count(); ++t)
        for (const auto& p : set.points(t)) w.row(detail::cat({set.types()[t]}, detail::point_cells(p)));
}

template <PointType P>
void write_comb_csv(std::ostream& os, const std::string& hash, const WeightedComb<P>& comb,
                    const std::vector<std::string>& notes = {}) {
    auto n = notes;
    for (const auto& s : detail::inexact_note<P>()) n.push_back(s);
    CsvWriter w(os, hash, {"m", "n", "value", "re_weight", "im_weight"}, n);
    for (const auto& a : comb.atoms())
        w.row(detail::cat(detail::point_cells(a.point), {fmt(a.weight.real()), fmt(a.weight.imag())}));
}

template <PointType P>
void write_correlation_csv(std::ostream& os, const std::string& hash, const std::vector<CorrelationComb<P>>& combs,
                           const std::vector<std::string>& notes = {}) {
    auto n = notes;
    for (const auto& s : detail::inexact_note<P>()) n.push_back(s);
    CsvWriter w(os, hash, {"m", "n", "distance", "re_weight", "im_weight", "R", "variant"}, n);
    for (const auto& g : combs)
        for (const auto& a : g.atoms)
            w.row(detail::cat(detail::point_cells(a.point),
                              {fmt(a.weight.real()), fmt(a.weight.imag()), fmt(g.averaging.R), to_string(g.variant)}));
}

inline void write_fb_csv(std::ostream& os, const std::string& hash, const std::vector<FbRow>& rows,
                         const std::vector<std::string>& notes = {}) {
    CsvWriter w(os, hash, {"k_a", "k_b", "k_value", "R", "re", "im", "abs", "cauchy_diff"}, notes);
    for (const auto& r : rows) {
        std::string ka, kb;
        if (const auto* m = std::get_if<FourierModulePoint>(&r.k)) {
            ka = fmt(m->a);
            kb = fmt(m->b);
        }
        w.row({ka, kb, fmt(wavevector_value(r.k)), fmt(r.R), fmt(r.c.real()), fmt(r.c.imag()), fmt(std::abs(r.c)),
               fmt(r.cauchy_diff)});
    }
}

/// One row per k; the amplitude column is the weighted total sum_i u_i A_i(k).
inline void write_spectra_csv(std::ostream& os, const std::string& hash, const std::vector<FourierModulePoint>& ks,
                              const std::vector<std::complex<double>>& amplitudes, const std::vector<double>& intensities,
                              const std::vector<std::string>& notes = {}) {
    CsvWriter w(os, hash, {"k_value", "re_amplitude", "im_amplitude", "intensity"}, notes);
    for (std::size_t i = 0; i < ks.size(); ++i)
        w.row({fmt(ks[i].value()), fmt(amplitudes[i].real()), fmt(amplitudes[i].imag()), fmt(intensities[i])});
}

inline void write_riesz_csv(std::ostream& os, const std::string& hash, const RieszCoefficients& c, std::int64_t m_max) {
    CsvWriter w(os, hash, {"m", "c_m_numerator", "c_m_denominator", "c_m_float"}, {"L " + std::to_string(c.L)});
    for (std::int64_t m = 0; m <= m_max; ++m)
        w.row({fmt(m), fmt(c.numerator(m)), fmt(c.denominator()), fmt(c.c_float(m))});
}

inline void write_eta_csv(std::ostream& os, const std::string& hash, const std::vector<Rational>& eta) {
    CsvWriter w(os, hash, {"m", "eta_numerator", "eta_denominator", "eta_float"});
    for (std::size_t m = 0; m < eta.size(); ++m)
        w.row({fmt(static_cast<std::int64_t>(m)), fmt(eta[m].numerator()), fmt(eta[m].denominator()), fmt(to_double(eta[m]))});
}

} // namespace aperiodic::io
