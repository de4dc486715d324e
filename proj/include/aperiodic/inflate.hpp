#pragma once

// Symbolic substitution rules, their Perron-Frobenius data, and the geometric
// realization of one-sided inflation fixed points as typed point sets of left
// endpoints.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aperiodic/error.hpp"
#include "aperiodic/points.hpp"
#include "aperiodic/random.hpp"
#include "aperiodic/summation.hpp"
#include "aperiodic/zroot5.hpp"

namespace aperiodic {

using Word = std::vector<int>;
using TileLength = std::variant<QuadraticInt, double>;

inline double length_value(const TileLength& l) {
    return std::visit([](const auto& v) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, QuadraticInt>) return qi_embed(v);
        else return v;
    }, l);
}

struct Branch {
    Word word;
    double probability = 1.0;
};

class SubstitutionRule {
public:
    SubstitutionRule(std::string name, std::vector<std::string> alphabet, std::vector<std::vector<Branch>> images,
                     std::vector<TileLength> lengths)
        : name_(std::move(name)), alphabet_(std::move(alphabet)), images_(std::move(images)),
          lengths_(std::move(lengths)) {
        validate();
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return alphabet_.size(); }
    const std::vector<Branch>& branches(std::size_t letter) const { return images_.at(letter); }
    const std::vector<TileLength>& lengths() const noexcept { return lengths_; }

    bool is_random() const {
        return std::any_of(images_.begin(), images_.end(), [](const auto& b) { return b.size() > 1; });
    }

    bool exact_lengths() const {
        return std::all_of(lengths_.begin(), lengths_.end(),
                           [](const TileLength& l) { return std::holds_alternative<QuadraticInt>(l); });
    }

    std::size_t letter_index(std::string_view letter) const {
        const auto it = std::find(alphabet_.begin(), alphabet_.end(), letter);
        if (it == alphabet_.end()) throw RuleError("letter '" + std::string(letter) + "' not in alphabet");
        return static_cast<std::size_t>(it - alphabet_.begin());
    }

    /// Branch taken by a tile; the last branch absorbs rounding in the cumulative sum.
    const Word& pick(std::size_t letter, double u) const {
        const auto& bs = images_[letter];
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
            cum += bs[i].probability;
            if (u < cum) return bs[i].word;
        }
        return bs.back().word;
    }

private:
    void validate() const {
        if (alphabet_.empty()) throw RuleError(name_ + ": empty alphabet");
        if (images_.size() != alphabet_.size()) throw RuleError(name_ + ": one image list per letter required");
        if (lengths_.size() != alphabet_.size()) throw RuleError(name_ + ": one tile length per letter required");
        for (std::size_t i = 0; i < alphabet_.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (alphabet_[i] == alphabet_[j]) throw RuleError(name_ + ": duplicate letter " + alphabet_[i]);
            }
            const auto& bs = images_[i];
            if (bs.empty()) throw RuleError(name_ + ": letter " + alphabet_[i] + " has no image");
            double total = 0.0;
            for (const auto& b : bs) {
                if (b.word.empty()) throw RuleError(name_ + ": empty image for " + alphabet_[i]);
                for (int c : b.word) {
                    if (c < 0 || static_cast<std::size_t>(c) >= alphabet_.size()) {
                        throw RuleError(name_ + ": image letter outside alphabet");
                    }
                }
                if (!(b.probability >= 0.0 && b.probability <= 1.0)) {
                    throw RuleError(name_ + ": branch probability outside [0,1]");
                }
                total += b.probability;
            }
            if (std::abs(total - 1.0) > 1e-12) {
                throw RuleError(name_ + ": probabilities of " + alphabet_[i] + " sum to " + std::to_string(total));
            }
            if (!(length_value(lengths_[i]) > 0.0)) {
                throw RuleError(name_ + ": tile length of " + alphabet_[i] + " must be positive");
            }
        }
    }

    std::string name_;
    std::vector<std::string> alphabet_;
    std::vector<std::vector<Branch>> images_;
    std::vector<TileLength> lengths_;
};

namespace detail {

inline std::vector<std::vector<Branch>> deterministic(std::vector<Word> words) {
    std::vector<std::vector<Branch>> out;
    for (auto& w : words) out.push_back({Branch{std::move(w), 1.0}});
    return out;
}

} // namespace detail

inline SubstitutionRule fibonacci_rule() {
    return {"fibonacci", {"a", "b"}, detail::deterministic({{0, 1}, {0}}), {QuadraticInt{0, 1}, QuadraticInt{1, 0}}};
}

/// a -> ab, a_ -> a_ b_, b -> a_, b_ -> a with lengths from the left PF vector (tau, tau, 1, 1).
inline SubstitutionRule twisted_fibonacci_rule() {
    return {"twisted_fibonacci",
            {"a", "a_", "b", "b_"},
            detail::deterministic({{0, 2}, {1, 3}, {1}, {0}}),
            {QuadraticInt{0, 1}, QuadraticInt{0, 1}, QuadraticInt{1, 0}, QuadraticInt{1, 0}}};
}

inline SubstitutionRule thue_morse_rule() {
    return {"thue_morse", {"a", "b"}, detail::deterministic({{0, 1}, {1, 0}}), {QuadraticInt{1, 0}, QuadraticInt{1, 0}}};
}

/// a -> ab with probability p, ba with probability 1 - p; b -> a.
inline SubstitutionRule random_fibonacci_rule(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("random_fibonacci: p must lie in [0,1]");
    return {"random_fibonacci",
            {"a", "b"},
            {{Branch{{0, 1}, p}, Branch{{1, 0}, 1.0 - p}}, {Branch{{0}, 1.0}}},
            {QuadraticInt{0, 1}, QuadraticInt{1, 0}}};
}

inline std::vector<std::string> builtin_rule_names() {
    return {"fibonacci", "twisted_fibonacci", "thue_morse", "random_fibonacci"};
}

inline SubstitutionRule builtin_rule(std::string_view name, double p = 0.5) {
    if (name == "fibonacci") return fibonacci_rule();
    if (name == "twisted_fibonacci") return twisted_fibonacci_rule();
    if (name == "thue_morse") return thue_morse_rule();
    if (name == "random_fibonacci") return random_fibonacci_rule(p);
    throw RuleError("unknown built-in rule '" + std::string(name) + "'");
}

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Entry (i, j) counts letter i in the image of letter j. Random rules must have
/// branch-independent counts.
inline IntMatrix substitution_matrix(const SubstitutionRule& rule) {
    const std::size_t d = rule.size();
    IntMatrix m(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t j = 0; j < d; ++j) {
        const auto& bs = rule.branches(j);
        std::vector<std::int64_t> first(d, 0);
        for (int c : bs.front().word) ++first[static_cast<std::size_t>(c)];
        for (std::size_t b = 1; b < bs.size(); ++b) {
            std::vector<std::int64_t> counts(d, 0);
            for (int c : bs[b].word) ++counts[static_cast<std::size_t>(c)];
            if (counts != first) {
                throw RuleError(rule.name() + ": branch-dependent letter counts for " + rule.alphabet()[j]);
            }
        }
        for (std::size_t i = 0; i < d; ++i) m[i][j] = first[i];
    }
    return m;
}

/// Some power M^k, k <= 2d, is entrywise positive.
inline bool is_primitive(const IntMatrix& m) {
    const std::size_t d = m.size();
    if (d == 0) return false;
    std::vector<std::vector<bool>> base(d, std::vector<bool>(d)), power(d, std::vector<bool>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (m[i].size() != d) return false;
        for (std::size_t j = 0; j < d; ++j) {
            if (m[i][j] < 0) return false;
            base[i][j] = power[i][j] = m[i][j] > 0;
        }
    }
    for (std::size_t k = 1; k <= 2 * d; ++k) {
        bool all = true;
        for (const auto& row : power) all = all && std::all_of(row.begin(), row.end(), [](bool b) { return b; });
        if (all) return true;
        std::vector<std::vector<bool>> next(d, std::vector<bool>(d, false));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l)
                if (power[i][l])
                    for (std::size_t j = 0; j < d; ++j) next[i][j] = next[i][j] || base[l][j];
        power = std::move(next);
    }
    return false;
}

struct PerronFrobenius {
    double eigenvalue = 0.0;
    std::vector<double> left;   // min entry 1: natural tile lengths
    std::vector<double> right;  // sums to 1: letter frequencies
    double residual = 0.0;      // max of the left/right residuals |Mv - lambda v|_inf / |v|_inf
};

namespace detail {

inline std::pair<double, std::vector<double>> power_iteration(const IntMatrix& m, bool transpose, double& residual) {
    const std::size_t d = m.size();
    std::vector<double> v(d, 1.0), w(d);
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += static_cast<double>(transpose ? m[j][i] : m[i][j]) * x[j];
            y[i] = s;
        }
    };
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
        apply(v, w);
        lambda = *std::max_element(w.begin(), w.end());
        for (std::size_t i = 0; i < d; ++i) w[i] /= lambda;
        std::swap(v, w);
        apply(v, w);
        double r = 0.0;
        const double lam = *std::max_element(w.begin(), w.end());
        for (std::size_t i = 0; i < d; ++i) r = std::max(r, std::abs(w[i] - lam * v[i]));
        lambda = lam;
        residual = r;
        if (r <= 1e-13 * std::max(1.0, lam)) break;
    }
    return {lambda, v};
}

} // namespace detail

inline PerronFrobenius pf_data(const IntMatrix& m) {
    if (!is_primitive(m)) throw RuleError("pf_data: matrix is not primitive");
    PerronFrobenius out;
    double r_left = 0.0, r_right = 0.0;
    auto [lambda_r, right] = detail::power_iteration(m, false, r_right);
    auto [lambda_l, left] = detail::power_iteration(m, true, r_left);
    out.eigenvalue = 0.5 * (lambda_r + lambda_l);
    const double mn = *std::min_element(left.begin(), left.end());
    for (double& x : left) x /= mn;
    double total = 0.0;
    for (double x : right) total += x;
    for (double& x : right) x /= total;
    out.left = std::move(left);
    out.right = std::move(right);
    out.residual = std::max(r_left, r_right);
    return out;
}

/// One inflation step. For random rules the branch of tile j at this level is
/// decided by the counter draw (level, j).
inline Word inflate_word(const SubstitutionRule& rule, const Word& word, std::uint64_t level,
                         const std::optional<RngSpec>& rng = std::nullopt) {
    const bool random = rule.is_random();
    if (random && !rng) throw RuleError(rule.name() + ": random rule requires an rng seed");
    std::optional<CounterRng> gen;
    if (rng) gen.emplace(*rng);
    Word out;
    out.reserve(word.size() * 2);
    for (std::size_t j = 0; j < word.size(); ++j) {
        const auto letter = static_cast<std::size_t>(word[j]);
        const Word& img = random ? rule.pick(letter, gen->uniform(level, j)) : rule.branches(letter).front().word;
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

/// Iterates from the seed letter until the tiled length reaches R.
inline Word inflate_to_length(const SubstitutionRule& rule, std::size_t seed, double R,
                              const std::optional<RngSpec>& rng = std::nullopt) {
    if (!(R >= 0.0) || !std::isfinite(R)) throw DomainError("realize: R must be finite and >= 0");
    if (!rule.is_random()) {
        const Word& img = rule.branches(seed).front().word;
        if (img.front() != static_cast<int>(seed)) {
            throw RuleError(rule.name() + ": image of seed " + rule.alphabet()[seed] +
                            " does not start with it; no one-sided fixed point");
        }
    }
    std::vector<double> len;
    for (const auto& l : rule.lengths()) len.push_back(length_value(l));
    Word word{static_cast<int>(seed)};
    double total = len[seed];
    std::uint64_t level = 0;
    while (total < R) {
        const std::size_t before = word.size();
        word = inflate_word(rule, word, level++, rng);
        if (word.size() <= before && total < R) {
            // non-growing rule: geometric length can never reach R
            throw RuleError(rule.name() + ": inflation does not grow from seed");
        }
        total = 0.0;
        for (int c : word) total += len[static_cast<std::size_t>(c)];
    }
    return word;
}

namespace detail {

template <class P, class Step>
TypedPointSet<P> place_tiles(const SubstitutionRule& rule, const Word& word, double R, Step step) {
    std::vector<std::vector<P>> pts(rule.size());
    P pos{};
    for (std::size_t j = 0; j < word.size(); ++j) {
        if (j > 0 && !(embed(pos) < R)) break;
        pts[static_cast<std::size_t>(word[j])].push_back(pos);
        pos = step(pos, static_cast<std::size_t>(word[j]));
    }
    return TypedPointSet<P>(rule.alphabet(), std::move(pts), Interval{0.0, R});
}

} // namespace detail

/// Left endpoints of the one-sided fixed point tiling of [0, R' >= R], typed by tile
/// label, keeping the points in [0, R) together with the origin. Requires exact
/// Z[tau] tile lengths.
inline TypedPointSet<QuadraticInt> realize_geometric(const SubstitutionRule& rule, std::string_view seed, double R,
                                                     const std::optional<RngSpec>& rng = std::nullopt) {
    if (!rule.exact_lengths()) {
        throw RuleError(rule.name() + ": non-Z[tau] tile lengths; use realize_geometric_inexact");
    }
    const Word word = inflate_to_length(rule, rule.letter_index(seed), R, rng);
    std::vector<QuadraticInt> len;
    for (const auto& l : rule.lengths()) len.push_back(std::get<QuadraticInt>(l));
    return detail::place_tiles<QuadraticInt>(rule, word, R,
                                             [&](const QuadraticInt& p, std::size_t c) { return p + len[c]; });
}

/// Real-keyed variant for arbitrary positive tile lengths (output is flagged inexact).
inline TypedPointSet<double> realize_geometric_inexact(const SubstitutionRule& rule, std::string_view seed, double R,
                                                       const std::optional<RngSpec>& rng = std::nullopt) {
    const Word word = inflate_to_length(rule, rule.letter_index(seed), R, rng);
    std::vector<double> len;
    for (const auto& l : rule.lengths()) len.push_back(length_value(l));
    CompensatedSum running;
    return detail::place_tiles<double>(rule, word, R, [&](double, std::size_t c) {
        running.add(len[c]);
        return running.value();
    });
}

} // namespace aperiodic
