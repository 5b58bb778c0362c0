#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "betadyn/basis.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/expansion.hpp"
#include "betadyn/word.hpp"

namespace betadyn {

/// Default cap on the number of words an enumeration may materialize.
inline constexpr std::size_t kDefaultWordBudget = 5'000'000;

/// The cylinder I_n(w): points whose first n digits are w. Half-open [left, right).
template <class Real>
struct CylinderInterval {
    Word word;
    Real left{};
    Real right{};
    std::size_t order = 0;
    bool is_full = false;

    Real length() const { return right - left; }
};

/// Renyi's bounds beta^n <= #Sigma^n <= beta^(n+1)/(beta-1).
inline double renyi_lower_bound(double beta, std::size_t n) { return std::pow(beta, static_cast<double>(n)); }
inline double renyi_upper_bound(double beta, std::size_t n) {
    return std::pow(beta, static_cast<double>(n + 1)) / (beta - 1.0);
}

/// Recognizer for admissible words built from the quasi-greedy expansion d of 1.
///
/// State m means the last m digits coincide with d_1..d_m; the next digit may be
/// at most d_{m+1}. Equality advances the match, anything smaller releases the
/// constraint. A state whose remainder r_m equals 1 imposes the same constraint
/// as the empty match and is folded into state 0, so state 0 marks exactly the
/// full words.
class ParryAutomaton {
public:
    explicit ParryAutomaton(ParryData data) : data_(std::move(data)) {}

    int limit(std::size_t state) const { return data_.digits[state]; }

    std::size_t next(std::size_t state, int digit) const {
        if (digit < data_.digits[state]) return 0;
        const std::size_t m = state + 1;
        return data_.resets[m] ? 0 : m;
    }

    /// Length of T^n I(w) for a word ending in `state`, i.e. |I(w)| * beta^n.
    double image_length(std::size_t state) const { return data_.remainders[state]; }

    std::size_t depth() const { return data_.digits.size(); }

private:
    ParryData data_;
};

template <class Real>
ParryAutomaton parry_automaton(const BetaBasis<Real>& basis, std::size_t depth) {
    return ParryAutomaton(basis.parry_data(depth));
}

namespace detail {

template <class Real>
void check_alphabet(const BetaBasis<Real>& basis, const Word& word) {
    if (word.order() == 0) throw InvalidWord("empty word");
    for (int d : word.digits) {
        if (d < 0 || d > basis.max_digit()) {
            throw InvalidWord("digit " + std::to_string(d) + " outside alphabet {0,...," +
                              std::to_string(basis.max_digit()) + "} in word " + word.to_string());
        }
    }
}

template <class Real>
void check_enumeration_budget(const BetaBasis<Real>& basis, std::size_t n, std::size_t budget) {
    basis.check_order(n);
    const double projected = renyi_upper_bound(basis.value(), n);
    if (projected > static_cast<double>(budget)) {
        throw BudgetExceeded("enumerating order " + std::to_string(n) + " projects up to " +
                             std::to_string(static_cast<long long>(projected)) +
                             " words by the Renyi upper bound beta^(n+1)/(beta-1), over the budget of " +
                             std::to_string(budget));
    }
}

template <class Real>
Real left_endpoint(const BetaBasis<Real>& basis, const std::vector<int>& digits) {
    Real v(0);
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        v += Real(*it);
        v /= basis.beta();
    }
    return v;
}

}  // namespace detail

/// Parry criterion: every suffix of w is lexicographically <= the prefix of the
/// quasi-greedy expansion of 1 of the same length.
template <class Real>
bool is_admissible(const BetaBasis<Real>& basis, const Word& word) {
    detail::check_alphabet(basis, word);
    const std::size_t n = word.order();
    const std::vector<int> one = basis.one_expansion(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; k + i < n; ++i) {
            const int a = word.digits[k + i];
            if (a < one[i]) break;
            if (a > one[i]) return false;
        }
    }
    return true;
}

/// Runs the automaton over an admissible word and returns the final state.
template <class Real>
std::size_t parry_state(const BetaBasis<Real>& basis, const Word& word) {
    const ParryAutomaton automaton = parry_automaton(basis, word.order());
    std::size_t state = 0;
    for (int d : word.digits) {
        if (d > automaton.limit(state)) throw InvalidWord("word " + word.to_string() + " is not admissible");
        state = automaton.next(state, d);
    }
    return state;
}

/// Depth-first walk over Sigma^n in lexicographic order. The visitor receives
/// the digits and whether the word is full. Nothing is stored, so no budget.
template <class Real, class Visitor>
void for_each_word(const BetaBasis<Real>& basis, std::size_t n, Visitor&& visit) {
    basis.check_order(n);
    const ParryAutomaton automaton = parry_automaton(basis, n);
    std::vector<int> w(n, -1);
    std::vector<std::size_t> state(n + 1, 0);
    std::size_t pos = 0;
    while (true) {
        if (pos == n) {
            visit(static_cast<const std::vector<int>&>(w), state[n] == 0);
            --pos;
            continue;
        }
        const int next = w[pos] + 1;
        if (next <= automaton.limit(state[pos])) {
            w[pos] = next;
            state[pos + 1] = automaton.next(state[pos], next);
            ++pos;
            if (pos < n) w[pos] = -1;
        } else {
            if (pos == 0) break;
            --pos;
        }
    }
}

/// #Sigma^n by dynamic programming over automaton states.
template <class Real>
std::uint64_t count_words(const BetaBasis<Real>& basis, std::size_t n) {
    basis.check_order(n);
    const ParryAutomaton automaton = parry_automaton(basis, n);
    std::vector<unsigned __int128> ways(n + 1, 0), next_ways(n + 1, 0);
    ways[0] = 1;
    for (std::size_t step = 0; step < n; ++step) {
        std::fill(next_ways.begin(), next_ways.end(), 0);
        for (std::size_t m = 0; m <= step; ++m) {
            if (ways[m] == 0) continue;
            const int lim = automaton.limit(m);
            next_ways[0] += ways[m] * static_cast<unsigned>(lim);
            next_ways[automaton.next(m, lim)] += ways[m];
        }
        ways.swap(next_ways);
    }
    unsigned __int128 total = 0;
    for (auto w : ways) total += w;
    if (total > std::numeric_limits<std::uint64_t>::max()) {
        throw RangeError("#Sigma^" + std::to_string(n) + " does not fit in 64 bits");
    }
    return static_cast<std::uint64_t>(total);
}

/// All admissible words of order n, lexicographically sorted.
template <class Real>
std::vector<Word> enumerate_words(const BetaBasis<Real>& basis, std::size_t n,
                                  std::size_t budget = kDefaultWordBudget) {
    detail::check_enumeration_budget(basis, n, budget);
    std::vector<Word> out;
    for_each_word(basis, n, [&](const std::vector<int>& w, bool) { out.emplace_back(w); });
    return out;
}

/// Lexicographic successor among admissible words of the same order, if any.
template <class Real>
std::optional<Word> successor_word(const BetaBasis<Real>& basis, const Word& word) {
    for (std::size_t i = word.order(); i-- > 0;) {
        if (word.digits[i] >= basis.max_digit()) continue;
        Word prefix(std::vector<int>(word.digits.begin(), word.digits.begin() + static_cast<std::ptrdiff_t>(i)));
        prefix.digits.push_back(word.digits[i] + 1);
        if (!is_admissible(basis, prefix)) continue;
        prefix.digits.resize(word.order(), 0);
        return prefix;
    }
    return std::nullopt;
}

template <class Real>
bool is_full(const BetaBasis<Real>& basis, const Word& word);

/// Geometry of I_n(w). The right endpoint is the left endpoint of the next
/// admissible word of the same order (1 for the last word).
template <class Real>
CylinderInterval<Real> cylinder_interval(const BetaBasis<Real>& basis, const Word& word) {
    if (!is_admissible(basis, word)) throw InvalidWord("word " + word.to_string() + " is not admissible");
    basis.check_order(word.order());
    CylinderInterval<Real> c;
    c.word = word;
    c.order = word.order();
    c.left = detail::left_endpoint(basis, word.digits);
    if (auto succ = successor_word(basis, word)) {
        c.right = detail::left_endpoint(basis, succ->digits);
    } else {
        c.right = Real(1);
    }
    c.is_full = is_full(basis, word);
    return c;
}

/// |I_n(w)| == beta^-n. Exact length comparison under the rational backend;
/// under the float backend the equivalent symbolic test (the automaton ends in
/// its free state) is used, because the length difference of two endpoints
/// loses all precision once beta^-n approaches machine epsilon.
template <class Real>
bool is_full(const BetaBasis<Real>& basis, const Word& word) {
    if (!is_admissible(basis, word)) throw InvalidWord("word " + word.to_string() + " is not admissible");
    if constexpr (RealTraits<Real>::exact) {
        const Real left = detail::left_endpoint(basis, word.digits);
        const auto succ = successor_word(basis, word);
        const Real right = succ ? detail::left_endpoint(basis, succ->digits) : Real(1);
        return right - left == basis.inverse_power(word.order());
    } else {
        return parry_state(basis, word) == 0;
    }
}

/// Float-backend fullness by length comparison, |length - beta^-n| <= beta^-n * 1e-9.
/// Only meaningful while beta^-n is far above machine epsilon.
inline bool is_full_by_length(double length, double beta, std::size_t n) {
    const double target = std::pow(beta, -static_cast<double>(n));
    return std::fabs(length - target) <= target * 1e-9;
}

/// The order-n cylinder containing x.
template <class Real>
CylinderInterval<Real> cylinder_of_point(const BetaBasis<Real>& basis, const Real& x, std::size_t n) {
    return cylinder_interval(basis, digits(basis, x, n));
}

/// Every cylinder of order n in increasing order; right(k) == left(k+1).
template <class Real>
std::vector<CylinderInterval<Real>> enumerate_cylinders(const BetaBasis<Real>& basis, std::size_t n,
                                                        std::size_t budget = kDefaultWordBudget) {
    detail::check_enumeration_budget(basis, n, budget);
    std::vector<CylinderInterval<Real>> out;
    for_each_word(basis, n, [&](const std::vector<int>& w, bool full) {
        CylinderInterval<Real> c;
        c.word = Word(w);
        c.order = n;
        c.left = detail::left_endpoint(basis, w);
        c.is_full = full;
        out.push_back(std::move(c));
    });
    for (std::size_t k = 0; k + 1 < out.size(); ++k) out[k].right = out[k + 1].left;
    out.back().right = Real(1);
    if constexpr (RealTraits<Real>::exact) {
        const Real unit = basis.inverse_power(n);
        for (auto& c : out) c.is_full = c.length() == unit;
    }
    return out;
}

/// Full words of order n, in order.
template <class Real>
std::vector<Word> full_words(const BetaBasis<Real>& basis, std::size_t n, std::size_t budget = kDefaultWordBudget) {
    detail::check_enumeration_budget(basis, n, budget);
    std::vector<Word> out;
    for_each_word(basis, n, [&](const std::vector<int>& w, bool full) {
        if (full) out.emplace_back(w);
    });
    return out;
}

/// Longest run of consecutive non-full cylinders of order n.
template <class Real>
std::size_t full_gap_statistics(const BetaBasis<Real>& basis, std::size_t n,
                                std::size_t budget = kDefaultWordBudget) {
    detail::check_enumeration_budget(basis, n, budget);
    std::size_t run = 0, longest = 0;
    for_each_word(basis, n, [&](const std::vector<int>&, bool full) {
        run = full ? 0 : run + 1;
        longest = std::max(longest, run);
    });
    return longest;
}

}  // namespace betadyn
