#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "betadyn/errors.hpp"

namespace betadyn {

/// A finite digit string. Ordering is lexicographic, which for admissible
/// words of equal length matches the order of their cylinders in [0,1).
struct Word {
    std::vector<int> digits;

    Word() = default;
    explicit Word(std::vector<int> d) : digits(std::move(d)) {}
    Word(std::initializer_list<int> d) : digits(d) {}

    std::size_t order() const { return digits.size(); }
    int operator[](std::size_t i) const { return digits[i]; }

    auto operator<=>(const Word&) const = default;
    bool operator==(const Word&) const = default;

    /// "0101" for single-character digits, "10:3:0" otherwise.
    std::string to_string() const {
        bool wide = false;
        for (int d : digits) wide = wide || d > 9;
        std::string out;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (wide && i > 0) out.push_back(':');
            out += std::to_string(digits[i]);
        }
        return out;
    }

    static Word parse(std::string_view text) {
        Word w;
        if (text.find_first_of(":,") != std::string_view::npos) {
            std::size_t start = 0;
            while (start <= text.size()) {
                std::size_t end = text.find_first_of(":,", start);
                if (end == std::string_view::npos) end = text.size();
                const auto piece = text.substr(start, end - start);
                if (piece.empty()) throw InvalidWord("empty digit in word '" + std::string(text) + "'");
                int v = 0;
                for (char c : piece) {
                    if (c < '0' || c > '9') throw InvalidWord("bad digit in word '" + std::string(text) + "'");
                    v = v * 10 + (c - '0');
                }
                w.digits.push_back(v);
                start = end + 1;
            }
        } else {
            for (char c : text) {
                if (c < '0' || c > '9') throw InvalidWord("bad digit in word '" + std::string(text) + "'");
                w.digits.push_back(c - '0');
            }
        }
        if (w.digits.empty()) throw InvalidWord("empty word");
        return w;
    }
};

}  // namespace betadyn
