#pragma once

// The three-step adaptation example: an injection c with
//   c(0) = w3, c(1) = w1, c(2) = w7, c(3) = w15, c(4) = w4, c(5) = w8,
//   c(i) = w_{i+10} for i ≥ 6
// over {0,1}, and two seed automata whose acceptance on w0 … w8 is
//   A0: 0 1 1 0 1 0 0 1 0
//   A1: 1 0 0 1 1 0 0 0 1
// Beyond length 3, A0 accepts words ending in 0 and A1 words starting with 0.

#include <map>
#include <string>
#include <vector>

#include "regenc/regenc.hpp"

namespace worked {

using namespace regenc;

inline const std::vector<std::string>& annotations() {
    static const std::vector<std::string> rows{"011010010", "100110001"};
    return rows;
}

inline bool long_word(std::string_view w) { return w.size() >= 4; }

inline bool a0_accepts(std::string_view w) {
    static const FinWordSet short_words{"0", "1", "01", "000"};
    return long_word(w) ? w.back() == '0' : short_words.count(Word(w)) == 1;
}

inline bool a1_accepts(std::string_view w) {
    static const FinWordSet short_words{"", "00", "01", "001"};
    return long_word(w) ? w.front() == '0' : short_words.count(Word(w)) == 1;
}

// Exact DFA for a predicate that looks only at short words (length < 4)
// and at the first and last letter of long ones.
inline Dfa from_predicate(bool (*accepts)(std::string_view)) {
    auto step = [](const std::string& key, std::size_t a) {
        const char c = a == 0 ? '0' : '1';
        if (!key.empty() && key[0] == 'L') return std::string{'L', key[1], c};
        std::string w = key + c;
        return w.size() >= 4 ? std::string{'L', w.front(), c} : w;
    };
    auto output = [accepts](const std::string& key) {
        if (!key.empty() && key[0] == 'L') return accepts(std::string{key[1], '0', '0', key[2]});
        return accepts(key);
    };
    return minimize(explore(Alphabet::binary(), std::string{}, step, output));
}

inline Dfa a0() { return from_predicate(&a0_accepts); }
inline Dfa a1() { return from_predicate(&a1_accepts); }

inline bool image_accepts(std::string_view w) {
    static const FinWordSet short_words{"0", "00", "01", "000", "001"};
    return long_word(w) || short_words.count(Word(w)) == 1;
}

inline IndexedSource source() {
    static const std::map<Index, Index> small{{0, 3}, {1, 1}, {2, 7}, {3, 15}, {4, 4}, {5, 8}};
    WordOrder order(Alphabet::binary());
    auto encode = [order](Index i) { return order.word_at(i < 6 ? small.at(i) : i + 10); };
    auto decode = [order](std::string_view w) -> std::optional<Index> {
        Index j = order.index_of(w);
        for (const auto& [i, target] : small)
            if (target == j) return i;
        if (j >= 16) return j - 10;
        return std::nullopt;
    };
    return IndexedSource{"worked-example", encode, decode, regular_image(from_predicate(&image_accepts))};
}

} // namespace worked
