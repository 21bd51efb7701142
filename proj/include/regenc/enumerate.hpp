#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regenc/automata.hpp"
#include "regenc/errors.hpp"
#include "regenc/word.hpp"

namespace regenc {

using Index = std::uint64_t;

/// Shortlex bijection between indices and words: 0 ↦ ε, then all words of
/// length 1 in alphabet order, then length 2, and so on.
class WordOrder {
public:
    explicit WordOrder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    const Alphabet& alphabet() const noexcept { return alphabet_; }

    Word word_at(Index n) const {
        const Index k = alphabet_.size();
        if (k == 1) {
            if (n > std::numeric_limits<std::size_t>::max() / 2) throw ResourceError("unary word index too large");
            return Word(static_cast<std::size_t>(n), alphabet_.letter(0));
        }
        // Skip whole length blocks; block of length L holds k^L words.
        std::size_t length = 0;
        Index block = 1;
        while (n >= block) {
            n -= block;
            ++length;
            if (block > std::numeric_limits<Index>::max() / k) break;
            block *= k;
        }
        Word w(length, alphabet_.letter(0));
        for (std::size_t i = length; i-- > 0;) {
            w[i] = alphabet_.letter(static_cast<std::size_t>(n % k));
            n /= k;
        }
        return w;
    }

    Index index_of(std::string_view w) const {
        const Index k = alphabet_.size();
        alphabet_.require(w);
        if (k == 1) return w.size();
        Index offset = 0, block = 1, value = 0;
        for (std::size_t len = 0; len < w.size(); ++len) {
            offset = checked_add(offset, block);
            block = checked_mul(block, k);
        }
        for (char c : w) value = checked_add(checked_mul(value, k), alphabet_.rank(c));
        return checked_add(offset, value);
    }

private:
    static Index checked_add(Index a, Index b) {
        if (a > std::numeric_limits<Index>::max() - b) throw ResourceError("word index overflows 64 bits");
        return a + b;
    }
    static Index checked_mul(Index a, Index b) {
        if (b != 0 && a > std::numeric_limits<Index>::max() / b) throw ResourceError("word index overflows 64 bits");
        return a * b;
    }

    Alphabet alphabet_;
};

/// Enumeration A0, A1, ... of all DFAs over an alphabet.
///
/// Seed automata come first. After them, blocks by state count s = 1, 2, ...;
/// inside a block the position is `table * 2^s + mask`, where `table` is a
/// base-s numeral whose digit at position q*k + a is δ(q, a) (least
/// significant digit first) and bit q of `mask` marks q accepting. The start
/// state is always 0. Every DFA over the alphabet is isomorphic to some entry.
class AutomatonOrder {
public:
    explicit AutomatonOrder(Alphabet alphabet, std::vector<Dfa> seed = {})
        : alphabet_(std::move(alphabet)), seed_(std::move(seed)) {
        for (const auto& d : seed_) detail::require_same_alphabet(alphabet_, d.alphabet());
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<Dfa>& seed() const noexcept { return seed_; }

    Dfa automaton_at(Index n) const {
        if (n < seed_.size()) return seed_[static_cast<std::size_t>(n)];
        n -= seed_.size();
        const std::size_t k = alphabet_.size();
        for (std::size_t s = 1;; ++s) {
            auto size = block_size(s, k);
            if (!size) throw ResourceError("automaton index beyond 64-bit enumeration range");
            if (n < *size) return decode(s, n);
            n -= *size;
        }
    }

    Dfa operator[](Index n) const { return automaton_at(n); }

    /// Number of unseeded automata with exactly `s` states, if it fits in 64 bits.
    static std::optional<Index> block_size(std::size_t s, std::size_t k) {
        if (s >= 63) return std::nullopt;
        Index tables = 1;
        for (std::size_t i = 0; i < s * k; ++i) {
            if (tables > std::numeric_limits<Index>::max() / s) return std::nullopt;
            tables *= s;
        }
        Index masks = Index{1} << s;
        if (tables > std::numeric_limits<Index>::max() / masks) return std::nullopt;
        return tables * masks;
    }

private:
    Dfa decode(std::size_t s, Index position) const {
        const std::size_t k = alphabet_.size();
        Index mask = position & ((Index{1} << s) - 1);
        Index table = position >> s;
        std::vector<State> delta(s * k);
        for (std::size_t i = 0; i < s * k; ++i) {
            delta[i] = static_cast<State>(table % s);
            table /= s;
        }
        std::vector<bool> accept(s);
        for (std::size_t q = 0; q < s; ++q) accept[q] = (mask >> q) & 1U;
        return Dfa(alphabet_, s, std::move(delta), 0, std::move(accept));
    }

    Alphabet alphabet_;
    std::vector<Dfa> seed_;
};

} // namespace regenc
