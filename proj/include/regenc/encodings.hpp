#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "regenc/automata.hpp"
#include "regenc/enumerate.hpp"
#include "regenc/errors.hpp"
#include "regenc/imageset.hpp"
#include "regenc/word.hpp"

namespace regenc {

/// Injective word-to-word map with its decidable image and partial inverse.
struct Encoding {
    std::string name;
    Alphabet domain;
    Alphabet target;
    std::function<Word(std::string_view)> apply;
    std::function<std::optional<Word>(std::string_view)> inverse;  // defined on the image
    ImageSet image;
};

/// Injective map ℕ → Γ* with decidable image membership; the input of the
/// bijectivization engine.
struct IndexedSource {
    std::string name;
    std::function<Word(Index)> encode;
    std::function<std::optional<Index>(std::string_view)> decode;  // c⁻¹ on the image
    ImageSet image;

    const Alphabet& alphabet() const { return image.alphabet(); }
};

// ---------------------------------------------------------------------------
// Balancedness-prefix encoding

/// 1 iff the binary word has equally many zeros and ones.
inline bool balanced(std::string_view w) {
    Alphabet::binary().require(w);
    return count_letter(w, '0') == count_letter(w, '1');
}

/// f(w) = b(w) w.
inline Word puzzle_encode(std::string_view w) {
    return Word(1, balanced(w) ? '1' : '0') + Word(w);
}

inline std::optional<Word> puzzle_decode(std::string_view w) {
    if (w.empty() || !Alphabet::binary().accepts(w)) return std::nullopt;
    Word rest(w.substr(1));
    if (puzzle_encode(rest) != w) return std::nullopt;
    return rest;
}

/// One-counter machine for f[{0,1}*]: the counter tracks #0 − #1 of the
/// suffix; a leading 1 demands counter 0 at the end, a leading 0 demands
/// a nonzero counter.
inline CounterMachine puzzle_machine() {
    using T = CounterMachine::Transition;
    enum : State { kStart = 0, kBalanced = 1, kUnbalanced = 2 };
    std::vector<T> moves{
        {kStart, '1', kBalanced, 0},        {kStart, '0', kUnbalanced, 0},
        {kBalanced, '0', kBalanced, +1},    {kBalanced, '1', kBalanced, -1},
        {kUnbalanced, '0', kUnbalanced, +1}, {kUnbalanced, '1', kUnbalanced, -1},
    };
    return CounterMachine(Alphabet::binary(), 3, kStart, moves,
                          {std::nullopt, CounterTest::zero, CounterTest::nonzero});
}

inline Encoding puzzle_encoding() {
    return Encoding{"puzzle",
                    Alphabet::binary(),
                    Alphabet::binary(),
                    [](std::string_view w) { return puzzle_encode(w); },
                    [](std::string_view w) { return puzzle_decode(w); },
                    counter_image(puzzle_machine())};
}

/// c(i) = f(v_i) with v_i the i-th binary word in shortlex order.
inline IndexedSource puzzle_source() {
    WordOrder order(Alphabet::binary());
    return IndexedSource{"puzzle",
                         [order](Index i) { return puzzle_encode(order.word_at(i)); },
                         [order](std::string_view w) -> std::optional<Index> {
                             auto v = puzzle_decode(w);
                             if (!v) return std::nullopt;
                             return order.index_of(*v);
                         },
                         counter_image(puzzle_machine())};
}

/// c(i) = 0^{2i}: a unary injection whose image (00)* is regular.
inline IndexedSource unary_even_source() {
    const Alphabet unary = Alphabet::unary();
    Dfa even(unary, 2, {1, 0}, 0, {true, false});
    return IndexedSource{"unary-even",
                         [](Index i) { return Word(static_cast<std::size_t>(2 * i), '0'); },
                         [](std::string_view w) -> std::optional<Index> {
                             if (w.size() % 2 != 0 || !Alphabet::unary().accepts(w)) return std::nullopt;
                             return w.size() / 2;
                         },
                         regular_image(even)};
}

// ---------------------------------------------------------------------------
// Factorial unary representation

inline constexpr std::uint64_t kDefaultLengthBudget = 1'000'000;

inline std::uint64_t factorial(std::uint64_t n) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (f > std::numeric_limits<std::uint64_t>::max() / i) throw ResourceError("factorial overflows 64 bits");
        f *= i;
    }
    return f;
}

/// 0^{n!}; refuses lengths above `length_budget`.
inline Word factorial_encode(std::uint64_t n, std::uint64_t length_budget = kDefaultLengthBudget) {
    if (n > 20) throw ResourceError("factorial_encode: " + std::to_string(n) + "! exceeds 64 bits");
    std::uint64_t len = factorial(n);
    if (len > length_budget)
        throw ResourceError("factorial_encode: length " + std::to_string(len) + " exceeds budget " +
                            std::to_string(length_budget));
    return Word(static_cast<std::size_t>(len), '0');
}

/// Image {0^{n!}} with an exact analyzer for unary regular languages: all
/// m! from the lasso's factorial stabilizer on reach one and the same state.
inline ImageSet factorial_image(std::uint64_t length_budget = kDefaultLengthBudget) {
    auto contains = [](std::string_view w) {
        if (w.empty() || !Alphabet::unary().accepts(w)) return false;
        std::uint64_t len = w.size(), f = 1;
        for (std::uint64_t i = 2; f < len; ++i) f *= i;
        return f == len;
    };
    auto intersect = [length_budget](const Dfa& r) {
        UnaryLasso<bool> lasso(r);
        std::uint64_t m = lasso.factorial_stabilizer();
        if (r.output(lasso.after_factorial(m))) return LanguageSize::infinite();
        FinWordSet members;
        for (std::uint64_t j = 0; j < m; ++j)
            if (r.output(lasso.after_factorial(j))) members.insert(factorial_encode(j, length_budget));
        return LanguageSize::finite(std::move(members));
    };
    return ImageSet(std::make_shared<CallbackSource>(Alphabet::unary(), "factorial", contains, intersect));
}

// ---------------------------------------------------------------------------
// Standard base-k representation

inline Alphabet digit_alphabet(unsigned k) {
    if (k < 2 || k > 10) throw InputError("base must be in [2, 10]");
    std::string digits;
    for (unsigned d = 0; d < k; ++d) digits += static_cast<char>('0' + d);
    return Alphabet(digits);
}

/// Most significant digit first, no leading zeros, 0 ↦ "0".
inline Word base_k_encode(std::uint64_t n, unsigned k) {
    if (k < 2) throw InputError("base_k_encode: base must be at least 2");
    (void)digit_alphabet(k);
    if (n == 0) return "0";
    Word w;
    while (n > 0) {
        w.insert(w.begin(), static_cast<char>('0' + n % k));
        n /= k;
    }
    return w;
}

inline std::optional<std::uint64_t> base_k_decode(std::string_view w, unsigned k) {
    if (w.empty() || !digit_alphabet(k).accepts(w)) return std::nullopt;
    if (w.size() > 1 && w[0] == '0') return std::nullopt;
    std::uint64_t n = 0;
    for (char c : w) {
        auto d = static_cast<std::uint64_t>(c - '0');
        if (n > (std::numeric_limits<std::uint64_t>::max() - d) / k) return std::nullopt;
        n = n * k + d;
    }
    return n;
}

} // namespace regenc
