#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace regenc;

namespace {

const Alphabet kBinary = Alphabet::binary();

Dfa last_letter_is(char c) {
    return Dfa(kBinary, 2, {c == '0' ? 1u : 0u, c == '1' ? 1u : 0u, c == '0' ? 1u : 0u, c == '1' ? 1u : 0u}, 0,
               {false, true});
}

} // namespace

TEST(Alphabet, RejectsBadLetterSets) {
    EXPECT_THROW(Alphabet(""), InputError);
    EXPECT_THROW(Alphabet("00"), InputError);
    EXPECT_THROW(Alphabet("10"), InputError);
    EXPECT_EQ(Alphabet("012").rank('2'), 2u);
    EXPECT_THROW((void)kBinary.rank('a'), InputError);
    EXPECT_FALSE(Alphabet().contains('0'));
}

TEST(Alphabet, WordsUpToMatchesCounting) {
    for (const auto& a : {Alphabet("0"), Alphabet("01"), Alphabet("abc")})
        EXPECT_EQ(words_up_to(a, 5), oracle::all_words(a, 5));
}

TEST(Machine, ValidatesTables) {
    EXPECT_THROW(Dfa(kBinary, 0, {}, 0, {}), InputError);
    EXPECT_THROW(Dfa(kBinary, 1, {0}, 0, {true}), InputError);
    EXPECT_THROW(Dfa(kBinary, 1, {0, 1}, 0, {true}), InputError);
    EXPECT_THROW(Dfa(kBinary, 1, {0, 0}, 1, {true}), InputError);
    EXPECT_THROW(Dfao(kBinary, 1, {0, 0}, 0, {'x'}, Alphabet("01")), InputError);
}

TEST(Products, BooleanOperationsAgreeWithMembership) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        Dfa a = oracle::random_dfa(rng, kBinary, 4), b = oracle::random_dfa(rng, kBinary, 4);
        Dfa i = intersect(a, b), u = unite(a, b), s = subtract(a, b), x = symmetric_difference(a, b),
            c = complement(a);
        for (const auto& w : oracle::all_words(kBinary, 7)) {
            ASSERT_EQ(i(w), a(w) && b(w));
            ASSERT_EQ(u(w), a(w) || b(w));
            ASSERT_EQ(s(w), a(w) && !b(w));
            ASSERT_EQ(x(w), a(w) != b(w));
            ASSERT_EQ(c(w), !a(w));
        }
    }
}

TEST(Products, SignatureProductListsAcceptanceVector) {
    std::vector<Dfa> parts{last_letter_is('0'), last_letter_is('1'), universal_dfa(kBinary)};
    auto sig = signature_product(parts);
    EXPECT_EQ(sig(""), "001");
    EXPECT_EQ(sig("10"), "101");
    EXPECT_EQ(sig("01"), "011");
}

TEST(Minimize, PreservesLanguageAndIsCanonical) {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 80; ++round) {
        Dfa a = oracle::random_dfa(rng, kBinary, 5);
        Dfa m = minimize(a);
        EXPECT_LE(m.size(), a.size());
        for (const auto& w : oracle::all_words(kBinary, 8)) ASSERT_EQ(m(w), a(w));
        // A padded copy with an unreachable state minimizes to the same value.
        std::vector<State> delta = a.transitions();
        delta.insert(delta.end(), {0, 0});
        std::vector<bool> out = a.outputs();
        out.push_back(true);
        Dfa padded(kBinary, a.size() + 1, delta, a.start(), out);
        EXPECT_EQ(minimize(padded), m);
        EXPECT_EQ(minimize(m), m);
    }
}

TEST(Minimize, KnownSizes) {
    EXPECT_EQ(minimize(universal_dfa(kBinary)).size(), 1u);
    EXPECT_EQ(minimize(last_letter_is('0')).size(), 2u);
    // Words of length exactly 2: states 0,1,2,sink.
    FinWordSet len2{"00", "01", "10", "11"};
    EXPECT_EQ(minimize(finite_language_dfa(kBinary, len2)).size(), 4u);
}

TEST(FiniteLanguage, AcceptsExactlyTheSet) {
    FinWordSet words{"", "0", "0110", "111"};
    Dfa a = finite_language_dfa(kBinary, words);
    for (const auto& w : oracle::all_words(kBinary, 6)) EXPECT_EQ(a(w), words.count(w) == 1) << w;
}

TEST(Emptiness, VerdictsMatchBruteForce) {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 200; ++round) {
        Dfa a = oracle::random_dfa(rng, kBinary, 4);
        auto size = emptiness_finiteness(a);
        // Oracle: members up to 2n-1 decide everything for an n-state DFA.
        const std::size_t n = a.size();
        auto brute = oracle::members_up_to(kBinary, 2 * n, [&](const Word& w) { return a(w); });
        bool long_member = false;
        for (const auto& w : brute) long_member |= w.size() >= n;
        if (brute.empty()) {
            EXPECT_TRUE(size.is_empty());
        } else if (long_member) {
            EXPECT_TRUE(size.is_infinite());
        } else {
            ASSERT_EQ(size.kind, LanguageSize::Kind::finite);
            EXPECT_EQ(size.members, brute);
        }
        EXPECT_EQ(is_empty(a), brute.empty());
    }
}

TEST(Equivalence, ModuloFinite) {
    Dfa a = last_letter_is('0');
    Dfa b = patch_acceptance(a, FinWordSet{"1", "11"}, FinWordSet{"0"});
    auto diff = equivalent_modulo_finite(a, b);
    EXPECT_EQ(diff.kind, FiniteDifference::Kind::finite);
    EXPECT_EQ(diff.words, (FinWordSet{"0", "1", "11"}));
    EXPECT_EQ(equivalent_modulo_finite(a, a).kind, FiniteDifference::Kind::equal);
    EXPECT_EQ(equivalent_modulo_finite(a, last_letter_is('1')).kind, FiniteDifference::Kind::infinite);
    EXPECT_TRUE(equivalent(a, minimize(a)));
}

TEST(UnaryLasso, TailCycleAndFactorialStates) {
    // 0 -> 1 -> 2 -> 3 -> 1 : tail 1, cycle 3.
    Dfa a(Alphabet::unary(), 4, {1, 2, 3, 1}, 0, {false, true, false, false});
    UnaryLasso<bool> lasso(a);
    EXPECT_EQ(lasso.tail, 1u);
    EXPECT_EQ(lasso.cycle, 3u);
    for (std::uint64_t n = 0; n < 40; ++n) EXPECT_EQ(lasso.after(n), a.walk(a.start(), Word(n, '0')));
    for (std::uint64_t m = 0; m <= 7; ++m)
        EXPECT_EQ(lasso.after_factorial(m), a.walk(a.start(), factorial_encode(m)));
    EXPECT_EQ(lasso.factorial_stabilizer(), 3u);  // 3! = 6 ≥ 1, 3 | 6
}

TEST(WordOrder, MatchesCountingOrder) {
    for (const auto& a : {Alphabet("0"), Alphabet("01"), Alphabet("abc")}) {
        WordOrder order(a);
        auto words = oracle::all_words(a, 6);
        for (std::size_t i = 0; i < words.size(); ++i) {
            ASSERT_EQ(order.word_at(i), words[i]);
            ASSERT_EQ(order.index_of(words[i]), i);
        }
    }
    WordOrder binary(kBinary);
    EXPECT_EQ(binary.word_at(0), "");
    EXPECT_EQ(binary.word_at(1), "0");
    EXPECT_EQ(binary.word_at(2), "1");
    EXPECT_EQ(binary.word_at(3), "00");
    EXPECT_EQ(binary.word_at(15), "0000");
    EXPECT_THROW((void)binary.index_of(Word(70, '1')), ResourceError);
}

TEST(AutomatonOrder, SeedsFirstThenAllSmallDfasUpToIsomorphism) {
    Dfa seed = last_letter_is('1');
    AutomatonOrder order(kBinary, {seed});
    EXPECT_EQ(order[0], seed);
    EXPECT_EQ(order[1].size(), 1u);
    EXPECT_EQ(AutomatonOrder::block_size(1, 2), 2u);
    EXPECT_EQ(AutomatonOrder::block_size(2, 2), 64u);
    EXPECT_EQ(AutomatonOrder::block_size(3, 2), 729u * 8u);

    // Every 2-state DFA (start 0) appears exactly once in the 2-state block.
    std::set<std::pair<std::vector<State>, std::vector<bool>>> seen;
    for (Index i = 3; i < 3 + 64; ++i) {
        Dfa d = order[i];
        ASSERT_EQ(d.size(), 2u);
        seen.insert({d.transitions(), d.outputs()});
    }
    EXPECT_EQ(seen.size(), 64u);

    // Every minimal language with ≤ 2 states shows up among the first 67.
    std::set<std::pair<std::vector<State>, std::vector<bool>>> languages;
    for (Index i = 1; i < 67; ++i) {
        Dfa m = minimize(order[i]);
        languages.insert({m.transitions(), m.outputs()});
    }
    std::mt19937_64 rng(14);
    for (int round = 0; round < 50; ++round) {
        Dfa m = minimize(oracle::random_dfa(rng, kBinary, 2));
        EXPECT_TRUE(languages.count({m.transitions(), m.outputs()}));
    }
}
