#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace regenc;

namespace {

const Alphabet kBinary = Alphabet::binary();
const Alphabet kUnary = Alphabet::unary();

Dfao thue_morse() { return Dfao(kBinary, 2, {0, 1, 1, 0}, 0, {'0', '1'}, kBinary); }

SequenceOracle from_prefix(std::string prefix) {
    return {kBinary, [prefix](Index n) { return prefix[std::min<std::size_t>(n, prefix.size() - 1)]; }};
}

} // namespace

TEST(Recognizes, Examples) {
    auto base2 = base_k_representation(2);
    EXPECT_TRUE(recognizes(base2, empty_dfa(kBinary), [](Index) { return false; }, 100).ok);
    Dfa last_zero(kBinary, 2, {1, 0, 1, 0}, 0, {false, true});
    EXPECT_TRUE(recognizes(base2, last_zero, [](Index n) { return n % 2 == 0; }, 1000).ok);
    auto bad = recognizes(base2, complement(last_zero), [](Index n) { return n % 2 == 0; }, 1000);
    EXPECT_FALSE(bad.ok);
    EXPECT_EQ(bad.counterexample, std::optional<Index>(0));
    EXPECT_THROW((void)recognizes(base2, last_zero, [](Index) { return true; }, 0), ContractError);
}

TEST(BaseKRepresentation, ImageIsCanonicalNumerals) {
    auto r = base_k_representation(3);
    for (const auto& w : oracle::all_words(Alphabet("012"), 5))
        EXPECT_EQ(r.image->contains(w), base_k_decode(w, 3).has_value()) << w;
}

TEST(AutomaticOutput, ThueMorseAndConstant) {
    auto base2 = base_k_representation(2);
    std::string tm;
    for (Index n = 0; n < 8; ++n) tm += automatic_output(thue_morse(), base2, n);
    EXPECT_EQ(tm, "01101001");
    Dfao constant(kBinary, 1, {0, 0}, 0, {'1'}, kBinary);
    for (Index n = 0; n < 50; ++n) EXPECT_EQ(automatic_output(constant, base2, n), '1');
}

TEST(Fibers, ConstantDfaoHasOneUniversalFiber) {
    Dfao constant(kBinary, 1, {0, 0}, 0, {'1'}, kBinary);
    auto fs = fibers(constant);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_TRUE(equivalent(fs.at('1'), universal_dfa(kBinary)));
}

TEST(Fibers, PartitionAndRoundTrip) {
    std::mt19937_64 rng(51);
    const Alphabet outputs("abc");
    for (int round = 0; round < 40; ++round) {
        Dfao a = oracle::random_dfao(rng, kBinary, 5, outputs);
        auto fs = fibers(a);
        for (const auto& w : oracle::all_words(kBinary, 8)) {
            int hits = 0;
            for (const auto& [x, f] : fs) hits += f(w) ? 1 : 0;
            ASSERT_EQ(hits, 1);
            ASSERT_TRUE(fs.at(a(w))(w));
        }
        Dfao back = dfao_from_fibers(fs, 'a');
        for (const auto& w : oracle::all_words(kBinary, 8)) ASSERT_EQ(back(w), a(w));
    }
}

TEST(Fibers, OverlapIsRejectedOnlyOnTheImage) {
    Dfa ends0(kBinary, 2, {1, 0, 1, 0}, 0, {false, true});
    Dfa all = universal_dfa(kBinary);
    std::map<char, Dfa> fs{{'0', ends0}, {'1', all}};
    EXPECT_THROW((void)dfao_from_fibers(fs, '0'), ContractError);
    // On the image {words ending in 1} the two do not overlap.
    ImageSet odd = regular_image(complement(ends0));
    Dfao a = dfao_from_fibers(fs, '0', odd);
    EXPECT_EQ(a("1"), '1');
    EXPECT_EQ(a("0"), '0');  // both fibers match off the image: fallback
}

TEST(FactorialAnalysis, Examples) {
    Dfao one(kUnary, 1, {0}, 0, {'1'}, kBinary);
    auto r1 = factorial_analysis(one);
    EXPECT_EQ(r1.tail, 0u);
    EXPECT_EQ(r1.cycle, 1u);
    EXPECT_EQ(r1.m0, 0u);
    EXPECT_EQ(r1.naive_m0, 0u);
    EXPECT_EQ(r1.limit, '1');

    // 0 -> 1 <-> 2
    Dfao chain(kUnary, 3, {1, 2, 1}, 0, {'0', '1', '0'}, kBinary);
    auto r2 = factorial_analysis(chain);
    EXPECT_EQ(r2.tail, 1u);
    EXPECT_EQ(r2.cycle, 2u);
    for (std::uint64_t m = r2.m0; m <= r2.m0 + 4; ++m) EXPECT_EQ(chain(factorial_encode(m)), r2.limit) << m;
    EXPECT_THROW((void)factorial_analysis(thue_morse()), InputError);
}

TEST(FactorialAnalysis, NaiveBoundFailsWhenTheCycleExceedsIt) {
    // A pure 5-cycle: tail 0, cycle 5. m! ≥ 5 first at m = 3, but 5 ∤ 3!.
    Dfao five(kUnary, 5, {1, 2, 3, 4, 0}, 0, {'1', '0', '0', '0', '0'}, kBinary);
    auto r = factorial_analysis(five);
    EXPECT_EQ(r.naive_m0, 3u);
    EXPECT_EQ(r.m0, 5u);
    EXPECT_NE(five(factorial_encode(3)), five(factorial_encode(5)));
    for (std::uint64_t m = r.m0; m <= r.m0 + 4 && m <= 9; ++m) EXPECT_EQ(five(factorial_encode(m)), r.limit);
}

TEST(FactorialAnalysis, RandomDfaosStabilize) {
    std::mt19937_64 rng(52);
    for (int round = 0; round < 300; ++round) {
        Dfao a = oracle::random_dfao(rng, kUnary, 6, kBinary);
        auto r = factorial_analysis(a);
        // Direct simulation on the words 0^{m!} where they fit; beyond that the
        // lasso walk (checked against real words in the automata tests).
        UnaryLasso<char> lasso(a.machine());
        for (std::uint64_t m = r.m0; m <= r.m0 + 4; ++m) {
            char got = m <= 9 ? a(factorial_encode(m)) : a.output(lasso.after_factorial(m));
            ASSERT_EQ(got, r.limit) << m;
        }
    }
}

TEST(UltimatelyConstant, ConstantSequence) {
    auto a = ultimately_constant_automaton(from_prefix("1"), 0);
    EXPECT_EQ(a.size(), 2u);
    for (std::uint64_t n = 0; n <= 6; ++n) EXPECT_EQ(a(factorial_encode(n)), '1');
}

TEST(UltimatelyConstant, ReproducesSequencesWithEqualFirstTwoTerms) {
    for (const std::string prefix : {"0010", "1101", "00110", "0"}) {
        std::uint64_t n0 = prefix.size() - 1;
        auto sigma = from_prefix(prefix);
        auto a = ultimately_constant_automaton(sigma, n0);
        EXPECT_EQ(a.size(), factorial(n0) + 1);
        for (std::uint64_t n = 0; n <= 6; ++n) EXPECT_EQ(a(factorial_encode(n)), sigma(n)) << prefix << " " << n;
    }
}

TEST(UltimatelyConstant, FirstTwoTermsMustAgree) {
    // c(0) = c(1) = "0", so 1,0,0,... is not produced by any automaton.
    EXPECT_THROW((void)ultimately_constant_automaton(from_prefix("10"), 1), ContractError);
    EXPECT_THROW((void)ultimately_constant_automaton(from_prefix("01"), 5), ContractError);
    SequenceOracle not_constant{kBinary, [](Index n) { return n % 2 ? '1' : '0'; }};
    EXPECT_THROW((void)ultimately_constant_automaton(not_constant, 2), ContractError);
    EXPECT_THROW((void)ultimately_constant_automaton(from_prefix("0"), 10), ResourceError);
}

TEST(Parity, IdentityUnary) {
    auto w = parity_counterexample(unary_representation(), 50);
    EXPECT_EQ(w.first, 0u);
    EXPECT_EQ(w.second, 1u);
    EXPECT_THROW((void)parity_counterexample(base_k_representation(2), 50), InputError);
}

TEST(Parity, EngineBijection) {
    auto engine = std::make_shared<Bijectivizer>(unary_even_source());
    auto d = engine_representation(engine, 200);
    auto w = parity_counterexample(d, 50);
    EXPECT_LT(w.second, 50u);
    EXPECT_NE(d(w.first).size() % 2, d(w.second).size() % 2);
}

TEST(Parity, NoAlternationWithinHorizonIsAResourceError) {
    Representation evens{"evens", kUnary, [](Index n) { return Word(2 * n, '0'); },
                         [](std::string_view) { return std::optional<Index>(); }, false, std::nullopt};
    EXPECT_THROW((void)parity_counterexample(evens, 20), ResourceError);
}

TEST(Diagonal, Examples) {
    Encoding rho = puzzle_encoding();
    AutomatonOrder seeded(kBinary, {empty_dfa(kBinary), universal_dfa(kBinary)});
    EXPECT_TRUE(diagonal_member(rho, seeded, 0));
    EXPECT_FALSE(diagonal_member(rho, seeded, 1));

    AutomatonOrder order(kBinary);
    WordOrder domain(kBinary);
    for (Index n = 0; n < 50; ++n) {
        bool in_diagonal = diagonal_member(rho, order, n);
        EXPECT_NE(in_diagonal, order[n](rho.apply(domain.word_at(n)))) << n;
    }
}
