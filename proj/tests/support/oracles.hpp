#pragma once

// Brute-force reference implementations used only by the tests. None of
// them call the analyzers or product constructions they are checked against.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "regenc/regenc.hpp"

namespace oracle {

using regenc::Alphabet;
using regenc::Dfa;
using regenc::Dfao;
using regenc::FinWordSet;
using regenc::State;
using regenc::Word;

/// Uniformly random complete DFA with 1..max_states states.
inline Dfa random_dfa(std::mt19937_64& rng, const Alphabet& alphabet, std::size_t max_states) {
    std::uniform_int_distribution<std::size_t> count(1, max_states);
    std::size_t n = count(rng);
    std::uniform_int_distribution<State> target(0, static_cast<State>(n - 1));
    std::bernoulli_distribution coin(0.5);
    std::vector<State> delta(n * alphabet.size());
    for (auto& t : delta) t = target(rng);
    std::vector<bool> accept(n);
    for (std::size_t q = 0; q < n; ++q) accept[q] = coin(rng);
    return Dfa(alphabet, n, std::move(delta), 0, std::move(accept));
}

inline Dfao random_dfao(std::mt19937_64& rng, const Alphabet& alphabet, std::size_t max_states,
                        const Alphabet& outputs) {
    std::uniform_int_distribution<std::size_t> count(1, max_states);
    std::size_t n = count(rng);
    std::uniform_int_distribution<State> target(0, static_cast<State>(n - 1));
    std::uniform_int_distribution<std::size_t> letter(0, outputs.size() - 1);
    std::vector<State> delta(n * alphabet.size());
    for (auto& t : delta) t = target(rng);
    std::vector<char> out(n);
    for (auto& o : out) o = outputs.letter(letter(rng));
    return Dfao(alphabet, n, std::move(delta), 0, std::move(out), outputs);
}

/// All words of length ≤ max_length, generated by plain counting.
inline std::vector<Word> all_words(const Alphabet& alphabet, std::size_t max_length) {
    std::vector<Word> out;
    const std::size_t k = alphabet.size();
    for (std::size_t len = 0; len <= max_length; ++len) {
        std::vector<std::size_t> digits(len, 0);
        while (true) {
            Word w;
            for (auto d : digits) w.push_back(alphabet.letter(d));
            out.push_back(w);
            std::size_t i = len;
            while (i > 0 && ++digits[i - 1] == k) digits[--i] = 0;
            if (i == 0) break;
        }
    }
    return out;
}

inline FinWordSet members_up_to(const Alphabet& alphabet, std::size_t max_length,
                                const std::function<bool(const Word&)>& in) {
    FinWordSet out;
    for (const auto& w : all_words(alphabet, max_length))
        if (in(w)) out.insert(w);
    return out;
}

/// Shortlex position by counting all shorter words and the lexicographic rank.
inline std::uint64_t shortlex_rank(const Alphabet& alphabet, const Word& w) {
    std::uint64_t rank = 0;
    for (const auto& u : all_words(alphabet, w.size())) {
        if (u == w) return rank;
        ++rank;
    }
    return rank;
}

/// For each length ℓ ≤ max_length, whether some word of length ℓ lies in
/// L(r) ∩ L(m). Explores (dfa state, control state, counter) sets per length.
inline std::vector<bool> counter_lengths(const Dfa& r, const regenc::CounterMachine& m, std::size_t max_length) {
    struct Config {
        State q, p;
        long long c;
        bool operator<(const Config& o) const {
            return std::tie(q, p, c) < std::tie(o.q, o.p, o.c);
        }
    };
    std::vector<bool> out(max_length + 1, false);
    std::set<Config> layer{{r.start(), m.start(), 0}};
    for (std::size_t len = 0; len <= max_length; ++len) {
        for (const auto& cfg : layer)
            if (r.output(cfg.q) && regenc::CounterMachine::passes(m.acceptance(cfg.p), cfg.c)) out[len] = true;
        std::set<Config> next;
        for (const auto& cfg : layer)
            for (std::size_t a = 0; a < r.alphabet().size(); ++a)
                if (const auto& mv = m.move(cfg.p, a)) next.insert({r.next(cfg.q, a), mv->to, cfg.c + mv->delta});
        layer = std::move(next);
    }
    return out;
}

/// Same for L(r) ∩ L(image), both DFAs, via the obvious pair walk.
inline std::vector<bool> regular_lengths(const Dfa& r, const Dfa& image, std::size_t max_length) {
    std::vector<bool> out(max_length + 1, false);
    std::set<std::pair<State, State>> layer{{r.start(), image.start()}};
    for (std::size_t len = 0; len <= max_length; ++len) {
        for (const auto& [q, p] : layer)
            if (r.output(q) && image.output(p)) out[len] = true;
        std::set<std::pair<State, State>> next;
        for (const auto& [q, p] : layer)
            for (std::size_t a = 0; a < r.alphabet().size(); ++a) next.insert({r.next(q, a), image.next(p, a)});
        layer = std::move(next);
    }
    return out;
}

} // namespace oracle
