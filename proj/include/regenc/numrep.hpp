#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regenc/automata.hpp"
#include "regenc/bijectify.hpp"
#include "regenc/encodings.hpp"
#include "regenc/enumerate.hpp"
#include "regenc/errors.hpp"
#include "regenc/imageset.hpp"
#include "regenc/word.hpp"

namespace regenc {

/// Number representation r : ℕ → Γ*.
struct Representation {
    std::string name;
    Alphabet alphabet;
    std::function<Word(Index)> map;
    std::function<std::optional<Index>(std::string_view)> inverse;
    bool bijective = false;
    std::optional<ImageSet> image;

    Word operator()(Index n) const { return map(n); }
};

inline Representation base_k_representation(unsigned k) {
    Alphabet digits = digit_alphabet(k);
    // Canonical numerals: "0" or a word not starting with 0.
    std::vector<State> delta(4 * k);
    for (unsigned a = 0; a < k; ++a) {
        delta[0 * k + a] = a == 0 ? 1 : 2;
        delta[1 * k + a] = 3;
        delta[2 * k + a] = 2;
        delta[3 * k + a] = 3;
    }
    Dfa canonical(digits, 4, std::move(delta), 0, {false, true, true, false});
    return {"base-" + std::to_string(k),
            digits,
            [k](Index n) { return base_k_encode(n, k); },
            [k](std::string_view w) -> std::optional<Index> { return base_k_decode(w, k); },
            false,
            regular_image(canonical)};
}

/// n ↦ 0^n.
inline Representation unary_representation() {
    return {"unary",
            Alphabet::unary(),
            [](Index n) { return Word(static_cast<std::size_t>(n), '0'); },
            [](std::string_view w) -> std::optional<Index> {
                if (!Alphabet::unary().accepts(w)) return std::nullopt;
                return w.size();
            },
            true,
            regular_image(universal_dfa(Alphabet::unary()))};
}

/// n ↦ 0^{n!}. Not injective: 0! = 1! = 1.
inline Representation factorial_representation(std::uint64_t length_budget = kDefaultLengthBudget) {
    return {"factorial",
            Alphabet::unary(),
            [length_budget](Index n) { return factorial_encode(n, length_budget); },
            [](std::string_view w) -> std::optional<Index> {
                if (w.empty() || !Alphabet::unary().accepts(w)) return std::nullopt;
                std::uint64_t f = 1, n = 1;
                while (f < w.size()) f *= ++n;
                if (f != w.size()) return std::nullopt;
                return n;
            },
            false,
            factorial_image(length_budget)};
}

/// d from a running engine; evaluation advances the engine, so the result
/// shares it and must stay on one thread.
inline Representation engine_representation(std::shared_ptr<Bijectivizer> engine, std::size_t step_budget) {
    Alphabet gamma = engine->source().alphabet();
    return {"bijectified-" + engine->source().name,
            gamma,
            [engine, step_budget](Index n) { return engine->d_of(n, step_budget); },
            [engine, step_budget](std::string_view w) -> std::optional<Index> {
                if (!engine->word_order().alphabet().accepts(w)) return std::nullopt;
                return engine->d_inverse(w, step_budget);
            },
            true,
            regular_image(universal_dfa(gamma))};
}

struct SequenceOracle {
    Alphabet outputs;
    std::function<char(Index)> at;

    char operator()(Index n) const { return at(n); }
};

struct HorizonReport {
    bool ok = true;
    Index checked = 0;
    std::optional<Index> counterexample;
};

/// n ∈ s ⟺ a accepts r(n), for n < horizon.
inline HorizonReport recognizes(const Representation& r, const Dfa& a, const std::function<bool(Index)>& s,
                                Index horizon) {
    if (horizon == 0) throw ContractError("recognizes: horizon must be at least 1");
    HorizonReport report;
    for (Index n = 0; n < horizon; ++n) {
        ++report.checked;
        if (a(r(n)) != s(n)) {
            report.ok = false;
            report.counterexample = n;
            break;
        }
    }
    return report;
}

inline char automatic_output(const Dfao& a, const Representation& r, Index n) { return a(r(n)); }

/// Non-empty fibers {w : a(w) = x}, minimized.
inline std::map<char, Dfa> fibers(const Dfao& a) {
    std::map<char, Dfa> out;
    for (char x : a.output_alphabet().letters()) {
        Dfa fiber = minimize(a.map_outputs([x](char o) { return o == x; }));
        if (!is_empty(fiber)) out.emplace(x, std::move(fiber));
    }
    return out;
}

/// DFAO that outputs the letter of the unique fiber containing the input,
/// and `fallback` where no fiber (or, off the image, several) match. Fibers
/// must be pairwise disjoint on `image` when given, and everywhere otherwise.
inline Dfao dfao_from_fibers(const std::map<char, Dfa>& fs, char fallback,
                             const std::optional<ImageSet>& image = std::nullopt) {
    if (fs.empty()) throw InputError("dfao_from_fibers: no fibers");
    std::vector<char> letters;
    std::vector<Dfa> parts;
    for (const auto& [x, f] : fs) {
        letters.push_back(x);
        parts.push_back(f);
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            Dfa both = intersect(parts[i], parts[j]);
            bool clash = image ? !image->analyze(both).is_empty() : !is_empty(both);
            if (clash)
                throw ContractError(std::string("dfao_from_fibers: fibers '") + letters[i] + "' and '" + letters[j] +
                                    "' overlap");
        }
    std::set<char> out_letters(letters.begin(), letters.end());
    out_letters.insert(fallback);
    Machine<std::string> product = signature_product(parts);
    Machine<char> m = product.map_outputs([&](const std::string& sig) {
        char pick = fallback;
        int hits = 0;
        for (std::size_t i = 0; i < sig.size(); ++i)
            if (sig[i] == '1') {
                pick = letters[i];
                ++hits;
            }
        return hits == 1 ? pick : fallback;
    });
    return minimize(Dfao(std::move(m), Alphabet(std::string(out_letters.begin(), out_letters.end()))));
}

// ---------------------------------------------------------------------------
// Factorial representation

struct FactorialAnalysis {
    std::uint64_t tail = 0;        // n₀
    std::uint64_t cycle = 1;       // ℓ
    std::uint64_t m0 = 0;          // least m with m! ≥ n₀ and ℓ | m!
    std::uint64_t naive_m0 = 0;    // least m with m! ≥ n₀ + ℓ
    char limit = 0;                // A(0^{m!}) for all m ≥ m0
};

inline FactorialAnalysis factorial_analysis(const Dfao& a) {
    if (!(a.alphabet() == Alphabet::unary())) throw InputError("factorial_analysis: automaton must be over {0}");
    UnaryLasso<char> lasso(a.machine());
    FactorialAnalysis r;
    r.tail = lasso.tail;
    r.cycle = lasso.cycle;
    r.m0 = lasso.factorial_stabilizer();
    std::uint64_t f = 1;
    while (f < r.tail + r.cycle) f *= ++r.naive_m0;
    r.limit = a.output(lasso.after_factorial(r.m0));
    return r;
}

/// Chain q₀ … q_m with m = n₀!, q_m absorbing, output σ(j) at q_{j!} and
/// σ(n₀) elsewhere. Needs σ(0) = σ(1) since both are read at q₁.
inline Dfao ultimately_constant_automaton(const SequenceOracle& sigma, std::uint64_t n0,
                                          std::uint64_t length_budget = kDefaultLengthBudget,
                                          Index spot_check = 8) {
    if (n0 > 20 || factorial(n0) > length_budget)
        throw ResourceError("ultimately_constant_automaton: " + std::to_string(n0) + "! exceeds the length budget");
    const char limit = sigma(n0);
    for (Index n = n0; n < n0 + spot_check; ++n)
        if (sigma(n) != limit)
            throw ContractError("ultimately_constant_automaton: sigma(" + std::to_string(n) + ") differs from sigma(" +
                                std::to_string(n0) + ")");
    if (sigma(0) != sigma(1))
        throw ContractError("ultimately_constant_automaton: sigma(0) != sigma(1) but 0! = 1!, so no automaton can "
                            "separate them");
    const std::size_t m = static_cast<std::size_t>(factorial(n0));
    std::vector<State> delta(m + 1);
    for (std::size_t i = 0; i < m; ++i) delta[i] = static_cast<State>(i + 1);
    delta[m] = static_cast<State>(m);
    std::vector<char> out(m + 1, limit);
    for (std::uint64_t j = 0, f = 1; f <= m; f *= ++j) out[f] = sigma(j);
    return Dfao(Alphabet::unary(), m + 1, std::move(delta), 0, std::move(out), sigma.outputs);
}

struct ParityWitness {
    Index first = 0;
    Index second = 0;
    bool first_even = true;
};

/// σ(n) = parity of |d(n)|; the first index whose parity differs from d(0).
inline ParityWitness parity_counterexample(const Representation& d, Index horizon) {
    if (!(d.alphabet == Alphabet::unary())) throw InputError("parity_counterexample: representation must be unary");
    const Dfa even(Alphabet::unary(), 2, {1, 0}, 0, {true, false});
    const bool base = even(d(0));
    for (Index n = 1; n < horizon; ++n)
        if (even(d(n)) != base) return {0, n, base};
    throw ResourceError("parity_counterexample: no alternation below " + std::to_string(horizon));
}

// ---------------------------------------------------------------------------
// Diagonal language

/// True iff ρ(w_n) is rejected by A_n.
inline bool diagonal_member(const Encoding& rho, const AutomatonOrder& automata, Index n) {
    detail::require_same_alphabet(rho.target, automata.alphabet());
    Word w = WordOrder(rho.domain).word_at(n);
    return !automata.automaton_at(n)(rho.apply(w));
}

} // namespace regenc
