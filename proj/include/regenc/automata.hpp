#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "regenc/errors.hpp"
#include "regenc/word.hpp"

namespace regenc {

using State = std::uint32_t;

/// Complete deterministic automaton with a Moore-style output per state.
///
/// `Machine<bool>` is a DFA (output = accepting), `Machine<char>` backs a
/// DFAO, and `Machine<std::string>` carries tuples of component outputs for
/// product constructions. Values are immutable after construction.
template <class Out>
class Machine {
public:
    using output_type = Out;

    Machine() = default;

    Machine(Alphabet alphabet, std::size_t states, std::vector<State> delta, State start, std::vector<Out> output)
        : alphabet_(std::move(alphabet)), states_(states), delta_(std::move(delta)), start_(start),
          output_(std::move(output)) {
        if (states_ == 0) throw InputError("automaton needs at least one state");
        if (delta_.size() != states_ * alphabet_.size()) throw InputError("transition table has wrong size");
        if (output_.size() != states_) throw InputError("output table has wrong size");
        if (start_ >= states_) throw InputError("start state out of range");
        for (State q : delta_)
            if (q >= states_) throw InputError("transition target out of range");
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return states_; }
    State start() const noexcept { return start_; }

    State next(State q, std::size_t letter_rank) const { return delta_[q * alphabet_.size() + letter_rank]; }
    State next(State q, char letter) const { return next(q, alphabet_.rank(letter)); }

    Out output(State q) const { return output_[q]; }
    const std::vector<Out>& outputs() const noexcept { return output_; }
    const std::vector<State>& transitions() const noexcept { return delta_; }

    State walk(State q, std::string_view w) const {
        for (char c : w) q = next(q, alphabet_.rank(c));
        return q;
    }

    Out run(std::string_view w) const { return output(walk(start_, w)); }
    Out operator()(std::string_view w) const { return run(w); }

    template <class F>
    auto map_outputs(F&& f) const -> Machine<std::decay_t<decltype(f(std::declval<Out>()))>> {
        using R = std::decay_t<decltype(f(std::declval<Out>()))>;
        std::vector<R> out;
        out.reserve(states_);
        for (const auto& o : output_) out.push_back(f(o));
        return Machine<R>(alphabet_, states_, delta_, start_, std::move(out));
    }

    friend bool operator==(const Machine& a, const Machine& b) {
        return a.alphabet_ == b.alphabet_ && a.states_ == b.states_ && a.delta_ == b.delta_ && a.start_ == b.start_ &&
               a.output_ == b.output_;
    }

private:
    Alphabet alphabet_;
    std::size_t states_ = 0;
    std::vector<State> delta_;
    State start_ = 0;
    std::vector<Out> output_;
};

using Dfa = Machine<bool>;

/// DFA with output letters drawn from a declared output alphabet.
class Dfao : public Machine<char> {
public:
    Dfao() = default;

    Dfao(Machine<char> m, Alphabet output_alphabet) : Machine<char>(std::move(m)), outputs_(std::move(output_alphabet)) {
        for (char c : this->outputs())
            if (!outputs_.contains(c)) throw InputError("DFAO output letter outside its output alphabet");
    }

    Dfao(Alphabet alphabet, std::size_t states, std::vector<State> delta, State start, std::vector<char> output,
         Alphabet output_alphabet)
        : Dfao(Machine<char>(std::move(alphabet), states, std::move(delta), start, std::move(output)),
               std::move(output_alphabet)) {}

    const Alphabet& output_alphabet() const noexcept { return outputs_; }
    const Machine<char>& machine() const noexcept { return *this; }

    friend bool operator==(const Dfao& a, const Dfao& b) {
        return a.machine() == b.machine() && a.outputs_ == b.outputs_;
    }

private:
    Alphabet outputs_;
};

// ---------------------------------------------------------------------------
// Small constructors

inline Dfa constant_dfa(const Alphabet& alphabet, bool accept) {
    return Dfa(alphabet, 1, std::vector<State>(alphabet.size(), 0), 0, {accept});
}

inline Dfa universal_dfa(const Alphabet& alphabet) { return constant_dfa(alphabet, true); }
inline Dfa empty_dfa(const Alphabet& alphabet) { return constant_dfa(alphabet, false); }

/// Builds an automaton by exploring `Key` states from `start` with `step`.
/// `Key` must be ordered; states are numbered in discovery (BFS) order.
template <class Key, class Step, class Output>
auto explore(const Alphabet& alphabet, Key start, Step&& step, Output&& output)
    -> Machine<std::decay_t<decltype(output(start))>> {
    using R = std::decay_t<decltype(output(start))>;
    std::map<Key, State> ids;
    std::vector<Key> keys;
    std::vector<State> delta;
    ids.emplace(start, 0);
    keys.push_back(start);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        for (std::size_t a = 0; a < alphabet.size(); ++a) {
            Key next = step(keys[i], a);
            auto [it, fresh] = ids.emplace(next, static_cast<State>(keys.size()));
            if (fresh) keys.push_back(std::move(next));
            delta.push_back(it->second);
        }
    }
    std::vector<R> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(output(k));
    return Machine<R>(alphabet, keys.size(), std::move(delta), 0, std::move(out));
}

/// DFA accepting exactly the given finite set (trie plus a rejecting sink).
inline Dfa finite_language_dfa(const Alphabet& alphabet, const FinWordSet& words) {
    std::vector<State> delta;
    std::vector<bool> accept;
    const std::size_t k = alphabet.size();
    auto add_state = [&] {
        delta.insert(delta.end(), k, 0);
        accept.push_back(false);
        return static_cast<State>(accept.size() - 1);
    };
    State sink = add_state();
    State root = add_state();
    for (const auto& w : words) {
        State q = root;
        for (char c : w) {
            std::size_t a = alphabet.rank(c);
            if (delta[q * k + a] == sink) {
                State fresh = add_state();
                delta[q * k + a] = fresh;
            }
            q = delta[q * k + a];
        }
        accept[q] = true;
    }
    const std::size_t states = accept.size();
    return Dfa(alphabet, states, std::move(delta), root, std::move(accept));
}

// ---------------------------------------------------------------------------
// Products

namespace detail {

inline void require_same_alphabet(const Alphabet& a, const Alphabet& b) {
    if (!(a == b)) throw InputError("alphabet mismatch: {" + a.letters() + "} vs {" + b.letters() + "}");
}

} // namespace detail

/// Reachable product of `parts`; each product state's output is
/// `combine(outs)` where `outs` lists the component outputs in order.
template <class M, class Combine>
auto product(std::span<const M> parts, Combine&& combine) {
    using In = typename M::output_type;
    using R = std::decay_t<decltype(combine(std::declval<const std::vector<In>&>()))>;
    if (parts.empty()) throw InputError("product of zero automata");
    const Alphabet& alphabet = parts.front().alphabet();
    for (const auto& p : parts) detail::require_same_alphabet(alphabet, p.alphabet());

    std::vector<State> start;
    for (const auto& p : parts) start.push_back(p.start());
    return explore(
        alphabet, start,
        [&](const std::vector<State>& key, std::size_t a) {
            std::vector<State> next(key.size());
            for (std::size_t i = 0; i < key.size(); ++i) next[i] = parts[i].next(key[i], a);
            return next;
        },
        [&](const std::vector<State>& key) -> R {
            std::vector<In> outs;
            outs.reserve(key.size());
            for (std::size_t i = 0; i < key.size(); ++i) outs.push_back(parts[i].output(key[i]));
            return combine(outs);
        });
}

/// Boolean combination of DFAs; `formula` sees the acceptance vector.
inline Dfa combine(std::span<const Dfa> parts, const std::function<bool(const std::vector<bool>&)>& formula) {
    return product(parts, formula);
}

/// Output-tuple product of DFAOs; each state outputs the string of
/// component output letters.
inline Machine<std::string> combine(std::span<const Dfao> parts) {
    return product(parts, [](const std::vector<char>& outs) { return std::string(outs.begin(), outs.end()); });
}

/// Signature product of DFAs: each state outputs a string of '0'/'1', one
/// character per component (its acceptance).
inline Machine<std::string> signature_product(std::span<const Dfa> parts) {
    return product(parts, [](const std::vector<bool>& outs) {
        std::string s;
        for (bool b : outs) s += b ? '1' : '0';
        return s;
    });
}

inline Dfa complement(const Dfa& a) {
    return a.map_outputs([](bool b) { return !b; });
}

inline Dfa intersect(const Dfa& a, const Dfa& b) {
    const Dfa parts[] = {a, b};
    return combine(parts, [](const std::vector<bool>& v) { return v[0] && v[1]; });
}

inline Dfa unite(const Dfa& a, const Dfa& b) {
    const Dfa parts[] = {a, b};
    return combine(parts, [](const std::vector<bool>& v) { return v[0] || v[1]; });
}

inline Dfa subtract(const Dfa& a, const Dfa& b) {
    const Dfa parts[] = {a, b};
    return combine(parts, [](const std::vector<bool>& v) { return v[0] && !v[1]; });
}

inline Dfa symmetric_difference(const Dfa& a, const Dfa& b) {
    const Dfa parts[] = {a, b};
    return combine(parts, [](const std::vector<bool>& v) { return v[0] != v[1]; });
}

// ---------------------------------------------------------------------------
// Minimization

/// States reachable from the start, relabelled in BFS order (letters in
/// alphabet order). Equal languages yield identical minimal machines.
template <class Out>
Machine<Out> canonical_reachable(const Machine<Out>& m) {
    const std::size_t k = m.alphabet().size();
    std::vector<State> id(m.size(), static_cast<State>(-1));
    std::vector<State> order{m.start()};
    id[m.start()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t a = 0; a < k; ++a) {
            State t = m.next(order[i], a);
            if (id[t] == static_cast<State>(-1)) {
                id[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    std::vector<State> delta;
    std::vector<Out> out;
    delta.reserve(order.size() * k);
    for (State q : order) {
        for (std::size_t a = 0; a < k; ++a) delta.push_back(id[m.next(q, a)]);
        out.push_back(m.output(q));
    }
    return Machine<Out>(m.alphabet(), order.size(), std::move(delta), 0, std::move(out));
}

/// Moore partition refinement followed by canonical renumbering.
template <class Out>
Machine<Out> minimize(const Machine<Out>& input) {
    Machine<Out> m = canonical_reachable(input);
    const std::size_t n = m.size();
    const std::size_t k = m.alphabet().size();

    std::vector<std::size_t> block(n);
    std::size_t blocks = 0;
    {
        std::map<Out, std::size_t> by_output;
        for (State q = 0; q < n; ++q) {
            auto [it, fresh] = by_output.emplace(m.output(q), by_output.size());
            block[q] = it->second;
        }
        blocks = by_output.size();
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> signatures;
        std::vector<std::size_t> refined(n);
        std::vector<std::size_t> sig(k + 1);
        for (State q = 0; q < n; ++q) {
            sig[0] = block[q];
            for (std::size_t a = 0; a < k; ++a) sig[a + 1] = block[m.next(q, a)];
            auto [it, fresh] = signatures.emplace(sig, signatures.size());
            refined[q] = it->second;
        }
        bool stable = signatures.size() == blocks;
        block = std::move(refined);
        blocks = signatures.size();
        if (stable) break;
    }

    std::vector<State> delta(blocks * k);
    std::vector<Out> out(blocks);
    for (State q = 0; q < n; ++q) {
        for (std::size_t a = 0; a < k; ++a) delta[block[q] * k + a] = static_cast<State>(block[m.next(q, a)]);
        out[block[q]] = m.output(q);
    }
    return canonical_reachable(
        Machine<Out>(m.alphabet(), blocks, std::move(delta), static_cast<State>(block[m.start()]), std::move(out)));
}

inline Dfao minimize(const Dfao& a) { return Dfao(minimize(a.machine()), a.output_alphabet()); }

// ---------------------------------------------------------------------------
// Unary behaviour

/// Tail/cycle shape of the run on 0, 00, 000, ... from the start state:
/// δ(q0, 0^n) = δ(q0, 0^{n+cycle}) for all n ≥ tail, with cycle ≥ 1.
template <class Out>
struct UnaryLasso {
    std::vector<State> chain;  // chain[i] = δ(q0, 0^i) for i < tail + cycle
    std::uint64_t tail = 0;
    std::uint64_t cycle = 1;

    explicit UnaryLasso(const Machine<Out>& m) {
        std::vector<long long> seen(m.size(), -1);
        State q = m.start();
        while (seen[q] < 0) {
            seen[q] = static_cast<long long>(chain.size());
            chain.push_back(q);
            q = m.next(q, std::size_t{0});
        }
        tail = static_cast<std::uint64_t>(seen[q]);
        cycle = chain.size() - tail;
    }

    State after(std::uint64_t length) const {
        if (length < tail) return chain[length];
        return chain[tail + (length - tail) % cycle];
    }

    /// State after reading 0^{m!}, computed without building the word.
    State after_factorial(std::uint64_t m) const {
        std::uint64_t exact = 1, residue = 1 % cycle;
        bool big = false;
        for (std::uint64_t i = 2; i <= m; ++i) {
            residue = (residue * (i % cycle)) % cycle;
            if (!big && exact > (std::uint64_t{1} << 40) / i) big = true;
            if (!big) exact *= i;
        }
        if (!big) return after(exact);
        // m! ≥ 2^40 > tail, so only the residue matters.
        std::uint64_t offset = (residue + cycle - tail % cycle) % cycle;
        return chain[tail + offset];
    }

    /// Least m with m! ≥ tail and cycle | m!; from there on every m! reaches
    /// the same state.
    std::uint64_t factorial_stabilizer() const {
        std::uint64_t m = 0, exact = 1, residue = 1 % cycle;
        bool big = false;
        while (!((big || exact >= tail) && residue == 0)) {
            ++m;
            residue = (residue * (m % cycle)) % cycle;
            if (!big && exact > (std::uint64_t{1} << 40) / m) big = true;
            if (!big) exact *= m;
        }
        return m;
    }
};

// ---------------------------------------------------------------------------
// Emptiness and finiteness

/// Size class of a language together with its members when finite.
struct LanguageSize {
    enum class Kind { empty, finite, infinite };

    Kind kind = Kind::empty;
    FinWordSet members;  // exact language when kind != infinite

    static LanguageSize empty() { return {}; }
    static LanguageSize infinite() { return {Kind::infinite, {}}; }
    static LanguageSize finite(FinWordSet words) {
        if (words.empty()) return empty();
        return {Kind::finite, std::move(words)};
    }

    bool is_empty() const noexcept { return kind == Kind::empty; }
    bool is_finite() const noexcept { return kind != Kind::infinite; }
    bool is_infinite() const noexcept { return kind == Kind::infinite; }

    friend bool operator==(const LanguageSize&, const LanguageSize&) = default;
};

inline const char* to_string(LanguageSize::Kind k) {
    switch (k) {
    case LanguageSize::Kind::empty: return "empty";
    case LanguageSize::Kind::finite: return "finite";
    case LanguageSize::Kind::infinite: return "infinite";
    }
    return "?";
}

namespace detail {

// States that are reachable from the start and can reach acceptance.
inline std::vector<bool> useful_states(const Dfa& a) {
    const std::size_t n = a.size(), k = a.alphabet().size();
    std::vector<bool> reach(n, false), coreach(n, false);
    std::vector<std::vector<State>> preds(n);
    std::vector<State> stack{a.start()};
    reach[a.start()] = true;
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (std::size_t c = 0; c < k; ++c) {
            State t = a.next(q, c);
            if (!reach[t]) {
                reach[t] = true;
                stack.push_back(t);
            }
        }
    }
    for (State q = 0; q < n; ++q)
        for (std::size_t c = 0; c < k; ++c) preds[a.next(q, c)].push_back(q);
    for (State q = 0; q < n; ++q)
        if (a.output(q)) {
            coreach[q] = true;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : preds[q])
            if (!coreach[p]) {
                coreach[p] = true;
                stack.push_back(p);
            }
    }
    std::vector<bool> useful(n);
    for (State q = 0; q < n; ++q) useful[q] = reach[q] && coreach[q];
    return useful;
}

} // namespace detail

/// Empty, Finite(members) or Infinite. A language is infinite iff a cycle
/// runs through a state that is both reachable and co-reachable; otherwise
/// every member has length < |Q| and the members are listed exactly.
inline LanguageSize emptiness_finiteness(const Dfa& a) {
    const std::size_t n = a.size(), k = a.alphabet().size();
    auto useful = detail::useful_states(a);
    if (!useful[a.start()]) return LanguageSize::empty();

    // Cycle detection on the useful subgraph (iterative three-colour DFS).
    std::vector<std::uint8_t> colour(n, 0);
    std::vector<std::pair<State, std::size_t>> stack{{a.start(), 0}};
    colour[a.start()] = 1;
    while (!stack.empty()) {
        auto& [q, c] = stack.back();
        if (c == k) {
            colour[q] = 2;
            stack.pop_back();
            continue;
        }
        State t = a.next(q, c++);
        if (!useful[t]) continue;
        if (colour[t] == 1) return LanguageSize::infinite();
        if (colour[t] == 0) {
            colour[t] = 1;
            stack.emplace_back(t, 0);
        }
    }

    FinWordSet members;
    Word prefix;
    std::function<void(State)> collect = [&](State q) {
        if (a.output(q)) members.insert(prefix);
        for (std::size_t c = 0; c < k; ++c) {
            State t = a.next(q, c);
            if (!useful[t]) continue;
            prefix.push_back(a.alphabet().letter(c));
            collect(t);
            prefix.pop_back();
        }
    };
    collect(a.start());
    return LanguageSize::finite(std::move(members));
}

inline bool is_empty(const Dfa& a) { return !detail::useful_states(a)[a.start()]; }

inline bool equivalent(const Dfa& a, const Dfa& b) { return is_empty(symmetric_difference(a, b)); }

/// L(result) = (L(a) ∪ L(add)) \ remove, minimized.
inline Dfa patch_acceptance(const Dfa& a, const Dfa& add, const FinWordSet& remove) {
    Dfa out = unite(a, add);
    if (!remove.empty()) out = subtract(out, finite_language_dfa(a.alphabet(), remove));
    return minimize(out);
}

inline Dfa patch_acceptance(const Dfa& a, const FinWordSet& add, const FinWordSet& remove) {
    return patch_acceptance(a, finite_language_dfa(a.alphabet(), add), remove);
}

/// Comparison of two languages up to finitely many words.
struct FiniteDifference {
    enum class Kind { equal, finite, infinite };
    Kind kind = Kind::equal;
    FinWordSet words;  // the symmetric difference when kind == finite
};

inline FiniteDifference equivalent_modulo_finite(const Dfa& a, const Dfa& b) {
    auto size = emptiness_finiteness(symmetric_difference(a, b));
    switch (size.kind) {
    case LanguageSize::Kind::empty: return {FiniteDifference::Kind::equal, {}};
    case LanguageSize::Kind::finite: return {FiniteDifference::Kind::finite, std::move(size.members)};
    case LanguageSize::Kind::infinite: break;
    }
    return {FiniteDifference::Kind::infinite, {}};
}

} // namespace regenc
