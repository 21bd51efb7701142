#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regenc/automata.hpp"
#include "regenc/errors.hpp"
#include "regenc/word.hpp"

namespace regenc {

/// A decidable word set that can also classify its intersection with any
/// regular language as empty, finite (with members) or infinite.
class ImageSource {
public:
    virtual ~ImageSource() = default;
    virtual const Alphabet& alphabet() const = 0;
    virtual bool contains(std::string_view w) const = 0;
    virtual LanguageSize intersect(const Dfa& r) const = 0;
    virtual std::string describe() const = 0;
};

/// Base set with finitely many words removed and added.
///
/// Effective set = (base \ removed) ∪ added, with added ∩ removed = ∅,
/// removed ⊆ base and added ∩ base = ∅.
class ImageSet {
public:
    ImageSet() = default;
    explicit ImageSet(std::shared_ptr<const ImageSource> base) : base_(std::move(base)) {
        if (!base_) throw InputError("image set needs a base source");
    }

    const Alphabet& alphabet() const { return base_->alphabet(); }
    const ImageSource& base() const { return *base_; }
    std::shared_ptr<const ImageSource> base_ptr() const { return base_; }
    const FinWordSet& removed() const noexcept { return removed_; }
    const FinWordSet& added() const noexcept { return added_; }

    bool contains(std::string_view w) const {
        if (!alphabet().accepts(w)) return false;
        Word word(w);
        if (added_.count(word)) return true;
        if (removed_.count(word)) return false;
        return base_->contains(w);
    }

    /// R ∩ (effective set); finite edits patch the base verdict.
    LanguageSize analyze(const Dfa& r) const {
        detail::require_same_alphabet(alphabet(), r.alphabet());
        LanguageSize verdict = base_->intersect(r);
        if (verdict.is_infinite()) return verdict;
        FinWordSet members;
        for (const auto& w : verdict.members)
            if (!removed_.count(w)) members.insert(w);
        for (const auto& w : added_)
            if (r(w)) members.insert(w);
        return LanguageSize::finite(std::move(members));
    }

    /// Requires remove ⊆ current set and add disjoint from current set.
    ImageSet with_corrections(const FinWordSet& remove, const FinWordSet& add) const {
        ImageSet out = *this;
        for (const auto& w : remove) {
            if (!contains(w)) throw ContractError("with_corrections: removing '" + w + "' which is not in the set");
            if (!out.added_.erase(w)) out.removed_.insert(w);
        }
        for (const auto& w : add) {
            if (!alphabet().accepts(w)) throw InputError("with_corrections: word outside alphabet");
            if (contains(w) && !remove.count(w))
                throw ContractError("with_corrections: adding '" + w + "' which is already in the set");
            if (!out.removed_.erase(w)) out.added_.insert(w);
        }
        return out;
    }

private:
    std::shared_ptr<const ImageSource> base_;
    FinWordSet removed_;
    FinWordSet added_;
};

// ---------------------------------------------------------------------------
// Regular images

class RegularSource final : public ImageSource {
public:
    explicit RegularSource(Dfa a) : a_(minimize(a)) {}
    const Alphabet& alphabet() const override { return a_.alphabet(); }
    bool contains(std::string_view w) const override { return a_(w); }
    LanguageSize intersect(const Dfa& r) const override { return emptiness_finiteness(intersect_dfa(r)); }
    std::string describe() const override { return "regular(" + std::to_string(a_.size()) + " states)"; }
    const Dfa& automaton() const noexcept { return a_; }

private:
    Dfa intersect_dfa(const Dfa& r) const { return regenc::intersect(r, a_); }
    Dfa a_;
};

inline ImageSet regular_image(const Dfa& a) { return ImageSet(std::make_shared<RegularSource>(a)); }

// ---------------------------------------------------------------------------
// Deterministic one-counter machines

enum class CounterTest { zero, nonzero, any };

inline const char* to_string(CounterTest t) {
    switch (t) {
    case CounterTest::zero: return "zero";
    case CounterTest::nonzero: return "nonzero";
    case CounterTest::any: return "any";
    }
    return "?";
}

/// Deterministic machine with one integer counter that starts at 0.
///
/// Every transition adds -1, 0 or +1 to the counter. The counter is blind:
/// it is only inspected at the end, where a control state accepts if its
/// CounterTest holds. A missing transition rejects the word.
class CounterMachine {
public:
    struct Move {
        State to;
        int delta;
        friend bool operator==(const Move&, const Move&) = default;
    };

    struct Transition {
        State from;
        char letter;
        State to;
        int delta;
    };

    CounterMachine(Alphabet alphabet, std::size_t states, State start, const std::vector<Transition>& transitions,
                   std::vector<std::optional<CounterTest>> accept)
        : alphabet_(std::move(alphabet)), states_(states), start_(start),
          moves_(states * alphabet_.size()), accept_(std::move(accept)) {
        if (states_ == 0 || start_ >= states_) throw InputError("counter machine: bad state count or start");
        if (accept_.size() != states_) throw InputError("counter machine: acceptance table has wrong size");
        for (const auto& t : transitions) {
            if (t.from >= states_ || t.to >= states_) throw InputError("counter machine: state out of range");
            if (t.delta < -1 || t.delta > 1) throw InputError("counter machine: counter delta must be -1, 0 or +1");
            auto& slot = moves_[t.from * alphabet_.size() + alphabet_.rank(t.letter)];
            Move m{t.to, t.delta};
            if (slot && !(*slot == m))
                throw ContractError("counter machine is nondeterministic on state " + std::to_string(t.from) +
                                    " letter '" + std::string(1, t.letter) + "'");
            slot = m;
        }
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return states_; }
    State start() const noexcept { return start_; }
    const std::optional<Move>& move(State q, std::size_t letter_rank) const {
        return moves_[q * alphabet_.size() + letter_rank];
    }
    const std::optional<CounterTest>& acceptance(State q) const { return accept_[q]; }

    std::vector<Transition> transitions() const {
        std::vector<Transition> out;
        for (State q = 0; q < states_; ++q)
            for (std::size_t a = 0; a < alphabet_.size(); ++a)
                if (const auto& m = move(q, a)) out.push_back({q, alphabet_.letter(a), m->to, m->delta});
        return out;
    }

    bool accepts(std::string_view w) const {
        State q = start_;
        long long counter = 0;
        for (char c : w) {
            if (!alphabet_.contains(c)) return false;
            const auto& m = move(q, alphabet_.rank(c));
            if (!m) return false;
            q = m->to;
            counter += m->delta;
        }
        return passes(accept_[q], counter);
    }

    static bool passes(const std::optional<CounterTest>& test, long long counter) {
        if (!test) return false;
        switch (*test) {
        case CounterTest::zero: return counter == 0;
        case CounterTest::nonzero: return counter != 0;
        case CounterTest::any: return true;
        }
        return false;
    }

private:
    Alphabet alphabet_;
    std::size_t states_;
    State start_;
    std::vector<std::optional<Move>> moves_;
    std::vector<std::optional<CounterTest>> accept_;
};

namespace detail {

// Product of a DFA with a counter machine, restricted to reachable nodes.
struct CounterProduct {
    struct Edge {
        std::uint32_t to;
        int delta;
        char letter;
    };
    std::vector<std::vector<Edge>> edges;
    std::vector<std::optional<CounterTest>> accept;
    std::size_t pair_count = 0;  // |Q_R| * |control|

    std::size_t size() const { return edges.size(); }
};

inline CounterProduct build_counter_product(const Dfa& r, const CounterMachine& m) {
    CounterProduct p;
    p.pair_count = r.size() * m.size();
    std::map<std::pair<State, State>, std::uint32_t> ids;
    std::vector<std::pair<State, State>> nodes{{r.start(), m.start()}};
    ids.emplace(nodes[0], 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [rq, mq] = nodes[i];
        std::vector<CounterProduct::Edge> out;
        for (std::size_t a = 0; a < m.alphabet().size(); ++a) {
            const auto& mv = m.move(mq, a);
            if (!mv) continue;
            std::pair<State, State> next{r.next(rq, a), mv->to};
            auto [it, fresh] = ids.emplace(next, static_cast<std::uint32_t>(nodes.size()));
            if (fresh) nodes.push_back(next);
            out.push_back({it->second, mv->delta, m.alphabet().letter(a)});
        }
        p.edges.push_back(std::move(out));
        p.accept.push_back(r.output(rq) ? m.acceptance(mq) : std::nullopt);
    }
    return p;
}

// Closed-walk weights available at each node of the product graph.
enum : std::uint8_t { kPositiveWalk = 1, kNegativeWalk = 2, kZeroWalk = 4 };

inline std::vector<std::uint8_t> closed_walk_flags(const CounterProduct& g) {
    const std::size_t n = g.size();
    // Tarjan SCC, iterative.
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    int counter = 0, comps = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e == 0 && index[v] == -1) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (e < g.edges[v].size()) {
                std::uint32_t w = g.edges[v][e++].to;
                if (index[w] == -1) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                for (;;) {
                    std::uint32_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = comps;
                    if (w == v) break;
                }
                ++comps;
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }

    std::vector<std::vector<std::uint32_t>> members(comps);
    for (std::uint32_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

    // Bellman-Ford inside one component with edge weights sign*delta;
    // returns true if a negative cycle exists.
    auto has_negative_cycle = [&](int c, int sign) {
        const auto& vs = members[c];
        std::map<std::uint32_t, long long> dist;
        for (auto v : vs) dist[v] = 0;
        for (std::size_t round = 0; round <= vs.size(); ++round) {
            bool changed = false;
            for (auto v : vs)
                for (const auto& e : g.edges[v]) {
                    if (comp[e.to] != c) continue;
                    long long cand = dist[v] + sign * e.delta;
                    if (cand < dist[e.to]) {
                        dist[e.to] = cand;
                        changed = true;
                    }
                }
            if (!changed) return false;
        }
        return true;
    };

    // Shortest closed walk through v (weights sign*delta, no negative cycles).
    auto shortest_closed_walk = [&](int c, std::uint32_t v, int sign) -> std::optional<long long> {
        const auto& vs = members[c];
        std::map<std::uint32_t, long long> dist;
        dist[v] = 0;
        for (std::size_t round = 0; round < vs.size(); ++round) {
            bool changed = false;
            for (auto u : vs) {
                auto it = dist.find(u);
                if (it == dist.end()) continue;
                for (const auto& e : g.edges[u]) {
                    if (comp[e.to] != c || e.to == v) continue;
                    long long cand = it->second + sign * e.delta;
                    auto jt = dist.find(e.to);
                    if (jt == dist.end() || cand < jt->second) {
                        dist[e.to] = cand;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        std::optional<long long> best;
        for (auto u : vs) {
            auto it = dist.find(u);
            if (it == dist.end()) continue;
            for (const auto& e : g.edges[u])
                if (e.to == v) {
                    long long w = it->second + sign * e.delta;
                    if (!best || w < *best) best = w;
                }
        }
        return best;
    };

    std::vector<std::uint8_t> flags(n, 0);
    for (int c = 0; c < comps; ++c) {
        const auto& vs = members[c];
        bool cyclic = vs.size() > 1;
        for (const auto& e : g.edges[vs[0]]) cyclic = cyclic || e.to == vs[0];
        if (!cyclic) continue;
        bool pos = has_negative_cycle(c, -1);
        bool neg = has_negative_cycle(c, +1);
        for (auto v : vs) {
            std::uint8_t f = 0;
            if (pos) f |= kPositiveWalk;
            if (neg) f |= kNegativeWalk;
            if (pos && neg) {
                f |= kZeroWalk;
            } else if (!pos && !neg) {
                f |= kZeroWalk;  // every cycle in the component has weight 0
            } else {
                // One-signed component: a zero closed walk through v exists
                // iff the minimal |weight| closed walk through v is 0.
                auto best = shortest_closed_walk(c, v, pos ? +1 : -1);
                if (best && *best == 0) f |= kZeroWalk;
            }
            flags[v] = f;
        }
    }
    return flags;
}

inline bool pumps_infinitely(CounterTest test, std::uint8_t flags, long long counter) {
    switch (test) {
    case CounterTest::any: return flags != 0;
    case CounterTest::zero: return (flags & kZeroWalk) || ((flags & kPositiveWalk) && (flags & kNegativeWalk));
    case CounterTest::nonzero:
        return (flags & (kPositiveWalk | kNegativeWalk)) || (counter != 0 && (flags & kZeroWalk));
    }
    return false;
}

} // namespace detail

/// Image given by a deterministic one-counter machine.
///
/// The analyzer explores configurations (product node, counter) with the
/// counter truncated to [-B, B], B = N² + 1 for N reachable product nodes.
/// A word set is infinite iff some accepted path visits nodes whose closed
/// walks can be pumped without breaking the final counter test (tracked as
/// flags along the exploration). Otherwise the accepting part of the
/// configuration graph is acyclic and its paths are listed as members.
class CounterSource final : public ImageSource {
public:
    explicit CounterSource(CounterMachine m, std::size_t member_cap = 200000)
        : m_(std::move(m)), member_cap_(member_cap) {}

    const Alphabet& alphabet() const override { return m_.alphabet(); }
    bool contains(std::string_view w) const override { return m_.accepts(w); }
    std::string describe() const override { return "one-counter(" + std::to_string(m_.size()) + " control states)"; }
    const CounterMachine& machine() const noexcept { return m_; }

    static long long truncation_bound(std::size_t nodes) {
        return static_cast<long long>(nodes) * static_cast<long long>(nodes) + 1;
    }

    LanguageSize intersect(const Dfa& r) const override {
        detail::require_same_alphabet(alphabet(), r.alphabet());
        Dfa key = minimize(r);
        {
            std::lock_guard lock(cache_mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        LanguageSize result = compute(key);
        std::lock_guard lock(cache_mutex_);
        cache_.emplace(std::move(key), result);
        return result;
    }

private:
    struct DfaLess {
        bool operator()(const Dfa& a, const Dfa& b) const {
            if (a.size() != b.size()) return a.size() < b.size();
            if (a.transitions() != b.transitions()) return a.transitions() < b.transitions();
            return a.outputs() < b.outputs();
        }
    };

    LanguageSize compute(const Dfa& r) const {
        auto g = detail::build_counter_product(r, m_);
        const std::size_t n = g.size();
        const long long bound = truncation_bound(n);
        const std::size_t width = static_cast<std::size_t>(2 * bound + 1);
        auto cfg = [&](std::uint32_t v, long long c) { return static_cast<std::size_t>(v) * width + (c + bound); };
        auto accepting = [&](std::uint32_t v, long long c) { return CounterMachine::passes(g.accept[v], c); };

        // Forward reachability of configurations.
        std::vector<bool> reach(n * width, false);
        std::vector<std::pair<std::uint32_t, long long>> work{{0, 0}};
        reach[cfg(0, 0)] = true;
        bool any_accepting = false;
        for (std::size_t i = 0; i < work.size(); ++i) {
            auto [v, c] = work[i];
            any_accepting = any_accepting || accepting(v, c);
            for (const auto& e : g.edges[v]) {
                long long d = c + e.delta;
                if (d < -bound || d > bound || reach[cfg(e.to, d)]) continue;
                reach[cfg(e.to, d)] = true;
                work.emplace_back(e.to, d);
            }
        }
        if (!any_accepting) return LanguageSize::empty();

        // Pumping flags accumulated along reachable configurations.
        auto node_flags = detail::closed_walk_flags(g);
        std::vector<std::uint8_t> seen(n * width, 0);  // bitset over the 8 flag values
        std::vector<std::tuple<std::uint32_t, long long, std::uint8_t>> fwork{{0, 0, node_flags[0]}};
        seen[cfg(0, 0)] |= std::uint8_t(1U << node_flags[0]);
        for (std::size_t i = 0; i < fwork.size(); ++i) {
            auto [v, c, f] = fwork[i];
            if (g.accept[v] && detail::pumps_infinitely(*g.accept[v], f, c)) {
                // The pumped family must contain accepted words: for zero
                // and any tests the path itself is accepted; for nonzero
                // tests pumping a signed walk makes the counter nonzero.
                if (*g.accept[v] != CounterTest::zero || c == 0) return LanguageSize::infinite();
            }
            for (const auto& e : g.edges[v]) {
                long long d = c + e.delta;
                if (d < -bound || d > bound) continue;
                std::uint8_t nf = f | node_flags[e.to];
                std::uint8_t bit = std::uint8_t(1U << nf);
                if (seen[cfg(e.to, d)] & bit) continue;
                seen[cfg(e.to, d)] |= bit;
                fwork.emplace_back(e.to, d, nf);
            }
        }

        // Finite: co-reachability inside the truncated graph, then list paths.
        std::vector<std::vector<std::pair<std::uint32_t, int>>> preds(n);
        for (std::uint32_t v = 0; v < n; ++v)
            for (const auto& e : g.edges[v]) preds[e.to].emplace_back(v, e.delta);
        std::vector<bool> coreach(n * width, false);
        std::vector<std::pair<std::uint32_t, long long>> back;
        for (auto [v, c] : work)
            if (accepting(v, c)) {
                coreach[cfg(v, c)] = true;
                back.emplace_back(v, c);
            }
        for (std::size_t i = 0; i < back.size(); ++i) {
            auto [v, c] = back[i];
            for (auto [u, delta] : preds[v]) {
                long long pc = c - delta;
                if (pc < -bound || pc > bound) continue;
                std::size_t id = cfg(u, pc);
                if (!reach[id] || coreach[id]) continue;
                coreach[id] = true;
                back.emplace_back(u, pc);
            }
        }

        FinWordSet members;
        Word prefix;
        std::size_t visits = 0;
        std::function<void(std::uint32_t, long long)> collect = [&](std::uint32_t v, long long c) {
            if (++visits > member_cap_ * 64 || members.size() > member_cap_)
                throw ResourceError("counter image analyzer: finite member listing exceeds cap");
            if (prefix.size() > n * width)
                throw ContractError("counter image analyzer: cycle in the finite region (truncation bound too small)");
            if (accepting(v, c)) members.insert(prefix);
            for (const auto& e : g.edges[v]) {
                long long d = c + e.delta;
                if (d < -bound || d > bound || !coreach[cfg(e.to, d)]) continue;
                prefix.push_back(e.letter);
                collect(e.to, d);
                prefix.pop_back();
            }
        };
        collect(0, 0);
        for (const auto& w : members)
            if (!m_.accepts(w) || !r(w)) throw ContractError("counter image analyzer listed a non-member");
        return LanguageSize::finite(std::move(members));
    }

    CounterMachine m_;
    std::size_t member_cap_;
    mutable std::mutex cache_mutex_;
    mutable std::map<Dfa, LanguageSize, DfaLess> cache_;
};

inline ImageSet counter_image(CounterMachine m) { return ImageSet(std::make_shared<CounterSource>(std::move(m))); }

/// Image set given by arbitrary callables; used for sources whose analyzer
/// is specific to one encoding.
class CallbackSource final : public ImageSource {
public:
    CallbackSource(Alphabet alphabet, std::string name, std::function<bool(std::string_view)> contains,
                   std::function<LanguageSize(const Dfa&)> intersect)
        : alphabet_(std::move(alphabet)), name_(std::move(name)), contains_(std::move(contains)),
          intersect_(std::move(intersect)) {}

    const Alphabet& alphabet() const override { return alphabet_; }
    bool contains(std::string_view w) const override { return contains_(w); }
    LanguageSize intersect(const Dfa& r) const override { return intersect_(r); }
    std::string describe() const override { return name_; }

private:
    Alphabet alphabet_;
    std::string name_;
    std::function<bool(std::string_view)> contains_;
    std::function<LanguageSize(const Dfa&)> intersect_;
};

} // namespace regenc
