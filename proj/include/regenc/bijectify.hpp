#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regenc/automata.hpp"
#include "regenc/encodings.hpp"
#include "regenc/enumerate.hpp"
#include "regenc/errors.hpp"
#include "regenc/imageset.hpp"
#include "regenc/word.hpp"

namespace regenc {

/// Finite partition of Γ* into regular classes, keyed by the output-vector
/// signature ('0'/'1' per automaton) that produced them. Empty classes are
/// never stored.
class Partition {
public:
    explicit Partition(const Alphabet& alphabet) { classes_.emplace("", universal_dfa(alphabet)); }
    explicit Partition(std::map<std::string, Dfa> classes) : classes_(std::move(classes)) {
        if (classes_.empty()) throw InputError("partition needs at least one class");
    }

    const std::map<std::string, Dfa>& classes() const noexcept { return classes_; }
    std::size_t size() const noexcept { return classes_.size(); }
    const Alphabet& alphabet() const { return classes_.begin()->second.alphabet(); }

    /// {C ∩ L(a), C \ L(a)} for every class C, minus the empty ones.
    Partition refine(const Dfa& a) const {
        std::map<std::string, Dfa> out;
        for (const auto& [sig, c] : classes_) {
            Dfa in = minimize(intersect(c, a));
            Dfa out_part = minimize(subtract(c, a));
            if (!is_empty(in)) out.emplace(sig + '1', std::move(in));
            if (!is_empty(out_part)) out.emplace(sig + '0', std::move(out_part));
        }
        return Partition(std::move(out));
    }

    /// Pairwise disjointness and exhaustiveness via product emptiness.
    bool is_partition() const {
        std::vector<Dfa> parts;
        for (const auto& [sig, c] : classes_) parts.push_back(c);
        Dfa exactly_one = combine(parts, [](const std::vector<bool>& v) {
            return std::count(v.begin(), v.end(), true) == 1;
        });
        return is_empty(complement(exactly_one));
    }

private:
    std::map<std::string, Dfa> classes_;
};

/// C attracted to I: C ⊆ I whenever C ∩ I is finite.
inline bool attracted(const Dfa& c, const ImageSet& image) {
    LanguageSize meet = image.analyze(c);
    if (meet.is_infinite()) return true;
    return is_empty(subtract(c, finite_language_dfa(c.alphabet(), meet.members)));
}

inline bool attracted(const Partition& e, const ImageSet& image) {
    return std::all_of(e.classes().begin(), e.classes().end(),
                       [&](const auto& entry) { return attracted(entry.second, image); });
}

struct Repair {
    Dfa automaton;        // minimized A'
    Partition refined;    // {C ∩ [A' = j]} without empty classes
    std::size_t patches = 0;
};

/// A' equal to `a` on `image` such that the refinement of `e` by A' is
/// attracted to `image`. Requires `e` attracted to `image`.
inline Repair attract_repair(const Dfa& a, const Partition& e, const ImageSet& image) {
    detail::require_same_alphabet(a.alphabet(), e.alphabet());
    detail::require_same_alphabet(a.alphabet(), image.alphabet());
    for (const auto& [sig, c] : e.classes())
        if (!attracted(c, image)) throw ContractError("attract_repair: class '" + sig + "' is not attracted to the image");

    Dfa current = minimize(a);
    std::size_t patches = 0, iterations = 0;
    const std::size_t limit = 2 * e.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [sig, c] : e.classes()) {
            for (bool accepted : {false, true}) {
                Dfa part = accepted ? intersect(c, current) : subtract(c, current);
                if (is_empty(part)) continue;
                LanguageSize meet = image.analyze(part);
                if (meet.is_infinite()) continue;
                Dfa outside = subtract(part, finite_language_dfa(a.alphabet(), meet.members));
                if (is_empty(outside)) continue;
                if (++iterations > limit)
                    throw ContractError("attract_repair: iteration bound " + std::to_string(limit) + " exceeded");
                // Move the off-image part to the other side.
                current = minimize(accepted ? subtract(current, outside) : unite(current, outside));
                ++patches;
                changed = true;
            }
        }
    }
    if (patches > e.size()) throw ContractError("attract_repair: more patches than classes");
    Partition refined = e.refine(current);
    return {std::move(current), std::move(refined), patches};
}

/// One engine step as it happened.
struct StepRecord {
    std::size_t n = 0;
    Word target;            // w_n
    Index picked = 0;       // k_n
    Word displaced;         // c(k_n)
    std::uint64_t scanned = 0;
    std::size_t patches = 0;
    std::size_t classes = 0;  // |E_{n+1}|
};

struct InvariantReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

struct EngineOptions {
    std::uint64_t scan_cap = 1'000'000;  // words tried per k_n search
};

/// Turns an injection c : ℕ → Γ* into a bijection d step by step. After n
/// steps, d(k_j) = w_j for j < n and d(i) = c(i) for every other i.
///
/// Single writer: `step`, `d_of` and `d_inverse` mutate; copies are
/// independent snapshots.
class Bijectivizer {
public:
    using Options = EngineOptions;

    explicit Bijectivizer(IndexedSource source, std::vector<Dfa> seed = {}, Options options = {})
        : source_(std::move(source)), words_(source_.alphabet()), automata_(source_.alphabet(), std::move(seed)),
          options_(options), image_(source_.image), partition_(source_.alphabet()) {
        if (options_.scan_cap == 0) throw ConfigError("scan cap must be positive");
    }

    /// Rebuilds a state from its picked indices and adapted automata; the
    /// image corrections and the partition are recomputed.
    Bijectivizer(IndexedSource source, std::vector<Dfa> seed, std::vector<Index> picked, std::vector<Dfa> adapted,
                 Options options = {})
        : Bijectivizer(std::move(source), std::move(seed), options) {
        if (picked.size() != adapted.size()) throw InputError("state: picked and adapted lengths differ");
        for (std::size_t n = 0; n < picked.size(); ++n) {
            Word w = words_.word_at(n);
            Word displaced = source_.encode(picked[n]);
            if (picked_set_.count(picked[n])) throw InputError("state: index picked twice");
            image_ = image_.with_corrections({displaced}, {w});
            record_pick(n, picked[n]);
            detail::require_same_alphabet(words_.alphabet(), adapted[n].alphabet());
            partition_ = partition_.refine(adapted[n]);
            adapted_.push_back(minimize(adapted[n]));
        }
    }

    const IndexedSource& source() const noexcept { return source_; }
    const WordOrder& word_order() const noexcept { return words_; }
    const AutomatonOrder& automaton_order() const noexcept { return automata_; }
    const Options& options() const noexcept { return options_; }
    std::size_t steps() const noexcept { return picked_.size(); }
    const std::vector<Index>& picked() const noexcept { return picked_; }
    const std::vector<Dfa>& adapted() const noexcept { return adapted_; }
    const ImageSet& image() const noexcept { return image_; }  // I_n
    const Partition& partition() const noexcept { return partition_; }  // E_n
    const std::vector<StepRecord>& history() const noexcept { return history_; }

    /// A'_0(w) … A'_{level-1}(w) as '0'/'1'.
    std::string signature(std::string_view w, std::size_t level) const {
        if (level > adapted_.size()) throw ContractError("signature: level beyond the current step");
        std::string sig;
        sig.reserve(level);
        for (std::size_t i = 0; i < level; ++i) sig.push_back(adapted_[i](w) ? '1' : '0');
        return sig;
    }

    std::string signature(std::string_view w) const { return signature(w, adapted_.size()); }

    /// u ∼_level v.
    bool related(std::string_view u, std::string_view v, std::size_t level) const {
        return signature(u, level) == signature(v, level);
    }

    /// Current d_n(i).
    Word current_d(Index i) const {
        auto it = position_.find(i);
        return it != position_.end() ? words_.word_at(it->second) : source_.encode(i);
    }

    StepRecord step() {
        const std::size_t n = picked_.size();
        const Word target = words_.word_at(n);
        const std::string want = signature(target);

        // Every unpicked image word comes at or after w_n, so the scan starts there.
        Index k = 0;
        bool found = false;
        std::uint64_t scanned = 0;
        for (Index u = n; !found; ++u) {
            if (++scanned > options_.scan_cap)
                throw ResourceError("bijectify: no candidate for w_" + std::to_string(n) + " within " +
                                    std::to_string(options_.scan_cap) +
                                    " words; the attracted partition guarantees one exists, so this signals a "
                                    "broken invariant or a cap that is too small");
            Word word = words_.word_at(u);
            auto idx = source_.decode(word);
            if (!idx || picked_set_.count(*idx)) continue;
            if (signature(word) != want) continue;
            k = *idx;
            found = true;
        }

        Word displaced = source_.encode(k);
        ImageSet next_image = image_.with_corrections({displaced}, {target});
        Repair repair = attract_repair(automata_.automaton_at(n), partition_, next_image);

        image_ = std::move(next_image);
        record_pick(n, k);
        adapted_.push_back(repair.automaton);
        partition_ = std::move(repair.refined);
        history_.push_back({n, target, k, displaced, scanned, repair.patches, partition_.size()});
        return history_.back();
    }

    void run(std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) step();
    }

    /// d(i), stepping until i has been picked.
    Word d_of(Index i, std::size_t step_budget) {
        std::size_t spent = 0;
        while (!position_.count(i)) {
            if (spent++ == step_budget)
                throw ResourceError("d_of(" + std::to_string(i) + "): not picked after " + std::to_string(step_budget) +
                                    " more steps (" + std::to_string(steps()) + " steps so far)");
            step();
        }
        return words_.word_at(position_.at(i));
    }

    /// d⁻¹(w), stepping until w has been assigned.
    Index d_inverse(std::string_view w, std::size_t step_budget) {
        Index j = words_.index_of(w);
        std::size_t spent = 0;
        while (picked_.size() <= j) {
            if (spent++ == step_budget)
                throw ResourceError("d_inverse: word index " + std::to_string(j) + " not reached after " +
                                    std::to_string(step_budget) + " more steps (" + std::to_string(steps()) +
                                    " steps so far)");
            step();
        }
        return picked_[static_cast<std::size_t>(j)];
    }

    /// Checks the step invariants; `sample_length` bounds the agreement check
    /// between A'_j and A_j on image words.
    InvariantReport check_invariants(std::size_t sample_length = 8) const {
        InvariantReport r;
        const std::size_t n = picked_.size();
        if (picked_set_.size() != n) r.violations.push_back("picked indices are not distinct");
        for (std::size_t j = 0; j < n; ++j) {
            Word w = words_.word_at(j);
            Word c = source_.encode(picked_[j]);
            if (!related(c, w, j)) r.violations.push_back("c(k_" + std::to_string(j) + ") not related to w_" + std::to_string(j));
            if (current_d(picked_[j]) != w) r.violations.push_back("d(k_" + std::to_string(j) + ") != w_" + std::to_string(j));
            // c[K̄_n] ∩ W_n = ∅
            if (auto idx = source_.decode(w); idx && !picked_set_.count(*idx))
                r.violations.push_back("w_" + std::to_string(j) + " is still an unpicked image word");
        }
        if (!partition_.is_partition()) r.violations.push_back("E_n is not a partition");
        for (const auto& [sig, c] : partition_.classes())
            if (!attracted(c, image_)) r.violations.push_back("class '" + sig + "' not attracted to I_n");
        // A'_j agrees with A_j on I_{j+1}; sampled on the current image's
        // history, rebuilt incrementally.
        ImageSet prefix_image = source_.image;
        for (std::size_t j = 0; j < n; ++j) {
            prefix_image = prefix_image.with_corrections({source_.encode(picked_[j])}, {words_.word_at(j)});
            Dfa original = automata_.automaton_at(j);
            for (const auto& u : words_up_to(words_.alphabet(), sample_length))
                if (prefix_image.contains(u) && original(u) != adapted_[j](u)) {
                    r.violations.push_back("A'_" + std::to_string(j) + " differs from A_" + std::to_string(j) +
                                           " on image word '" + u + "'");
                    break;
                }
        }
        return r;
    }

private:
    void record_pick(std::size_t n, Index k) {
        picked_.push_back(k);
        picked_set_.insert(k);
        position_.emplace(k, n);
    }

    IndexedSource source_;
    WordOrder words_;
    AutomatonOrder automata_;
    Options options_;
    ImageSet image_;
    Partition partition_;
    std::vector<Index> picked_;
    std::set<Index> picked_set_;
    std::map<Index, std::size_t> position_;
    std::vector<Dfa> adapted_;
    std::vector<StepRecord> history_;
};

/// d[S] = (L(automaton) ∪ add) \ remove.
struct RegularImage {
    Dfa automaton;
    FinWordSet add;
    FinWordSet remove;

    bool contains(std::string_view w) const {
        Word word(w);
        if (add.count(word)) return true;
        if (remove.count(word)) return false;
        return automaton(w);
    }
};

/// Witness for d[S] when c[S] = L(A_m) ∩ c[ℕ]. For j > m the pick rule
/// gives A'_m(w_j) = A'_m(c(k_j)) = A_m(c(k_j)); the words w_0 … w_m are
/// settled directly.
inline RegularImage regular_image_of(Bijectivizer& engine, std::size_t m, const std::function<bool(Index)>& in_set,
                                     Index sample = 64) {
    const Dfa witness = engine.automaton_order().automaton_at(m);
    for (Index i = 0; i < sample; ++i)
        if (witness(engine.source().encode(i)) != in_set(i))
            throw ContractError("regular_image_of: A_" + std::to_string(m) + " does not recognize the set on c(" +
                                std::to_string(i) + ")");
    while (engine.steps() <= m) engine.step();

    RegularImage out{engine.adapted()[m], {}, {}};
    for (std::size_t j = 0; j <= m; ++j) {
        Word w = engine.word_order().word_at(j);
        bool member = in_set(engine.picked()[j]);
        if (member && !out.automaton(w)) out.add.insert(w);
        if (!member && out.automaton(w)) out.remove.insert(w);
    }
    return out;
}

} // namespace regenc
