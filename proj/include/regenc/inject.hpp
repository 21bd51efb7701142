#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "regenc/automata.hpp"
#include "regenc/encodings.hpp"
#include "regenc/enumerate.hpp"
#include "regenc/errors.hpp"
#include "regenc/word.hpp"

namespace regenc {

/// A named decidable language over some domain alphabet.
struct Language {
    std::string name;
    std::function<bool(std::string_view)> contains;
};

namespace languages {

inline Language all() { return {"all", [](std::string_view) { return true; }}; }
inline Language none() { return {"empty", [](std::string_view) { return false; }}; }

inline Language balanced() {
    return {"balanced", [](std::string_view w) { return count_letter(w, '0') == count_letter(w, '1'); }};
}

inline Language zero_star() {
    return {"zero-star", [](std::string_view w) { return w.find_first_not_of('0') == std::string_view::npos; }};
}

// 0^n 1^n
inline Language anbn() {
    return {"anbn", [](std::string_view w) {
                auto half = w.size() / 2;
                if (w.size() % 2) return false;
                return w.substr(0, half).find_first_not_of('0') == std::string_view::npos &&
                       w.substr(half).find_first_not_of('1') == std::string_view::npos;
            }};
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Language prime_length() {
    return {"prime-length", [](std::string_view w) { return is_prime(w.size()); }};
}

inline Language regular(std::string name, Dfa a) {
    return {std::move(name), [a = std::move(a)](std::string_view w) { return a.alphabet().accepts(w) && a(w); }};
}

/// Catalog lookup by name; throws ConfigError for unknown names.
inline Language by_name(const std::string& name) {
    static const std::map<std::string, Language (*)()> catalog{
        {"all", &all},           {"empty", &none},         {"balanced", &balanced},
        {"zero-star", &zero_star}, {"anbn", &anbn},        {"prime-length", &prime_length},
    };
    auto it = catalog.find(name);
    if (it == catalog.end()) throw ConfigError("unknown language '" + name + "'");
    return it->second();
}

} // namespace languages

/// Indexed family L1, L2, ... over the domain alphabet, 1-based.
///
/// A finite list either stays finite (asking for χ_i beyond it is a
/// configuration error) or is extended cyclically, L_{i+m} = L_i, which is
/// an enumeration of the same countable class with repetitions.
class LanguageFamily {
public:
    enum class Extension { none, cyclic };

    LanguageFamily(Alphabet domain, std::vector<Language> members, Extension ext = Extension::cyclic)
        : order_(std::move(domain)), members_(std::move(members)), ext_(ext) {
        if (members_.empty()) throw ConfigError("language family must have at least one member");
    }

    /// "demo3": balanced words, 0*, words of prime length.
    static LanguageFamily demo3() {
        return LanguageFamily(Alphabet::binary(),
                              {languages::balanced(), languages::zero_star(), languages::prime_length()});
    }

    /// Comma-separated catalog names, or "demo3".
    static LanguageFamily parse(const std::string& spec, Extension ext = Extension::cyclic) {
        if (spec == "demo3") return demo3();
        std::vector<Language> members;
        std::stringstream in(spec);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty()) members.push_back(languages::by_name(item));
        return LanguageFamily(Alphabet::binary(), std::move(members), ext);
    }

    const WordOrder& domain_order() const noexcept { return order_; }
    const Alphabet& domain() const noexcept { return order_.alphabet(); }
    std::size_t declared_size() const noexcept { return members_.size(); }
    Extension extension() const noexcept { return ext_; }

    const Language& member(std::size_t i) const {
        if (i == 0) throw ContractError("language family is 1-based");
        if (i > members_.size()) {
            if (ext_ == Extension::none)
                throw ConfigError("language family has " + std::to_string(members_.size()) + " members; L" +
                                  std::to_string(i) + " requested");
            return members_[(i - 1) % members_.size()];
        }
        return members_[i - 1];
    }

    bool chi(std::size_t i, std::string_view v) const { return member(i).contains(v); }

    std::string name(std::size_t i) const { return member(i).name; }

private:
    WordOrder order_;
    std::vector<Language> members_;
    Extension ext_;
};

/// f(v_n) = χ1(v_n) χ2(v_n) ... χn(v_n), written with the first two target
/// letters for 0 and 1. |f(v_n)| = n, so f is injective.
class ChiEncoding {
public:
    ChiEncoding(LanguageFamily family, Alphabet target) : family_(std::move(family)), target_(std::move(target)) {
        if (target_.size() < 2) throw ConfigError("target alphabet needs at least two letters");
    }

    const LanguageFamily& family() const noexcept { return family_; }
    const Alphabet& target() const noexcept { return target_; }
    char bit(bool b) const { return target_.letter(b ? 1 : 0); }

    Word encode_index(Index n) const {
        Word v = family_.domain_order().word_at(n);
        Word out;
        out.reserve(static_cast<std::size_t>(n));
        for (Index i = 1; i <= n; ++i) out.push_back(bit(family_.chi(static_cast<std::size_t>(i), v)));
        return out;
    }

    Word encode(std::string_view v) const { return encode_index(family_.domain_order().index_of(v)); }

    /// Inverse on the image: the length names the index, the bits must match.
    std::optional<Word> decode(std::string_view w) const {
        if (!target_.accepts(w)) return std::nullopt;
        Word v = family_.domain_order().word_at(w.size());
        if (encode_index(w.size()) != w) return std::nullopt;
        return v;
    }

    /// Indexed view for the bijectivization engine. The image has exactly
    /// one word per length, so R ∩ image is decided only when R is finite;
    /// infinite R are reported as an error.
    Encoding as_encoding() const {
        auto self = std::make_shared<ChiEncoding>(*this);
        auto contains = [self](std::string_view w) { return self->decode(w).has_value(); };
        auto intersect = [self](const Dfa& r) -> LanguageSize {
            auto size = emptiness_finiteness(r);
            if (size.is_infinite()) throw ContractError("chi-encoding image: intersection with infinite R undecided");
            FinWordSet members;
            for (const auto& w : size.members)
                if (self->decode(w)) members.insert(w);
            return LanguageSize::finite(std::move(members));
        };
        return Encoding{"chi",
                        family_.domain(),
                        target_,
                        [self](std::string_view v) { return self->encode(v); },
                        [self](std::string_view w) { return self->decode(w); },
                        ImageSet(std::make_shared<CallbackSource>(target_, "chi", contains, intersect))};
    }

private:
    LanguageFamily family_;
    Alphabet target_;
};

/// The DFAO A_i over the target alphabet: a counting chain 0..i-1 whose
/// state q outputs χ_i(v_q), then a branch on the i-th letter into the
/// absorbing states i0 (output 0, first letter) and i1 (output 1, any other
/// letter). State numbering: chain q ↦ q, i0 ↦ i, i1 ↦ i+1.
inline Dfao fiber_automaton(const ChiEncoding& e, std::size_t i) {
    if (i == 0) throw ContractError("fiber_automaton: index must be at least 1");
    const Alphabet& gamma = e.target();
    const std::size_t k = gamma.size();
    const State i0 = static_cast<State>(i), i1 = static_cast<State>(i + 1);
    std::vector<State> delta((i + 2) * k);
    std::vector<char> out(i + 2);
    const auto& order = e.family().domain_order();
    for (State q = 0; q < i; ++q) {
        for (std::size_t a = 0; a < k; ++a) delta[q * k + a] = (q + 1 < i) ? q + 1 : (a == 0 ? i0 : i1);
        out[q] = e.bit(e.family().chi(i, order.word_at(q)));
    }
    for (std::size_t a = 0; a < k; ++a) {
        delta[i0 * k + a] = i0;
        delta[i1 * k + a] = i1;
    }
    out[i0] = e.bit(false);
    out[i1] = e.bit(true);
    return Dfao(gamma, i + 2, std::move(delta), 0, std::move(out),
                Alphabet(std::string{gamma.letter(0), gamma.letter(1)}));
}

struct RegularityReport {
    bool ok = true;
    std::size_t checked = 0;
    std::optional<Index> counterexample;  // first n with v_n ∈ L_i ≠ A_i(f(v_n)) = 1
};

/// Checks v_n ∈ L_i ⟺ A_i(f(v_n)) = 1 for all n < horizon, with `automaton`
/// defaulting to fiber_automaton(e, i).
inline RegularityReport verify_relative_regularity(const ChiEncoding& e, std::size_t i, Index horizon,
                                                   const std::optional<Dfao>& automaton = std::nullopt) {
    if (horizon == 0) throw ContractError("verify_relative_regularity: horizon must be at least 1");
    const Dfao a = automaton ? *automaton : fiber_automaton(e, i);
    const auto& order = e.family().domain_order();
    RegularityReport report;
    for (Index n = 0; n < horizon; ++n) {
        Word v = order.word_at(n);
        bool in_language = e.family().chi(i, v);
        bool accepted = a(e.encode_index(n)) == e.bit(true);
        ++report.checked;
        if (in_language != accepted) {
            report.ok = false;
            report.counterexample = n;
            break;
        }
    }
    return report;
}

} // namespace regenc
