#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regenc/automata.hpp"
#include "regenc/bijectify.hpp"
#include "regenc/errors.hpp"
#include "regenc/imageset.hpp"
#include "regenc/word.hpp"

namespace regenc::io {

using json = nlohmann::ordered_json;

inline json alphabet_to_json(const Alphabet& a) {
    json out = json::array();
    for (char c : a.letters()) out.push_back(std::string(1, c));
    return out;
}

inline Alphabet alphabet_from_json(const json& j) {
    if (!j.is_array()) throw InputError("alphabet must be an array of one-letter strings");
    std::string letters;
    for (const auto& x : j) {
        auto s = x.get<std::string>();
        if (s.size() != 1) throw InputError("alphabet entries must be single letters");
        letters += s;
    }
    return Alphabet(letters);
}

namespace detail {

template <class Out>
json machine_core(const Machine<Out>& m) {
    json delta = json::array();
    for (State q = 0; q < m.size(); ++q) {
        json row = json::array();
        for (std::size_t a = 0; a < m.alphabet().size(); ++a) row.push_back(m.next(q, a));
        delta.push_back(std::move(row));
    }
    return json{{"alphabet", alphabet_to_json(m.alphabet())},
                {"states", m.size()},
                {"start", m.start()},
                {"delta", std::move(delta)}};
}

struct Core {
    Alphabet alphabet;
    std::size_t states;
    State start;
    std::vector<State> delta;
};

inline Core core_from_json(const json& j) {
    try {
        Core c{alphabet_from_json(j.at("alphabet")), j.at("states").get<std::size_t>(), j.at("start").get<State>(), {}};
        const auto& rows = j.at("delta");
        if (!rows.is_array() || rows.size() != c.states) throw InputError("delta must have one row per state");
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != c.alphabet.size())
                throw InputError("delta rows must have one column per letter");
            for (const auto& t : row) c.delta.push_back(t.get<State>());
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed automaton JSON: ") + e.what());
    }
}

} // namespace detail

/// {"alphabet", "states", "start", "delta", "accepting"}; accepting lists states.
inline json to_json(const Dfa& a) {
    json out = detail::machine_core(a);
    json acc = json::array();
    for (State q = 0; q < a.size(); ++q)
        if (a.output(q)) acc.push_back(q);
    out["accepting"] = std::move(acc);
    return out;
}

inline Dfa dfa_from_json(const json& j) {
    auto c = detail::core_from_json(j);
    std::vector<bool> accept(c.states, false);
    try {
        for (const auto& q : j.at("accepting")) {
            auto s = q.get<State>();
            if (s >= c.states) throw InputError("accepting state out of range");
            accept[s] = true;
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed automaton JSON: ") + e.what());
    }
    return Dfa(std::move(c.alphabet), c.states, std::move(c.delta), c.start, std::move(accept));
}

/// Dfa layout plus "outputs" (one letter per state) and "output_alphabet";
/// "accepting" holds the states whose output is the second output letter.
inline json to_json(const Dfao& a) {
    json out = detail::machine_core(a.machine());
    json outputs = json::array(), acc = json::array();
    for (State q = 0; q < a.size(); ++q) {
        outputs.push_back(std::string(1, a.output(q)));
        if (a.output_alphabet().size() > 1 && a.output(q) == a.output_alphabet().letter(1)) acc.push_back(q);
    }
    out["accepting"] = std::move(acc);
    out["outputs"] = std::move(outputs);
    out["output_alphabet"] = alphabet_to_json(a.output_alphabet());
    return out;
}

inline Dfao dfao_from_json(const json& j) {
    auto c = detail::core_from_json(j);
    std::vector<char> outputs;
    try {
        for (const auto& o : j.at("outputs")) {
            auto s = o.get<std::string>();
            if (s.size() != 1) throw InputError("outputs must be single letters");
            outputs.push_back(s[0]);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed DFAO JSON: ") + e.what());
    }
    Alphabet out_alphabet = j.contains("output_alphabet") ? alphabet_from_json(j["output_alphabet"]) : [&] {
        std::string letters(outputs.begin(), outputs.end());
        std::sort(letters.begin(), letters.end());
        letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
        return Alphabet(letters);
    }();
    return Dfao(std::move(c.alphabet), c.states, std::move(c.delta), c.start, std::move(outputs),
                std::move(out_alphabet));
}

/// {"alphabet", "states", "start", "transitions": [{from, letter, to, delta}], "accept": [test|null]}.
inline json to_json(const CounterMachine& m) {
    json moves = json::array();
    for (const auto& t : m.transitions())
        moves.push_back({{"from", t.from}, {"letter", std::string(1, t.letter)}, {"to", t.to}, {"delta", t.delta}});
    json accept = json::array();
    for (State q = 0; q < m.size(); ++q) {
        const auto& test = m.acceptance(q);
        accept.push_back(test ? json(to_string(*test)) : json(nullptr));
    }
    return json{{"alphabet", alphabet_to_json(m.alphabet())},
                {"states", m.size()},
                {"start", m.start()},
                {"transitions", std::move(moves)},
                {"accept", std::move(accept)}};
}

inline CounterMachine counter_machine_from_json(const json& j) {
    try {
        std::vector<CounterMachine::Transition> moves;
        for (const auto& t : j.at("transitions")) {
            auto letter = t.at("letter").get<std::string>();
            if (letter.size() != 1) throw InputError("transition letter must be a single letter");
            moves.push_back({t.at("from").get<State>(), letter[0], t.at("to").get<State>(), t.at("delta").get<int>()});
        }
        std::vector<std::optional<CounterTest>> accept;
        for (const auto& a : j.at("accept")) {
            if (a.is_null()) {
                accept.emplace_back();
                continue;
            }
            auto s = a.get<std::string>();
            if (s == "zero") accept.emplace_back(CounterTest::zero);
            else if (s == "nonzero") accept.emplace_back(CounterTest::nonzero);
            else if (s == "any") accept.emplace_back(CounterTest::any);
            else throw InputError("unknown counter test '" + s + "'");
        }
        return CounterMachine(alphabet_from_json(j.at("alphabet")), j.at("states").get<std::size_t>(),
                              j.at("start").get<State>(), moves, std::move(accept));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed counter machine JSON: ") + e.what());
    }
}

inline json to_json(const FinWordSet& words) {
    json out = json::array();
    for (const auto& w : words) out.push_back(w);
    return out;
}

inline FinWordSet words_from_json(const json& j) {
    FinWordSet out;
    for (const auto& w : j) out.insert(w.get<std::string>());
    return out;
}

inline json to_json(const LanguageSize& s) {
    json out{{"kind", to_string(s.kind)}};
    if (s.is_finite()) out["members"] = to_json(s.members);
    return out;
}

/// Engine state: enough to resume; partition and image are rebuilt on load
/// and the stored corrections are cross-checked.
inline json to_json(const Bijectivizer& b) {
    json seeds = json::array(), adapted = json::array(), history = json::array();
    for (const auto& s : b.automaton_order().seed()) seeds.push_back(to_json(s));
    for (const auto& a : b.adapted()) adapted.push_back(to_json(a));
    for (const auto& h : b.history())
        history.push_back({{"n", h.n},
                           {"target", h.target},
                           {"picked", h.picked},
                           {"displaced", h.displaced},
                           {"scanned", h.scanned},
                           {"patches", h.patches},
                           {"classes", h.classes}});
    return json{{"format", "regenc-bijectivizer"},
                {"version", 1},
                {"encoding", b.source().name},
                {"steps", b.steps()},
                {"scan_cap", b.options().scan_cap},
                {"picked", b.picked()},
                {"seeds", std::move(seeds)},
                {"adapted", std::move(adapted)},
                {"image", {{"removed", to_json(b.image().removed())}, {"added", to_json(b.image().added())}}},
                {"classes", b.partition().size()},
                {"history", std::move(history)}};
}

inline Bijectivizer bijectivizer_from_json(const json& j, IndexedSource source) {
    try {
        if (j.at("format") != "regenc-bijectivizer") throw InputError("not a bijectivizer state file");
        if (j.at("encoding").get<std::string>() != source.name)
            throw InputError("state file is for encoding '" + j.at("encoding").get<std::string>() + "'");
        std::vector<Dfa> seeds, adapted;
        for (const auto& s : j.at("seeds")) seeds.push_back(dfa_from_json(s));
        for (const auto& a : j.at("adapted")) adapted.push_back(dfa_from_json(a));
        Bijectivizer::Options options{j.at("scan_cap").get<std::uint64_t>()};
        Bijectivizer b(std::move(source), std::move(seeds), j.at("picked").get<std::vector<Index>>(), std::move(adapted),
                       options);
        if (words_from_json(j.at("image").at("removed")) != b.image().removed() ||
            words_from_json(j.at("image").at("added")) != b.image().added())
            throw InputError("state file: stored image corrections disagree with the picked indices");
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed state JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Files and DOT

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream s;
    s << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("error writing '" + path + "'");
}

inline json parse(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

inline json read_json(const std::string& path) { return parse(read_file(path), path); }

inline void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

template <class Out, class Label>
std::string to_dot(const Machine<Out>& m, Label label) {
    std::ostringstream s;
    s << "digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n  init -> q" << m.start() << ";\n";
    for (State q = 0; q < m.size(); ++q) s << "  q" << q << " [" << label(q) << "];\n";
    for (State q = 0; q < m.size(); ++q) {
        // One edge per target, letters merged.
        std::map<State, std::string> edges;
        for (std::size_t a = 0; a < m.alphabet().size(); ++a) {
            auto& l = edges[m.next(q, a)];
            if (!l.empty()) l += ",";
            l += m.alphabet().letter(a);
        }
        for (const auto& [t, letters] : edges) s << "  q" << q << " -> q" << t << " [label=\"" << letters << "\"];\n";
    }
    s << "}\n";
    return s.str();
}

inline std::string to_dot(const Dfa& a) {
    return to_dot(a, [&](State q) {
        return std::string("label=\"") + std::to_string(q) + "\", shape=" + (a.output(q) ? "doublecircle" : "circle");
    });
}

inline std::string to_dot(const Dfao& a) {
    return to_dot(a.machine(), [&](State q) {
        return "label=\"" + std::to_string(q) + "/" + std::string(1, a.output(q)) + "\", shape=circle";
    });
}

} // namespace regenc::io
