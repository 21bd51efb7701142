// regenc command-line front end. Every command prints JSON on stdout.
//
// Exit codes: 0 ok, 1 contract/invariant/input/config error, 2 budget
// exhausted, 3 I/O failure.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regenc/io.hpp"
#include "regenc/regenc.hpp"

using namespace regenc;
using io::json;

namespace {

enum ExitCode { kOk = 0, kViolation = 1, kBudget = 2, kIo = 3 };

// Budgets, overridable through the environment.
struct Budgets {
    std::uint64_t scan_cap = EngineOptions{}.scan_cap;
    std::uint64_t length_cap = kDefaultLengthBudget;
    std::size_t step_budget = 10'000;

    static std::uint64_t from_env(const char* name, std::uint64_t fallback) {
        const char* text = std::getenv(name);
        if (!text) return fallback;
        try {
            std::size_t used = 0;
            std::uint64_t v = std::stoull(text, &used);
            if (used != std::string(text).size() || v == 0) throw std::invalid_argument(name);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(std::string(name) + " must be a positive integer, got '" + text + "'");
        }
    }

    static Budgets load() {
        Budgets b;
        b.scan_cap = from_env("REGENC_SCAN_CAP", b.scan_cap);
        b.length_cap = from_env("REGENC_LENGTH_CAP", b.length_cap);
        b.step_budget = from_env("REGENC_STEP_BUDGET", b.step_budget);
        return b;
    }
};

void emit(const json& j, const std::string& out) {
    if (out.empty())
        std::cout << j.dump(2) << '\n';
    else
        io::write_json(out, j);
}

IndexedSource source_by_name(const std::string& name) {
    if (name == "puzzle") return puzzle_source();
    if (name == "unary-even") return unary_even_source();
    throw ConfigError("unknown encoding '" + name + "' (expected puzzle or unary-even)");
}

Representation representation_by_name(const std::string& name, const Budgets& budgets) {
    if (name == "unary") return unary_representation();
    if (name == "factorial") return factorial_representation(budgets.length_cap);
    if (name == "engine")
        return engine_representation(std::make_shared<Bijectivizer>(unary_even_source(), std::vector<Dfa>{},
                                                                    EngineOptions{budgets.scan_cap}),
                                     budgets.step_budget);
    if (name.rfind("base-", 0) == 0) {
        unsigned k = 0;
        try {
            k = static_cast<unsigned>(std::stoul(name.substr(5)));
        } catch (const std::exception&) {
            throw ConfigError("bad representation '" + name + "'");
        }
        return base_k_representation(k);
    }
    throw ConfigError("unknown representation '" + name + "' (expected unary, factorial, engine or base-K)");
}

std::function<bool(Index)> index_set_by_name(const std::string& name) {
    if (name == "all") return [](Index) { return true; };
    if (name == "none") return [](Index) { return false; };
    if (name == "even") return [](Index n) { return n % 2 == 0; };
    if (name == "odd") return [](Index n) { return n % 2 == 1; };
    if (name == "powers-of-two") return [](Index n) { return n != 0 && (n & (n - 1)) == 0; };
    throw ConfigError("unknown set '" + name + "' (expected all, none, even, odd or powers-of-two)");
}

ImageSet image_by_name(const std::string& name) {
    if (name == "puzzle") return counter_image(puzzle_machine());
    if (name == "factorial") return factorial_image();
    return regular_image(io::dfa_from_json(io::read_json(name)));
}

// Catalog names, "demo3", or DFA JSON files (items ending in ".json").
LanguageFamily family_by_spec(const std::string& spec) {
    if (spec == "demo3") return LanguageFamily::demo3();
    std::vector<Language> members;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (item.size() > 5 && item.ends_with(".json"))
            members.push_back(languages::regular(item, io::dfa_from_json(io::read_json(item))));
        else
            members.push_back(languages::by_name(item));
    }
    return LanguageFamily(Alphabet::binary(), std::move(members));
}

json word_list(const std::vector<Word>& words) {
    json out = json::array();
    for (const auto& w : words) out.push_back(w);
    return out;
}

// ---------------------------------------------------------------------------
// verify: quick self-checks across the modules

struct SuiteResult {
    std::string name;
    std::vector<std::string> failures;
};

void check(SuiteResult& r, bool ok, const std::string& what) {
    if (!ok) r.failures.push_back(what);
}

SuiteResult verify_automata() {
    SuiteResult r{"automata", {}};
    const Alphabet ab = Alphabet::binary();
    Dfa ends0(ab, 2, {1, 0, 1, 0}, 0, {false, true});
    check(r, equivalent(complement(complement(ends0)), ends0), "double complement");
    check(r, is_empty(intersect(ends0, complement(ends0))), "A and not A overlap");
    check(r, minimize(unite(ends0, complement(ends0))).size() == 1, "A or not A is not universal");
    WordOrder order(ab);
    for (Index n = 0; n < 200; ++n) check(r, order.index_of(order.word_at(n)) == n, "shortlex round trip");
    return r;
}

SuiteResult verify_imageset() {
    SuiteResult r{"imageset", {}};
    ImageSet puzzle = counter_image(puzzle_machine());
    const Alphabet ab = Alphabet::binary();
    check(r, puzzle.analyze(universal_dfa(ab)).is_infinite(), "puzzle image is infinite");
    auto one = puzzle.analyze(finite_language_dfa(ab, {"1"}));
    check(r, one.kind == LanguageSize::Kind::finite && one.members == FinWordSet{"1"}, "puzzle image meets {1}");
    auto edited = puzzle.with_corrections({"1"}, {""}).analyze(finite_language_dfa(ab, {"1"}));
    check(r, edited.is_empty(), "corrected puzzle image misses {1}");
    return r;
}

SuiteResult verify_inject() {
    SuiteResult r{"inject", {}};
    ChiEncoding e(LanguageFamily::demo3(), Alphabet::binary());
    for (std::size_t i = 1; i <= 3; ++i)
        check(r, verify_relative_regularity(e, i, 500).ok, "relative regularity of language " + std::to_string(i));
    return r;
}

SuiteResult verify_bijectify(const Budgets& budgets) {
    SuiteResult r{"bijectify", {}};
    Bijectivizer engine(puzzle_source(), {}, EngineOptions{budgets.scan_cap});
    engine.run(10);
    for (const auto& v : engine.check_invariants().violations) r.failures.push_back(v);
    Bijectivizer restored = io::bijectivizer_from_json(io::to_json(engine), puzzle_source());
    engine.run(2);
    restored.run(2);
    check(r, restored.picked() == engine.picked(), "resumed engine diverges");
    return r;
}

SuiteResult verify_numrep() {
    SuiteResult r{"numrep", {}};
    const Alphabet ab = Alphabet::binary();
    Dfao thue_morse(ab, 2, {0, 1, 1, 0}, 0, {'0', '1'}, ab);
    Dfao back = dfao_from_fibers(fibers(thue_morse), '0');
    for (const auto& w : words_up_to(ab, 8)) check(r, back(w) == thue_morse(w), "fiber round trip on '" + w + "'");
    std::string prefix;
    auto base2 = base_k_representation(2);
    for (Index n = 0; n < 8; ++n) prefix += automatic_output(thue_morse, base2, n);
    check(r, prefix == "01101001", "Thue-Morse prefix");
    Dfao five(Alphabet::unary(), 5, {1, 2, 3, 4, 0}, 0, {'1', '0', '0', '0', '0'}, ab);
    auto fa = factorial_analysis(five);
    check(r, fa.m0 == 5, "factorial stabilization index of a 5-cycle");
    auto parity = parity_counterexample(unary_representation(), 50);
    check(r, parity.second < 50, "parity witness for the identity");
    return r;
}

int run_verify(const std::string& suite, const Budgets& budgets, const std::string& out) {
    std::vector<SuiteResult> results;
    auto want = [&](const char* name) { return suite == "all" || suite == name; };
    if (want("automata")) results.push_back(verify_automata());
    if (want("imageset")) results.push_back(verify_imageset());
    if (want("inject")) results.push_back(verify_inject());
    if (want("bijectify")) results.push_back(verify_bijectify(budgets));
    if (want("numrep")) results.push_back(verify_numrep());
    if (results.empty()) throw ConfigError("unknown suite '" + suite + "'");
    json report = json::array();
    bool ok = true;
    for (const auto& s : results) {
        ok &= s.failures.empty();
        report.push_back({{"suite", s.name}, {"ok", s.failures.empty()}, {"failures", s.failures}});
    }
    emit({{"ok", ok}, {"suites", report}}, out);
    return ok ? kOk : kViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularity-preserving bijective encodings"};
    app.require_subcommand(1);
    app.fallthrough();  // --out is accepted after any subcommand
    std::string out;
    app.add_option("--out", out, "Write the JSON result to this file instead of stdout");

    int status = kOk;
    std::function<void()> action;

    // encode
    auto* encode = app.add_subcommand("encode", "Apply a built-in encoding");
    std::string scheme = "puzzle", input;
    unsigned base = 2;
    encode->add_option("--scheme", scheme, "puzzle, factorial or base-k")
        ->check(CLI::IsMember({"puzzle", "factorial", "base-k"}));
    encode->add_option("--input", input, "Binary word (puzzle) or natural number")->required();
    encode->add_option("-k,--base", base, "Base for base-k")->check(CLI::Range(2u, 10u));
    encode->callback([&] {
        action = [&] {
            Budgets budgets = Budgets::load();
            Word result;
            if (scheme == "puzzle") {
                result = puzzle_encode(input);
            } else {
                std::uint64_t n = 0;
                try {
                    n = std::stoull(input);
                } catch (const std::exception&) {
                    throw InputError("input must be a natural number: '" + input + "'");
                }
                result = scheme == "factorial" ? factorial_encode(n, budgets.length_cap) : base_k_encode(n, base);
            }
            json j{{"scheme", scheme}, {"input", input}, {"length", result.size()}};
            if (result.size() <= 4096) j["output"] = result;
            emit(j, out);
        };
    });

    // inject
    auto* inject = app.add_subcommand("inject", "Injective encoding from a language family");
    inject->require_subcommand(1);
    std::string family = "demo3", target = "01", word;
    std::size_t language = 1;
    bool dot = false;
    auto* inject_encode = inject->add_subcommand("encode", "Encode one word");
    inject_encode->add_option("--family", family, "demo3, or comma-separated catalog names and DFA JSON files");
    inject_encode->add_option("--target", target, "Target alphabet letters");
    inject_encode->add_option("--word", word, "Binary word")->required();
    inject_encode->callback([&] {
        action = [&] {
            ChiEncoding e(family_by_spec(family), Alphabet(target));
            Word w = e.encode(word);
            emit({{"family", family}, {"word", word}, {"encoding", w}}, out);
        };
    });
    auto* inject_automaton = inject->add_subcommand("automaton", "DFAO recognizing language i on the image");
    inject_automaton->add_option("--family", family, "demo3, or comma-separated catalog names and DFA JSON files");
    inject_automaton->add_option("--target", target, "Target alphabet letters");
    inject_automaton->add_option("-i,--index", language, "Language index, from 1")->required();
    inject_automaton->add_flag("--dot", dot, "Print Graphviz DOT instead of JSON");
    inject_automaton->callback([&] {
        action = [&] {
            Dfao a = fiber_automaton(ChiEncoding(family_by_spec(family), Alphabet(target)), language);
            if (dot)
                out.empty() ? void(std::cout << io::to_dot(a)) : io::write_file(out, io::to_dot(a));
            else
                emit(io::to_json(a), out);
        };
    });

    // bijectify
    auto* bijectify = app.add_subcommand("bijectify", "Turn an injection into a bijection");
    bijectify->require_subcommand(1);
    std::string encoding = "puzzle", dump, resume;
    std::size_t steps = 10;
    std::vector<std::string> seeds;
    auto* run = bijectify->add_subcommand("run", "Run the engine");
    run->add_option("--encoding", encoding, "puzzle or unary-even");
    run->add_option("--steps", steps, "Steps to take (after resuming)");
    run->add_option("--dump", dump, "Write the engine state here");
    run->add_option("--resume", resume, "Resume from a state file");
    run->add_option("--seed", seeds, "DFA JSON files placed first in the automaton order");
    run->callback([&] {
        action = [&] {
            Budgets budgets = Budgets::load();
            std::vector<Dfa> seed;
            for (const auto& path : seeds) seed.push_back(io::dfa_from_json(io::read_json(path)));
            std::unique_ptr<Bijectivizer> engine;
            if (!resume.empty()) {
                if (!seeds.empty()) throw ConfigError("--seed cannot be combined with --resume");
                engine = std::make_unique<Bijectivizer>(
                    io::bijectivizer_from_json(io::read_json(resume), source_by_name(encoding)));
            } else {
                engine = std::make_unique<Bijectivizer>(source_by_name(encoding), std::move(seed),
                                                        EngineOptions{budgets.scan_cap});
            }
            engine->run(steps);
            auto report = engine->check_invariants();
            if (!dump.empty()) io::write_json(dump, io::to_json(*engine));
            json assigned = json::array();
            for (std::size_t n = 0; n < engine->steps(); ++n)
                assigned.push_back({{"index", engine->picked()[n]}, {"word", engine->word_order().word_at(n)}});
            emit({{"encoding", encoding},
                  {"steps", engine->steps()},
                  {"picked", engine->picked()},
                  {"assigned", assigned},
                  {"classes", engine->partition().size()},
                  {"invariants_ok", report.ok()},
                  {"violations", report.violations}},
                 out);
            if (!report.ok()) status = kViolation;
        };
    });

    // imageset
    auto* imageset = app.add_subcommand("imageset", "Query an image set");
    imageset->require_subcommand(1);
    std::string image = "puzzle", regular;
    auto* analyze = imageset->add_subcommand("analyze", "Size of the intersection with a regular language");
    analyze->add_option("--image", image, "puzzle, factorial or a DFA JSON file");
    analyze->add_option("--dfa", regular, "DFA JSON file for the regular language")->required();
    analyze->callback([&] {
        action = [&] {
            ImageSet set = image_by_name(image);
            auto size = set.analyze(io::dfa_from_json(io::read_json(regular)));
            emit({{"image", set.base().describe()}, {"result", io::to_json(size)}}, out);
        };
    });
    auto* contains = imageset->add_subcommand("contains", "Membership of one word");
    contains->add_option("--image", image, "puzzle, factorial or a DFA JSON file");
    contains->add_option("--word", word, "Word to test")->required();
    contains->callback([&] {
        action = [&] { emit({{"word", word}, {"member", image_by_name(image).contains(word)}}, out); };
    });

    // numrep
    auto* numrep = app.add_subcommand("numrep", "Number representations");
    numrep->require_subcommand(1);
    std::string representation = "base-2", automaton, set = "even", sequence;
    Index horizon = 100, count = 16;
    std::uint64_t n0 = 0;
    auto* recognize = numrep->add_subcommand("recognize", "Check that a DFA recognizes a set on a prefix");
    recognize->add_option("--representation", representation, "unary, factorial, engine or base-K");
    recognize->add_option("--dfa", automaton, "DFA JSON file")->required();
    recognize->add_option("--set", set, "all, none, even, odd or powers-of-two");
    recognize->add_option("--horizon", horizon, "Numbers checked");
    recognize->callback([&] {
        action = [&] {
            auto r = recognizes(representation_by_name(representation, Budgets::load()),
                                io::dfa_from_json(io::read_json(automaton)), index_set_by_name(set), horizon);
            json j{{"representation", representation}, {"set", set}, {"horizon", horizon}, {"ok", r.ok}};
            if (r.counterexample) j["counterexample"] = *r.counterexample;
            emit(j, out);
            if (!r.ok) status = kViolation;
        };
    });
    auto* automatic = numrep->add_subcommand("automatic", "Sequence produced by a DFAO");
    automatic->add_option("--representation", representation, "unary, factorial, engine or base-K");
    automatic->add_option("--dfao", automaton, "DFAO JSON file")->required();
    automatic->add_option("--count", count, "Terms");
    automatic->callback([&] {
        action = [&] {
            auto r = representation_by_name(representation, Budgets::load());
            Dfao a = io::dfao_from_json(io::read_json(automaton));
            std::string terms;
            for (Index n = 0; n < count; ++n) terms += automatic_output(a, r, n);
            emit({{"representation", representation}, {"sequence", terms}}, out);
        };
    });
    auto* factorial_cmd = numrep->add_subcommand("factorial", "Factorial representation: analyze or construct");
    factorial_cmd->add_option("--dfao", automaton, "Unary DFAO JSON file to analyze");
    factorial_cmd->add_option("--sequence", sequence, "Prefix s(0..n0) of an ultimately constant sequence");
    factorial_cmd->callback([&] {
        action = [&] {
            if (automaton.empty() == sequence.empty()) throw ConfigError("give exactly one of --dfao and --sequence");
            if (!automaton.empty()) {
                auto r = factorial_analysis(io::dfao_from_json(io::read_json(automaton)));
                emit({{"tail", r.tail},
                      {"cycle", r.cycle},
                      {"m0", r.m0},
                      {"naive_m0", r.naive_m0},
                      {"limit", std::string(1, r.limit)}},
                     out);
                return;
            }
            n0 = sequence.size() - 1;
            std::string used = sequence;
            std::sort(used.begin(), used.end());
            used.erase(std::unique(used.begin(), used.end()), used.end());
            Alphabet letters = used.find_first_not_of("01") == std::string::npos ? Alphabet::binary() : Alphabet(used);
            SequenceOracle sigma{letters, [sequence](Index n) {
                                     return sequence[std::min<std::size_t>(n, sequence.size() - 1)];
                                 }};
            emit(io::to_json(ultimately_constant_automaton(sigma, n0, Budgets::load().length_cap)), out);
        };
    });
    auto* diagonal = numrep->add_subcommand("diagonal", "Members of the diagonal language of the puzzle encoding");
    diagonal->add_option("--count", count, "Words checked");
    diagonal->callback([&] {
        action = [&] {
            Encoding rho = puzzle_encoding();
            AutomatonOrder order(Alphabet::binary());
            WordOrder words(Alphabet::binary());
            json members = json::array();
            for (Index n = 0; n < count; ++n)
                if (diagonal_member(rho, order, n)) members.push_back(words.word_at(n));
            emit({{"encoding", rho.name}, {"checked", count}, {"members", members}}, out);
        };
    });
    auto* parity = numrep->add_subcommand("parity", "Parity alternation witness for a unary bijection");
    parity->add_option("--representation", representation, "unary or engine");
    parity->add_option("--horizon", horizon, "Numbers searched");
    parity->callback([&] {
        action = [&] {
            auto w = parity_counterexample(representation_by_name(representation, Budgets::load()), horizon);
            emit({{"representation", representation}, {"first", w.first}, {"second", w.second}}, out);
        };
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Run built-in self-checks");
    std::string suite = "all";
    verify->add_option("--suite", suite, "all, automata, imageset, inject, bijectify or numrep");
    verify->callback([&] { action = [&] { status = run_verify(suite, Budgets::load(), out); }; });

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "First words or automata in the canonical orders");
    enumerate->require_subcommand(1);
    std::string letters = "01";
    auto* words_cmd = enumerate->add_subcommand("words", "Shortlex words");
    words_cmd->add_option("--alphabet", letters, "Letters");
    words_cmd->add_option("--count", count, "How many");
    words_cmd->callback([&] {
        action = [&] {
            WordOrder order{Alphabet(letters)};
            std::vector<Word> ws;
            for (Index n = 0; n < count; ++n) ws.push_back(order.word_at(n));
            emit(word_list(ws), out);
        };
    });
    auto* automata_cmd = enumerate->add_subcommand("automata", "Automata in enumeration order");
    automata_cmd->add_option("--alphabet", letters, "Letters");
    automata_cmd->add_option("--count", count, "How many");
    automata_cmd->callback([&] {
        action = [&] {
            AutomatonOrder order{Alphabet(letters)};
            json list = json::array();
            for (Index n = 0; n < count; ++n) list.push_back(io::to_json(order.automaton_at(n)));
            emit(list, out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kViolation;
    }

    try {
        if (action) action();
        return status;
    } catch (const ResourceError& e) {
        std::cerr << "budget exhausted: " << e.what() << '\n';
        return kBudget;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    }
}
