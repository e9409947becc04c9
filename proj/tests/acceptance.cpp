// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <mup/corpus.hpp>
#include <mup/engine.hpp>
#include <mup/selftest.hpp>
#include <mup/transpiler.hpp>
#include <mup/unify.hpp>

#include "support.hpp"

using namespace mup;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::vector<std::string> answers(const std::string &entry, const std::string &query, SolveConfig cfg = {},
                                 TraceSink trace = {}) {
    Program p = parse_program(corpus_entry(entry).source);
    QueryResult r = run_query(p, query, cfg, ScriptedIo().ports(), std::move(trace));
    if (r.outcome == Outcome::Errored)
        throw Error(r.error);
    std::vector<std::string> out;
    for (const auto &s : r.solutions)
        out.push_back(format_solution(s));
    return out;
}

Verdict ac1_max() {
    auto got = answers("max", "max(3,9,M).");
    return {got == std::vector<std::string>{"M = 9."}, join(got)};
}

Verdict ac2_f() {
    auto one = answers("f", "f(1,Y).");
    auto five = answers("f", "f(5,Y).");
    bool ok = one == std::vector<std::string>{"Y = 0."} && five == std::vector<std::string>{"Y = 3."};
    return {ok, "f(1,Y): " + join(one) + ", f(5,Y): " + join(five)};
}

Verdict ac3_member() {
    auto det = answers("member", "member(X,[a,b,c]).");
    auto cls = answers("member_classical", "member(X,[a,b,c]).");
    return {det.size() == 1 && cls.size() == 3,
            "with #: " + std::to_string(det.size()) + " solution(s), with ;: " + std::to_string(cls.size())};
}

Verdict ac4_son() {
    std::vector<TraceEvent> trace;
    auto got = answers("son", "son(tom,Y).", {}, [&](const TraceEvent &e) { trace.push_back(e); });
    std::size_t discarded_female = 0, discarded = 0;
    for (const auto &e : trace) {
        if (e.kind != TraceKind::ChoiceDiscarded)
            continue;
        ++discarded;
        if (e.payload.rfind("right female(tom)", 0) == 0)
            ++discarded_female;
    }
    bool ok = got == std::vector<std::string>{"Y = bob.", "Y = jim."} && discarded == 1 && discarded_female == 1;
    return {ok, join(got) + ", choice_discarded events: " + std::to_string(discarded) +
                    " (female branch: " + std::to_string(discarded_female) + ")"};
}

std::size_t occurrences(const std::string &hay, const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
        ++n;
    return n;
}

Verdict ac5_rprime() {
    Program p = parse_program(corpus_entry("rprime").source);
    std::string detail;
    bool ok = true;
    for (auto [input, word] : {std::pair<std::string, std::string>{"7.", "prime"}, {"9.", "composite"}}) {
        ScriptedIo io({input});
        QueryResult r = run_query(p, "rprime.", {}, io.ports());
        bool this_ok = r.outcome == Outcome::Exhausted && r.solutions.size() == 1 && io.output() == word &&
                       occurrences(io.output(), word) == 1;
        ok = ok && this_ok;
        detail += (detail.empty() ? "" : ", ") + input + " -> \"" + io.output() + "\"";
    }
    return {ok, detail};
}

Verdict ac6_exclusivity() {
    ExclusivityReport rep = check_choice_exclusivity(2026, 500, 10);
    std::ostringstream os;
    os << rep.triples_checked << " triples, " << rep.violations.size() << " violations, "
       << rep.skipped_intractable << " generated triples set aside as intractable";
    for (const auto &v : rep.violations)
        std::cerr << v << "\n";
    return {rep.triples_checked == 500 && rep.violations.empty(), os.str()};
}

Verdict ac7_selftest() {
    SelftestOptions opt;
    opt.cases = 300;
    opt.depth = 10;
    SelftestReport rep = run_selftest(opt);
    std::cerr << rep.summary();
    for (const auto &c : rep.counterexamples)
        std::cerr << c << "\n";
    bool ok = rep.cases_checked == 300 && rep.success_agree == rep.cases_checked &&
              rep.soft_multiset_agree == rep.cases_checked && rep.first_multiset_agree == rep.cases_checked &&
              rep.counterexamples.empty();
    std::ostringstream os;
    os << rep.cases_checked << " cases + " << rep.shipped_checked << " corpus queries; success agreement "
       << rep.success_agree << "/" << rep.cases_checked << ", multiset agreement " << rep.soft_multiset_agree << "/"
       << rep.cases_checked << " (first mode " << rep.first_multiset_agree << "/" << rep.cases_checked << "), "
       << rep.counterexamples.size() << " counterexamples";
    return {ok, os.str()};
}

Verdict ac8_translation() {
    ConformanceReport rep;
    std::size_t programs = 0;
    for (const auto &entry : shipped_corpus()) {
        if (entry.uses_io)
            continue;
        ++programs;
        check_translation(parse_program(entry.source), entry.source, entry.queries, 12, rep);
    }
    // rprime reads input, so it is compared on scripted runs instead.
    Program rp = parse_program(corpus_entry("rprime").source);
    for (auto [commit, cut] : {std::pair{CommitMode::First, CutMode::HardCut},
                               std::pair{CommitMode::Soft, CutMode::SoftCut}}) {
        Program tp = parse_program(translate(rp, cut), {Grammar::Verification, true});
        for (const char *input : {"2.", "7.", "9.", "15.", "97."}) {
            SolveConfig cfg;
            cfg.commit_mode = commit;
            ScriptedIo a({input}), b({input});
            QueryResult ra = run_query(rp, "rprime.", cfg, a.ports());
            QueryResult rb = run_query(tp, "rprime.", cfg, b.ports());
            ++rep.comparisons;
            if (ra.solutions.size() != rb.solutions.size() || a.output() != b.output())
                rep.mismatches.push_back(std::string("rprime ") + to_string(cut) + " input " + input);
        }
    }
    ++programs;
    for (const auto &m : rep.mismatches)
        std::cerr << m << "\n";
    std::ostringstream os;
    os << programs << " programs, " << rep.comparisons << " query comparisons over both modes, "
       << rep.mismatches.size() << " mismatches";
    return {rep.mismatches.empty() && rep.skipped_limited == 0, os.str()};
}

Verdict ac9_unify() {
    support::TermPairGenerator gen(909);
    std::size_t violations = 0, successes = 0;
    for (int i = 0; i < 1000; ++i) {
        auto [t, s] = gen.pair();
        Bindings b;
        b.bind(50, Term::atom("pre"));
        Bindings before = b;
        bool ok = unify(t, s, b, true);
        auto ref = support::ReferenceUnifier::unify(t, s, {});
        if (ok != ref.has_value()) {
            ++violations;
            continue;
        }
        if (!ok) {
            if (!(b == before) || b.snapshot() != before.snapshot())
                ++violations;
            continue;
        }
        ++successes;
        std::vector<Term> mine, theirs;
        for (VarId v = 0; v < 4; ++v) {
            mine.push_back(apply_substitution(Term::var(v), b));
            theirs.push_back(support::ReferenceUnifier::resolve(Term::var(v), *ref));
        }
        if (apply_substitution(t, b) != apply_substitution(s, b) ||
            !support::variant(Term::compound("v", mine), Term::compound("v", theirs)))
            ++violations;
    }
    return {violations == 0, "1000 pairs (" + std::to_string(successes) + " unifiable), " +
                                 std::to_string(violations) + " violations"};
}

Verdict ac10_round_trip() {
    support::AstGenerator gen(1010);
    std::size_t violations = 0;
    for (int i = 0; i < 1000; ++i) {
        Clause c = gen.clause();
        std::string text = to_string(c);
        try {
            Program p = parse_program(text);
            support::Variant v;
            if (p.size() != 1 || !v.terms(c.head, p.clauses()[0].head) || !v.goals(*c.body, *p.clauses()[0].body)) {
                ++violations;
                std::cerr << "round trip changed: " << text << "\n";
            }
        } catch (const Error &e) {
            ++violations;
            std::cerr << "round trip failed: " << text << "\n  " << e.what() << "\n";
        }
    }
    return {violations == 0, "1000 clauses, " + std::to_string(violations) + " violations"};
}

} // namespace

int main() {
    struct Criterion {
        const char *id;
        const char *title;
        std::function<Verdict()> check;
        double seconds_allowed; // 0: no time bound
    };
    std::vector<Criterion> criteria{
        {"AC1", "max(3,9,M) yields exactly M = 9", ac1_max, 1.0},
        {"AC2", "f(1,Y) -> Y = 0 and f(5,Y) -> Y = 3", ac2_f, 0},
        {"AC3", "member: 1 solution with #, 3 with ;", ac3_member, 0},
        {"AC4", "son(tom,Y): both sons, female branch discarded once", ac4_son, 0},
        {"AC5", "rprime: 7 -> prime, 9 -> composite", ac5_rprime, 0},
        {"AC6", "choice exclusivity on 500 random triples", ac6_exclusivity, 60.0},
        {"AC7", "selftest --cases 300 --depth 10 agrees with the oracles", ac7_selftest, 300.0},
        {"AC8", "translated programs give the same answers", ac8_translation, 0},
        {"AC9", "unifier agrees with the reference unifier", ac9_unify, 0},
        {"AC10", "parse(print(ast)) round trip", ac10_round_trip, 0},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v{false, ""};
        try {
            v = c.check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.seconds_allowed == 0 || secs < c.seconds_allowed;
        bool pass = v.pass && in_time;
        failures += !pass;
        std::cout << (pass ? "PASS " : "FAIL ") << std::left << std::setw(5) << c.id << c.title << " -- "
                  << v.detail << " [" << std::fixed << std::setprecision(3) << secs << " s";
        if (c.seconds_allowed > 0)
            std::cout << ", limit " << std::setprecision(0) << c.seconds_allowed << " s";
        std::cout << "]" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
