#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "goal.hpp"
#include "printer.hpp"
#include "term.hpp"

namespace mup {

enum class CutMode {
    HardCut, // `aux :- G0, !.  aux :- G1.`  -- first solution of the chosen disjunct
    SoftCut  // `aux :- (G0 *-> true ; G1).` -- every solution of the chosen disjunct
};

inline const char *to_string(CutMode m) { return m == CutMode::HardCut ? "hard_cut" : "soft_cut"; }

inline const std::string kChoicePrefix = "$choice_";

//
// Compiles choice goals into plain Prolog. Each `G0 # G1` becomes a call to a
// fresh auxiliary predicate over the choice's variables, so the emitted cut
// (or soft-cut) only ever prunes alternatives of that one choice and never
// those of the enclosing clause.
//
class Transpiler {
public:
    explicit Transpiler(CutMode mode) : mode_(mode) {}

    // Translates every clause, auxiliary clauses following their origin.
    std::vector<Clause> translate_clauses(const Program &p) {
        check_reserved(p);
        std::vector<Clause> out;
        for (const auto &c : p.clauses()) {
            std::vector<Clause> aux;
            Clause t;
            t.head = c.head;
            t.span = c.span;
            t.body = rewrite(c.body, clause_vars(c), aux);
            out.push_back(std::move(t));
            for (auto &a : aux)
                out.push_back(std::move(a));
        }
        return out;
    }

    std::string translate(const Program &p, std::string_view source_name = "<input>") {
        auto clauses = translate_clauses(p);
        std::string out = "% translated from " + std::string(source_name) + " (mode: " + to_string(mode_) + ")\n";
        for (const auto &c : clauses) {
            bool aux = c.head.name().rfind(kChoicePrefix, 0) == 0;
            out += to_string(c, {Grammar::Verification, VarStyle::Names, aux});
            out += "\n";
        }
        return out;
    }

private:
    static std::vector<Term> clause_vars(const Clause &c) {
        std::vector<Term> vars;
        collect_vars(c.head, vars);
        collect_vars(*c.body, vars);
        return vars;
    }

    static void reject_reserved(const Term &t) {
        if ((t.is_atom() || t.is_compound()) && t.name().rfind(kChoicePrefix, 0) == 0)
            throw TranslationError("name '" + t.name() + "' collides with the reserved prefix " + kChoicePrefix);
        if (t.is_compound())
            for (const auto &a : t.args())
                reject_reserved(a);
    }

    static void check_reserved(const Program &p) {
        for (const auto &c : p.clauses()) {
            reject_reserved(c.head);
            for_each_term(*c.body, [](const Term &t) { reject_reserved(t); });
        }
    }

    GoalPtr rewrite(const GoalPtr &g, const std::vector<Term> &context, std::vector<Clause> &aux) {
        switch (g->kind) {
        case Goal::Kind::True:
        case Goal::Kind::Call:
        case Goal::Kind::Eq:
        case Goal::Kind::Cut:
            return g;
        case Goal::Kind::Exists:
            // Clause-local variables are already existential in Prolog.
            return rewrite(g->first, context, aux);
        case Goal::Kind::Conj:
            return goals::conj(rewrite(g->first, context, aux), rewrite(g->second, context, aux));
        case Goal::Kind::ClassicalOr:
            return goals::classical_or(rewrite(g->first, context, aux), rewrite(g->second, context, aux));
        case Goal::Kind::SoftIfThenElse:
            return goals::soft_if_then_else(rewrite(g->first, context, aux), rewrite(g->second, context, aux),
                                            rewrite(g->third, context, aux));
        case Goal::Kind::Choice:
            return lift_choice(*g, context, aux);
        }
        throw InternalError("unknown goal kind in translation");
    }

    GoalPtr lift_choice(const Goal &choice, const std::vector<Term> &context, std::vector<Clause> &aux) {
        std::string name = kChoicePrefix + std::to_string(++counter_);

        std::vector<Term> inside;
        collect_vars(choice, inside);
        std::vector<Term> params;
        for (const auto &v : context)
            for (const auto &w : inside)
                if (v.var_id() == w.var_id()) {
                    params.push_back(v);
                    break;
                }
        Term head = Term::compound(name, params);

        // Reserve the slot so auxiliaries appear outermost first.
        std::size_t slot = aux.size();
        aux.emplace_back();

        auto aux_context = [&](const GoalPtr &body) {
            std::vector<Term> vars = params;
            collect_vars(*body, vars);
            return vars;
        };

        if (mode_ == CutMode::HardCut) {
            GoalPtr left = rewrite(choice.first, aux_context(choice.first), aux);
            GoalPtr right = rewrite(choice.second, aux_context(choice.second), aux);
            aux[slot] = Clause{head, goals::conj(left, goals::cut()), {}};
            aux.insert(aux.begin() + static_cast<std::ptrdiff_t>(slot) + 1, Clause{head, right, {}});
        } else {
            GoalPtr left = rewrite(choice.first, aux_context(choice.first), aux);
            GoalPtr right = rewrite(choice.second, aux_context(choice.second), aux);
            aux[slot] = Clause{head, goals::soft_if_then_else(left, goals::truth(), right), {}};
        }
        return goals::call(head);
    }

    CutMode mode_;
    int counter_ = 0;
};

inline std::string translate(const Program &p, CutMode mode, std::string_view source_name = "<input>") {
    return Transpiler(mode).translate(p, source_name);
}

} // namespace mup
