#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "builtin_table.hpp"
#include "error.hpp"
#include "term.hpp"

namespace mup {

struct Goal;
using GoalPtr = std::shared_ptr<const Goal>;

//
// Goal formulas. True, Call, Eq, Conj, Exists and Choice are the core
// language; ClassicalOr is the inclusive-disjunction extension. Cut and
// SoftIfThenElse exist only for executing translated programs and are never
// produced by the standard grammar.
//
struct Goal {
    enum class Kind { True, Call, Eq, Conj, Exists, Choice, ClassicalOr, Cut, SoftIfThenElse };

    Kind kind = Kind::True;
    Term term;      // Call: the atom. Eq: left side. Exists: the bound variable.
    Term rhs;       // Eq: right side.
    GoalPtr first;  // Conj/Choice/ClassicalOr: left. Exists: body. SoftIfThenElse: condition.
    GoalPtr second; // Conj/Choice/ClassicalOr: right. SoftIfThenElse: then branch.
    GoalPtr third;  // SoftIfThenElse: else branch.
};

namespace goals {

inline GoalPtr make(Goal g) { return std::make_shared<const Goal>(std::move(g)); }

inline GoalPtr truth() { return make(Goal{}); }

inline GoalPtr call(Term atom) {
    if (atom.is_null() || !atom.is_callable())
        throw TypeError("callable", "non-callable goal");
    Goal g;
    g.kind = Goal::Kind::Call;
    g.term = std::move(atom);
    return make(std::move(g));
}

inline GoalPtr eq(Term l, Term r) {
    Goal g;
    g.kind = Goal::Kind::Eq;
    g.term = std::move(l);
    g.rhs = std::move(r);
    return make(std::move(g));
}

inline GoalPtr binary(Goal::Kind k, GoalPtr l, GoalPtr r) {
    Goal g;
    g.kind = k;
    g.first = std::move(l);
    g.second = std::move(r);
    return make(std::move(g));
}

inline GoalPtr conj(GoalPtr l, GoalPtr r) { return binary(Goal::Kind::Conj, std::move(l), std::move(r)); }
inline GoalPtr choice(GoalPtr l, GoalPtr r) { return binary(Goal::Kind::Choice, std::move(l), std::move(r)); }
inline GoalPtr classical_or(GoalPtr l, GoalPtr r) {
    return binary(Goal::Kind::ClassicalOr, std::move(l), std::move(r));
}

inline GoalPtr exists(Term var, GoalPtr body) {
    if (var.is_null() || !var.is_var())
        throw TypeError("variable", "non-variable quantifier binder");
    Goal g;
    g.kind = Goal::Kind::Exists;
    g.term = std::move(var);
    g.first = std::move(body);
    return make(std::move(g));
}

inline GoalPtr cut() {
    Goal g;
    g.kind = Goal::Kind::Cut;
    return make(std::move(g));
}

inline GoalPtr soft_if_then_else(GoalPtr cond, GoalPtr then, GoalPtr otherwise) {
    Goal g;
    g.kind = Goal::Kind::SoftIfThenElse;
    g.first = std::move(cond);
    g.second = std::move(then);
    g.third = std::move(otherwise);
    return make(std::move(g));
}

// Right-nested conjunction of a sequence; empty sequence is `true`.
inline GoalPtr conj_all(const std::vector<GoalPtr> &parts) {
    if (parts.empty())
        return truth();
    GoalPtr out = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it)
        out = conj(*it, out);
    return out;
}

} // namespace goals

// Visits every term directly held by a goal node, recursively.
template <typename F>
void for_each_term(const Goal &g, F &&f) {
    switch (g.kind) {
    case Goal::Kind::Call:
        f(g.term);
        break;
    case Goal::Kind::Eq:
        f(g.term);
        f(g.rhs);
        break;
    case Goal::Kind::Exists:
        f(g.term);
        for_each_term(*g.first, f);
        break;
    case Goal::Kind::Conj:
    case Goal::Kind::Choice:
    case Goal::Kind::ClassicalOr:
        for_each_term(*g.first, f);
        for_each_term(*g.second, f);
        break;
    case Goal::Kind::SoftIfThenElse:
        for_each_term(*g.first, f);
        for_each_term(*g.second, f);
        for_each_term(*g.third, f);
        break;
    case Goal::Kind::True:
    case Goal::Kind::Cut:
        break;
    }
}

inline void collect_vars(const Goal &g, std::vector<Term> &out) {
    for_each_term(g, [&](const Term &t) { collect_vars(t, out); });
}

inline VarId var_ceiling(const Goal &g) {
    VarId c = 0;
    for_each_term(g, [&](const Term &t) { c = std::max(c, var_ceiling(t)); });
    return c;
}

// Rebuilds a goal with every term passed through `fn`. Shares unchanged
// structure only at the term level.
inline GoalPtr map_terms(const GoalPtr &g, const std::function<Term(const Term &)> &fn) {
    Goal out = *g;
    switch (g->kind) {
    case Goal::Kind::Call:
        out.term = fn(g->term);
        break;
    case Goal::Kind::Eq:
        out.term = fn(g->term);
        out.rhs = fn(g->rhs);
        break;
    case Goal::Kind::Exists:
        out.term = fn(g->term);
        out.first = map_terms(g->first, fn);
        break;
    case Goal::Kind::Conj:
    case Goal::Kind::Choice:
    case Goal::Kind::ClassicalOr:
        out.first = map_terms(g->first, fn);
        out.second = map_terms(g->second, fn);
        break;
    case Goal::Kind::SoftIfThenElse:
        out.first = map_terms(g->first, fn);
        out.second = map_terms(g->second, fn);
        out.third = map_terms(g->third, fn);
        break;
    case Goal::Kind::True:
    case Goal::Kind::Cut:
        return g;
    }
    return goals::make(std::move(out));
}

inline bool uses_only_core_grammar(const Goal &g, bool allow_classical_or) {
    switch (g.kind) {
    case Goal::Kind::True:
    case Goal::Kind::Call:
    case Goal::Kind::Eq:
        return true;
    case Goal::Kind::Exists:
        return uses_only_core_grammar(*g.first, allow_classical_or);
    case Goal::Kind::ClassicalOr:
        if (!allow_classical_or)
            return false;
        [[fallthrough]];
    case Goal::Kind::Conj:
    case Goal::Kind::Choice:
        return uses_only_core_grammar(*g.first, allow_classical_or) &&
               uses_only_core_grammar(*g.second, allow_classical_or);
    case Goal::Kind::Cut:
    case Goal::Kind::SoftIfThenElse:
        return false;
    }
    return false;
}

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
};

// A program clause `head :- body`, every variable implicitly universal.
struct Clause {
    Term head;
    GoalPtr body = goals::truth();
    SourceSpan span;
};

inline PredicateKey predicate_key(const Term &callable) {
    return {callable.name(), callable.is_compound() ? callable.arity() : 0};
}

//
// Ordered clause store. The per-predicate index keeps source order, which is
// the order alternatives are tried in.
//
class Program {
public:
    void add(Clause c) {
        if (c.head.is_null() || !c.head.is_callable())
            throw TypeError("callable clause head", "non-callable term");
        auto key = predicate_key(c.head);
        if (is_builtin(key.first, key.second))
            throw PermissionError("cannot redefine built-in " + key.first + "/" + std::to_string(key.second) +
                                  " (line " + std::to_string(c.span.line) + ")");
        ceiling_ = std::max(ceiling_, mup::var_ceiling(c.head));
        ceiling_ = std::max(ceiling_, mup::var_ceiling(*c.body));
        index_[key].push_back(clauses_.size());
        clauses_.push_back(std::move(c));
    }

    void append(const Program &other) {
        for (const auto &c : other.clauses_)
            add(c);
    }

    const std::vector<Clause> &clauses() const { return clauses_; }
    std::size_t size() const { return clauses_.size(); }
    bool empty() const { return clauses_.empty(); }

    // Clause positions for a predicate, in source order; null when undefined.
    const std::vector<std::size_t> *lookup(const PredicateKey &key) const {
        auto it = index_.find(key);
        return it == index_.end() ? nullptr : &it->second;
    }

    bool defines(const PredicateKey &key) const { return index_.count(key) != 0; }

    const std::map<PredicateKey, std::vector<std::size_t>> &index() const { return index_; }

    // One past the largest variable id used by any clause.
    VarId var_ceiling() const { return ceiling_; }

private:
    std::vector<Clause> clauses_;
    std::map<PredicateKey, std::vector<std::size_t>> index_;
    VarId ceiling_ = 0;
};

} // namespace mup
