#pragma once

// Brute-force reference semantics used to check the engine. Deliberately
// shares nothing with the engine beyond the term and goal definitions: it has
// its own substitution (persistent maps, no trail), unifier, renaming and
// arithmetic, and it searches by plain recursion.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goal.hpp"
#include "term.hpp"

namespace mup::oracle {

using Subst = std::map<VarId, Term>;

enum class Commit { Soft, First };

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded() : std::runtime_error("oracle step budget exceeded") {}
};

struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Limits the work a single oracle query may do.
class Budget {
public:
    explicit Budget(std::uint64_t steps) : remaining_(steps) {}

    void spend() {
        if (remaining_ == 0)
            throw BudgetExceeded();
        --remaining_;
    }

    std::uint64_t remaining() const { return remaining_; }

private:
    std::uint64_t remaining_;
};

inline Term walk(Term t, const Subst &s) {
    for (;;) {
        if (!t.is_var())
            return t;
        auto it = s.find(t.var_id());
        if (it == s.end())
            return t;
        t = it->second;
    }
}

inline Term resolve(const Term &t, const Subst &s) {
    Term w = walk(t, s);
    if (!w.is_compound())
        return w;
    std::vector<Term> args;
    for (const auto &a : w.args())
        args.push_back(resolve(a, s));
    return Term::compound(w.name(), std::move(args));
}

inline bool occurs(VarId v, const Term &t, const Subst &s) {
    Term w = walk(t, s);
    if (w.is_var())
        return w.var_id() == v;
    if (w.is_compound())
        for (const auto &a : w.args())
            if (occurs(v, a, s))
                return true;
    return false;
}

// Textbook recursive Robinson unification with occurs check.
inline std::optional<Subst> unify(const Term &a, const Term &b, Subst s) {
    Term x = walk(a, s), y = walk(b, s);
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id())
        return s;
    if (x.is_var()) {
        if (occurs(x.var_id(), y, s))
            return std::nullopt;
        s[x.var_id()] = y;
        return s;
    }
    if (y.is_var())
        return unify(y, x, std::move(s));
    if (x.kind() != y.kind())
        return std::nullopt;
    switch (x.kind()) {
    case Term::Kind::Atom:
        return x.name() == y.name() ? std::optional<Subst>(std::move(s)) : std::nullopt;
    case Term::Kind::Int:
        return x.int_value() == y.int_value() ? std::optional<Subst>(std::move(s)) : std::nullopt;
    case Term::Kind::Float:
        return x.float_value() == y.float_value() ? std::optional<Subst>(std::move(s)) : std::nullopt;
    case Term::Kind::Compound: {
        if (x.name() != y.name() || x.arity() != y.arity())
            return std::nullopt;
        std::optional<Subst> cur = std::move(s);
        for (std::size_t i = 0; i < x.arity() && cur; ++i)
            cur = unify(x.arg(i), y.arg(i), std::move(*cur));
        return cur;
    }
    case Term::Kind::Var:
        break;
    }
    return std::nullopt;
}

//
// Shared machinery for both oracles: program access, renaming and the small
// arithmetic subset the example programs use.
//
class Searcher {
public:
    Searcher(const Program &p, std::size_t depth_limit, Budget &budget)
        : program_(p), depth_limit_(depth_limit), budget_(budget) {}

    void reserve_ids_above(VarId ceiling) { next_id_ = std::max(next_id_, ceiling); }

protected:
    struct Renamed {
        Term head;
        GoalPtr body;
    };

    Renamed rename(const Clause &c) {
        std::map<VarId, Term> fresh;
        std::function<Term(const Term &)> go = [&](const Term &t) -> Term {
            if (t.is_var()) {
                auto it = fresh.find(t.var_id());
                if (it != fresh.end())
                    return it->second;
                Term v = Term::var(next_id_++, t.name());
                fresh.emplace(t.var_id(), v);
                return v;
            }
            if (t.is_compound()) {
                std::vector<Term> args;
                for (const auto &a : t.args())
                    args.push_back(go(a));
                return Term::compound(t.name(), std::move(args));
            }
            return t;
        };
        return {go(c.head), map_terms(c.body, go)};
    }

    GoalPtr instantiate(const Goal &exists) {
        Term fresh = Term::var(next_id_++, exists.term.name());
        VarId bound = exists.term.var_id();
        std::function<Term(const Term &)> go = [&](const Term &t) -> Term {
            if (t.is_var())
                return t.var_id() == bound ? fresh : t;
            if (t.is_compound()) {
                std::vector<Term> args;
                for (const auto &a : t.args())
                    args.push_back(go(a));
                return Term::compound(t.name(), std::move(args));
            }
            return t;
        };
        return map_terms(exists.first, go);
    }

    std::int64_t eval(const Term &t, const Subst &s) {
        Term w = walk(t, s);
        if (w.is_int())
            return w.int_value();
        if (!w.is_compound())
            throw Unsupported("oracle arithmetic supports integers only");
        if (w.arity() == 1 && w.name() == "-")
            return -eval(w.arg(0), s);
        if (w.arity() != 2)
            throw Unsupported("oracle arithmetic: " + w.name());
        std::int64_t a = eval(w.arg(0), s), b = eval(w.arg(1), s);
        const std::string &op = w.name();
        if (op == "+") return a + b;
        if (op == "-") return a - b;
        if (op == "*") return a * b;
        if (op == "//" && b != 0) return a / b;
        if (op == "mod" && b != 0) return ((a % b) + b) % b;
        throw Unsupported("oracle arithmetic: " + op);
    }

    using BuiltinResult = std::optional<std::optional<Subst>>;

    static BuiltinResult succeeded(Subst s) { return BuiltinResult(std::in_place, std::move(s)); }
    static BuiltinResult failed() { return BuiltinResult(std::in_place); }

    // nullopt: not a builtin. Otherwise the resulting substitution, if any.
    BuiltinResult builtin(const Term &atom, const Subst &s) {
        const std::string &n = atom.name();
        std::size_t arity = atom.is_compound() ? atom.arity() : 0;
        if (arity == 0) {
            if (n == "true")
                return succeeded(s);
            if (n == "fail" || n == "false")
                return failed();
            if (n == "nl")
                throw Unsupported("oracle does not perform I/O");
            return std::nullopt;
        }
        if (arity != 2) {
            if ((n == "read" || n == "write") && arity == 1)
                throw Unsupported("oracle does not perform I/O");
            return std::nullopt;
        }
        if (n == "=")
            return BuiltinResult(std::in_place, unify(atom.arg(0), atom.arg(1), s));
        if (n == "is")
            return BuiltinResult(std::in_place, unify(atom.arg(0), Term::integer(eval(atom.arg(1), s)), s));
        std::optional<bool> holds;
        if (n == "<") holds = eval(atom.arg(0), s) < eval(atom.arg(1), s);
        else if (n == ">") holds = eval(atom.arg(0), s) > eval(atom.arg(1), s);
        else if (n == "=<") holds = eval(atom.arg(0), s) <= eval(atom.arg(1), s);
        else if (n == ">=") holds = eval(atom.arg(0), s) >= eval(atom.arg(1), s);
        else if (n == "=:=") holds = eval(atom.arg(0), s) == eval(atom.arg(1), s);
        else if (n == "=\\=") holds = eval(atom.arg(0), s) != eval(atom.arg(1), s);
        if (!holds)
            return std::nullopt;
        return *holds ? succeeded(s) : failed();
    }

    const std::vector<std::size_t> *clauses_for(const Term &atom) const {
        return program_.lookup({atom.name(), atom.is_compound() ? atom.arity() : 0});
    }

    const Program &program_;
    std::size_t depth_limit_;
    Budget &budget_;
    VarId next_id_ = 0;
};

//
// Angelic provability: ⊕ may take whichever disjunct leads to a proof, so
// for provability it behaves like inclusive disjunction. Proof depth counts
// nested backchaining steps.
//
class Provability : public Searcher {
public:
    using Searcher::Searcher;

    bool prove(const GoalPtr &g) {
        reserve_ids_above(std::max(program_.var_ceiling(), var_ceiling(*g)));
        return prove_all({{g, 0}}, {});
    }

private:
    struct Pending {
        GoalPtr goal;
        std::size_t depth;
    };

    bool prove_all(std::vector<Pending> stack, const Subst &s) {
        budget_.spend();
        if (stack.empty())
            return true;
        Pending top = stack.back();
        stack.pop_back();
        const Goal &g = *top.goal;
        switch (g.kind) {
        case Goal::Kind::True:
            return prove_all(std::move(stack), s);
        case Goal::Kind::Eq: {
            auto u = unify(g.term, g.rhs, s);
            return u && prove_all(std::move(stack), *u);
        }
        case Goal::Kind::Conj:
            stack.push_back({g.second, top.depth});
            stack.push_back({g.first, top.depth});
            return prove_all(std::move(stack), s);
        case Goal::Kind::Exists:
            stack.push_back({instantiate(g), top.depth});
            return prove_all(std::move(stack), s);
        case Goal::Kind::Choice:
        case Goal::Kind::ClassicalOr: {
            auto left = stack;
            left.push_back({g.first, top.depth});
            if (prove_all(std::move(left), s))
                return true;
            stack.push_back({g.second, top.depth});
            return prove_all(std::move(stack), s);
        }
        case Goal::Kind::Call:
            break;
        case Goal::Kind::Cut:
        case Goal::Kind::SoftIfThenElse:
            throw Unsupported("oracle covers the core language only");
        }
        Term atom = walk(g.term, s);
        if (!atom.is_callable())
            throw Unsupported("oracle: non-callable goal");
        if (auto b = builtin(atom, s))
            return *b && prove_all(std::move(stack), **b);
        const auto *cands = clauses_for(atom);
        if (!cands || top.depth + 1 > depth_limit_)
            return false;
        for (std::size_t idx : *cands) {
            Renamed c = rename(program_.clauses()[idx]);
            auto u = unify(c.head, atom, s);
            if (!u)
                continue;
            auto next = stack;
            next.push_back({c.body, top.depth + 1});
            if (prove_all(std::move(next), *u))
                return true;
        }
        return false;
    }
};

struct Enumeration {
    std::vector<Subst> answers;
    bool limited = false; // some branch was cut off by the depth bound
};

//
// Left-biased committed-choice enumeration, computed eagerly: a choice's
// answers are its left disjunct's answers when there are any (only the first
// under Commit::First), else the right disjunct's answers; a left disjunct
// cut off by the depth bound with no answers blocks the right one.
//
class Enumerator : public Searcher {
public:
    Enumerator(const Program &p, std::size_t depth_limit, Budget &budget, Commit mode)
        : Searcher(p, depth_limit, budget), mode_(mode) {}

    Enumeration enumerate(const GoalPtr &g) {
        reserve_ids_above(std::max(program_.var_ceiling(), var_ceiling(*g)));
        return solve(*g, {}, 0);
    }

private:
    Enumeration solve(const Goal &g, const Subst &s, std::size_t depth) {
        budget_.spend();
        Enumeration out;
        switch (g.kind) {
        case Goal::Kind::True:
            out.answers.push_back(s);
            return out;
        case Goal::Kind::Eq:
            if (auto u = unify(g.term, g.rhs, s))
                out.answers.push_back(std::move(*u));
            return out;
        case Goal::Kind::Conj: {
            Enumeration left = solve(*g.first, s, depth);
            out.limited = left.limited;
            for (const auto &a : left.answers) {
                Enumeration right = solve(*g.second, a, depth);
                out.limited = out.limited || right.limited;
                for (auto &b : right.answers)
                    out.answers.push_back(std::move(b));
            }
            return out;
        }
        case Goal::Kind::Exists:
            return solve(*instantiate(g), s, depth);
        case Goal::Kind::Choice: {
            Enumeration left = solve(*g.first, s, depth);
            if (!left.answers.empty()) {
                if (mode_ == Commit::First)
                    left.answers.resize(1);
                return left;
            }
            if (left.limited)
                return left;
            return solve(*g.second, s, depth);
        }
        case Goal::Kind::ClassicalOr: {
            out = solve(*g.first, s, depth);
            Enumeration right = solve(*g.second, s, depth);
            out.limited = out.limited || right.limited;
            for (auto &b : right.answers)
                out.answers.push_back(std::move(b));
            return out;
        }
        case Goal::Kind::Call:
            break;
        case Goal::Kind::Cut:
        case Goal::Kind::SoftIfThenElse:
            throw Unsupported("oracle covers the core language only");
        }
        Term atom = walk(g.term, s);
        if (!atom.is_callable())
            throw Unsupported("oracle: non-callable goal");
        if (auto b = builtin(atom, s)) {
            if (*b)
                out.answers.push_back(std::move(**b));
            return out;
        }
        const auto *cands = clauses_for(atom);
        if (!cands)
            return out;
        if (depth + 1 > depth_limit_) {
            out.limited = true;
            return out;
        }
        for (std::size_t idx : *cands) {
            Renamed c = rename(program_.clauses()[idx]);
            auto u = unify(c.head, atom, s);
            if (!u)
                continue;
            Enumeration sub = solve(*c.body, *u, depth + 1);
            out.limited = out.limited || sub.limited;
            for (auto &a : sub.answers)
                out.answers.push_back(std::move(a));
        }
        return out;
    }

    Commit mode_;
};

enum class Verdict { Proved, NotProvedWithinDepth };

inline Verdict provable(const Program &p, const GoalPtr &g, std::size_t depth,
                        std::uint64_t budget_steps = 5'000'000) {
    Budget budget(budget_steps);
    return Provability(p, depth, budget).prove(g) ? Verdict::Proved : Verdict::NotProvedWithinDepth;
}

struct BruteForceSolutions {
    // Each answer: the answer variables' fully resolved values, in order.
    std::vector<std::vector<Term>> answers;
    bool limited = false;
};

inline BruteForceSolutions count_solutions_bruteforce(const Program &p, const GoalPtr &g,
                                                      const std::vector<Term> &answer_vars, std::size_t depth,
                                                      Commit mode = Commit::Soft,
                                                      std::uint64_t budget_steps = 5'000'000) {
    Budget budget(budget_steps);
    Enumerator e(p, depth, budget, mode);
    for (const auto &v : answer_vars)
        e.reserve_ids_above(v.var_id() + 1);
    Enumeration en = e.enumerate(g);
    BruteForceSolutions out;
    out.limited = en.limited;
    for (const auto &s : en.answers) {
        std::vector<Term> row;
        for (const auto &v : answer_vars)
            row.push_back(resolve(v, s));
        out.answers.push_back(std::move(row));
    }
    return out;
}

} // namespace mup::oracle
