#pragma once

// Test-only helpers: an independent reference unifier, variant checks and a
// random AST generator. Nothing here reuses the library's unifier or bindings.

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <mup/goal.hpp>
#include <mup/term.hpp>

namespace support {

using mup::Goal;
using mup::GoalPtr;
using mup::Term;
using mup::VarId;

inline std::string program_path(const std::string &file) { return std::string(MUP_PROGRAMS_DIR) + "/" + file; }

inline std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Textbook recursive Robinson unification on triangular substitutions.
class ReferenceUnifier {
public:
    using Subst = std::map<VarId, Term>;

    static Term walk(Term t, const Subst &s) {
        while (t.is_var()) {
            auto it = s.find(t.var_id());
            if (it == s.end())
                break;
            t = it->second;
        }
        return t;
    }

    static Term resolve(const Term &t, const Subst &s) {
        Term w = walk(t, s);
        if (!w.is_compound())
            return w;
        std::vector<Term> args;
        for (const auto &a : w.args())
            args.push_back(resolve(a, s));
        return Term::compound(w.name(), args);
    }

    static bool occurs(VarId v, const Term &t, const Subst &s) {
        Term w = walk(t, s);
        if (w.is_var())
            return w.var_id() == v;
        if (w.is_compound())
            for (const auto &a : w.args())
                if (occurs(v, a, s))
                    return true;
        return false;
    }

    static std::optional<Subst> unify(const Term &x, const Term &y, Subst s) {
        Term a = walk(x, s), b = walk(y, s);
        if (a.is_var() && b.is_var() && a.var_id() == b.var_id())
            return s;
        if (a.is_var()) {
            if (occurs(a.var_id(), b, s))
                return std::nullopt;
            s[a.var_id()] = b;
            return s;
        }
        if (b.is_var())
            return unify(b, a, std::move(s));
        if (a.is_compound() && b.is_compound()) {
            if (a.name() != b.name() || a.arity() != b.arity())
                return std::nullopt;
            for (std::size_t i = 0; i < a.arity(); ++i) {
                auto next = unify(a.arg(i), b.arg(i), std::move(s));
                if (!next)
                    return std::nullopt;
                s = std::move(*next);
            }
            return s;
        }
        if (a == b)
            return s;
        return std::nullopt;
    }
};

// Equal up to a consistent bijective renaming of variables.
class Variant {
public:
    bool terms(const Term &a, const Term &b) {
        if (a.is_var() || b.is_var()) {
            if (!a.is_var() || !b.is_var())
                return false;
            auto f = fwd_.find(a.var_id());
            auto r = bwd_.find(b.var_id());
            if (f == fwd_.end() && r == bwd_.end()) {
                fwd_[a.var_id()] = b.var_id();
                bwd_[b.var_id()] = a.var_id();
                return true;
            }
            return f != fwd_.end() && r != bwd_.end() && f->second == b.var_id() && r->second == a.var_id();
        }
        if (a.kind() != b.kind())
            return false;
        if (!a.is_compound())
            return a == b;
        if (a.name() != b.name() || a.arity() != b.arity())
            return false;
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (!terms(a.arg(i), b.arg(i)))
                return false;
        return true;
    }

    bool goals(const Goal &a, const Goal &b) {
        if (a.kind != b.kind)
            return false;
        switch (a.kind) {
        case Goal::Kind::True:
        case Goal::Kind::Cut:
            return true;
        case Goal::Kind::Call:
            return terms(a.term, b.term);
        case Goal::Kind::Eq:
            return terms(a.term, b.term) && terms(a.rhs, b.rhs);
        case Goal::Kind::Exists:
            return terms(a.term, b.term) && goals(*a.first, *b.first);
        case Goal::Kind::Conj:
        case Goal::Kind::Choice:
        case Goal::Kind::ClassicalOr:
            return goals(*a.first, *b.first) && goals(*a.second, *b.second);
        case Goal::Kind::SoftIfThenElse:
            return goals(*a.first, *b.first) && goals(*a.second, *b.second) && goals(*a.third, *b.third);
        }
        return false;
    }

private:
    std::map<VarId, VarId> fwd_, bwd_;
};

inline bool variant(const Term &a, const Term &b) { return Variant().terms(a, b); }

// Small random terms over variables 0..vars-1, for unification properties.
class TermPairGenerator {
public:
    explicit TermPairGenerator(std::uint64_t seed, int vars = 4) : rng_(seed), vars_(vars) {}

    Term term(int depth) {
        int r = pick(0, 9);
        if (depth <= 0 || r < 4) {
            if (r < 2 || depth <= 0) {
                if (pick(0, 1))
                    return Term::var(static_cast<VarId>(pick(0, vars_ - 1)), "V");
            }
            switch (pick(0, 3)) {
            case 0: return Term::atom("a");
            case 1: return Term::atom("b");
            case 2: return Term::integer(pick(0, 1));
            default: return Term::var(static_cast<VarId>(pick(0, vars_ - 1)), "V");
            }
        }
        if (r < 7)
            return Term::compound("f", {term(depth - 1)});
        return Term::compound("g", {term(depth - 1), term(depth - 1)});
    }

    // The second term is often a mutation of the first so that both
    // successes and failures are common.
    std::pair<Term, Term> pair() {
        Term t = term(3);
        Term s = pick(0, 2) == 0 ? term(3) : mutate(t);
        return {t, s};
    }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Term mutate(const Term &t) {
        if (pick(0, 3) == 0)
            return term(2);
        if (!t.is_compound())
            return pick(0, 1) ? Term::var(static_cast<VarId>(pick(0, vars_ - 1)), "V") : t;
        std::vector<Term> args;
        for (const auto &a : t.args())
            args.push_back(mutate(a));
        return Term::compound(t.name(), args);
    }

    std::mt19937_64 rng_;
    int vars_;
};

//
// Random clauses exercising the printer and parser: operators of every
// class, negative numbers, floats, quoted atoms, lists and all goal
// connectives with a surface form.
//
class AstGenerator {
public:
    explicit AstGenerator(std::uint64_t seed) : rng_(seed) {
        mup::VarSource vars;
        pool_ = {vars.fresh("X"), vars.fresh("Y"), vars.fresh("Z"), vars.fresh("_W")};
    }

    mup::Clause clause() {
        mup::Clause c;
        c.head = pick(0, 4) == 0 ? Term::atom(pick_of(atoms_)) : Term::compound(pick_of(atoms_), args(2, pick(1, 3)));
        if (pick(0, 3) != 0)
            c.body = goal(3);
        return c;
    }

    Term term(int depth) {
        int r = pick(0, 19);
        if (depth <= 0 || r < 8)
            return leaf();
        if (r < 11)
            return Term::compound(pick_of(atoms_), args(depth, pick(1, 3)));
        if (r < 15)
            return Term::compound(pick_of(infix_), {term(depth - 1), term(depth - 1)});
        if (r < 17)
            return Term::compound("-", {term(depth - 1)});
        std::vector<Term> items;
        for (int i = pick(0, 3); i > 0; --i)
            items.push_back(term(depth - 1));
        Term tail = pick(0, 3) == 0 ? pick_of(pool_) : mup::nil();
        if (items.empty())
            return tail.is_var() ? mup::nil() : tail;
        return mup::make_list(items, tail);
    }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    template <typename T>
    const T &pick_of(const std::vector<T> &v) {
        return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
    }

    Term leaf() {
        switch (pick(0, 5)) {
        case 0:
        case 1: return pick_of(pool_);
        case 2: return Term::atom(pick_of(atoms_));
        case 3: return Term::integer(pick(-20, 20));
        case 4: return Term::real(pick_of(floats_));
        default: return Term::atom(pick_of(odd_atoms_));
        }
    }

    std::vector<Term> args(int depth, int n) {
        std::vector<Term> out;
        for (int i = 0; i < n; ++i)
            out.push_back(term(depth - 1));
        return out;
    }

    Term callable(int depth) {
        if (pick(0, 4) == 0)
            return Term::atom(pick_of(atoms_));
        if (pick(0, 5) == 0)
            return Term::compound(pick_of(comparisons_), {term(depth), term(depth)});
        return Term::compound(pick_of(atoms_), args(depth, pick(1, 3)));
    }

    GoalPtr goal(int depth) {
        int r = pick(0, 9);
        if (depth <= 0 || r < 4) {
            switch (pick(0, 5)) {
            case 0: return mup::goals::eq(term(2), term(2));
            case 1: return mup::goals::truth();
            default: return mup::goals::call(callable(2));
            }
        }
        GoalPtr l = goal(depth - 1), rr = goal(depth - 1);
        if (r < 6)
            return mup::goals::conj(l, rr);
        if (r < 9)
            return mup::goals::choice(l, rr);
        return mup::goals::classical_or(l, rr);
    }

    std::mt19937_64 rng_;
    std::vector<Term> pool_;
    std::vector<std::string> atoms_{"a", "b", "foo", "p", "q", "member", "nil0"};
    std::vector<std::string> odd_atoms_{"[]",  "hello world", "A",   "it's", "+",   "#",  ",",   "",
                                        "\\n", "mod",         ":-",  "-",    "-1",  "!",  ";",   "_x",
                                        "is",  "a\nb",        "'q'", "[a]",  "{}",  "=",  "*->", "é"};
    std::vector<std::string> infix_{"+", "-", "*", "/", "//", "mod", "=", "<", ">=", "is", ",", "#", ";", ":-"};
    std::vector<std::string> comparisons_{"<", ">", "=<", ">=", "=:=", "=\\="};
    std::vector<double> floats_{0.5, -1.25, 3.0, 1e20, -2.5e-7, 0.1, 123456.789};
};

} // namespace support
