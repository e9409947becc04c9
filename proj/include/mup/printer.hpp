#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bindings.hpp"
#include "goal.hpp"
#include "operators.hpp"
#include "term.hpp"

namespace mup {

enum class VarStyle {
    Names, // source names, disambiguated where two variables share one
    Ids    // `_G<id>` for every variable
};

struct PrintOptions {
    Grammar grammar = Grammar::Standard;
    VarStyle vars = VarStyle::Names;
    // Print any variable occurring once in the printed unit as `_`.
    bool anonymous_singletons = false;
};

inline bool atom_needs_quotes(const std::string &name) {
    if (name == "[]" || name == "!")
        return false;
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0])))
        return true;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return true;
    return false;
}

inline std::string quote_atom(const std::string &name) {
    if (!atom_needs_quotes(name))
        return name;
    std::string out = "'";
    for (char c : name) {
        switch (c) {
        case '\'': out += "\\'"; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "'";
}

// Shortest text that reads back as the same double, always with a '.'.
inline std::string format_float(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    auto e = s.find_first_of("eE");
    if (s.find('.') == std::string::npos) {
        if (e == std::string::npos)
            s += ".0";
        else
            s.insert(e, ".0");
    }
    return s;
}

//
// Renders terms, goals and clauses as source text. A Printer instance is one
// printing unit: variable names stay consistent across every call on it.
//
class Printer {
public:
    explicit Printer(PrintOptions opts = {}) : opts_(opts) {}

    // Records variable occurrences so singletons and `_` variables can be
    // rendered as `_`. Call before printing the unit.
    void count(const Term &t) {
        for_each_var(t, [&](const Term &v) { ++occurrences_[v.var_id()]; });
    }
    void count(const Goal &g) {
        for_each_term(g, [&](const Term &t) { count(t); });
    }
    void count(const Clause &c) {
        count(c.head);
        count(*c.body);
    }

    std::string term(const Term &t, int max_prec = 1200) {
        switch (t.kind()) {
        case Term::Kind::Var:
            return var_name(t);
        case Term::Kind::Atom:
            return quote_atom(t.name());
        case Term::Kind::Int:
            return std::to_string(t.int_value());
        case Term::Kind::Float:
            return format_float(t.float_value());
        case Term::Kind::Compound:
            break;
        }
        if (is_cons(t))
            return list(t);
        if (t.arity() == 2) {
            if (auto op = infix_op(t.name(), opts_.grammar)) {
                std::string sep = t.name() == "," ? ", " : " " + t.name() + " ";
                // `a # (b ; c)` must keep its parentheses: the reader
                // rejects the two disjunctions mixed at one level.
                const Term &r = t.arg(1);
                bool mixed = (t.name() == "#" || t.name() == ";") && r.is_compound() && r.arity() == 2 &&
                             (r.name() == "#" || r.name() == ";") && r.name() != t.name();
                std::string s = term(t.arg(0), left_max(*op)) + sep + term(r, mixed ? 0 : right_max(*op));
                return op->priority > max_prec ? "(" + s + ")" : s;
            }
        }
        if (t.arity() == 1 && t.name() == "-") {
            const Term &a = t.arg(0);
            bool negative = (a.is_int() && a.int_value() < 0) || (a.is_float() && std::signbit(a.float_value()));
            // A negative literal, an operator atom or another prefix term
            // after `-` would read back differently without parentheses.
            bool opaque = negative ||
                          (a.is_atom() && (infix_op(a.name(), opts_.grammar) || prefix_op(a.name()))) ||
                          (a.is_compound() && a.arity() == 1 && prefix_op(a.name()));
            std::string s = opaque ? "- (" + term(a) + ")" : "- " + term(a, 200);
            return 200 > max_prec ? "(" + s + ")" : s;
        }
        std::string s = quote_atom(t.name()) + "(";
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i)
                s += ",";
            s += term(t.arg(i), 999);
        }
        return s + ")";
    }

    std::string goal(const Goal &g, int max_prec = 1200) {
        switch (g.kind) {
        case Goal::Kind::True:
            return "true";
        case Goal::Kind::Cut:
            return "!";
        case Goal::Kind::Call:
            return term(g.term, max_prec);
        case Goal::Kind::Eq: {
            std::string s = term(g.term, 699) + " = " + term(g.rhs, 699);
            return max_prec < 700 ? "(" + s + ")" : s;
        }
        case Goal::Kind::Conj: {
            std::string s = goal(*g.first, 999) + ", " + goal(*g.second, 1000);
            return max_prec < 1000 ? "(" + s + ")" : s;
        }
        case Goal::Kind::Choice:
            return "(" + goal(*g.first, 1099) + " # " + goal(*g.second, 1100) + ")";
        case Goal::Kind::ClassicalOr:
            return "(" + goal(*g.first, 1099) + " ; " + goal(*g.second, 1100) + ")";
        case Goal::Kind::SoftIfThenElse:
            return "(" + goal(*g.first, 1049) + " *-> " + goal(*g.second, 1050) + " ; " + goal(*g.third, 1100) +
                   ")";
        case Goal::Kind::Exists:
            // No surface syntax: the binder is left implicit.
            return goal(*g.first, max_prec);
        }
        return "?";
    }

    std::string clause(const Clause &c) {
        std::string head = term(c.head, 1199);
        if (c.body->kind == Goal::Kind::True)
            return head + ".";
        return head + " :- " + goal(*c.body, 1199) + ".";
    }

private:
    std::string list(const Term &t) {
        std::string s = "[";
        Term cur = t;
        bool first = true;
        while (is_cons(cur)) {
            if (!first)
                s += ",";
            first = false;
            s += term(cur.arg(0), 999);
            cur = cur.arg(1);
        }
        if (!is_nil(cur))
            s += "|" + term(cur, 999);
        return s + "]";
    }

    std::string var_name(const Term &v) {
        VarId id = v.var_id();
        if (opts_.vars == VarStyle::Ids)
            return "_G" + std::to_string(id);
        auto found = assigned_.find(id);
        if (found != assigned_.end())
            return found->second;
        const std::string &src = v.name();
        auto occ = occurrences_.find(id);
        bool singleton = occ != occurrences_.end() && occ->second == 1;
        if (singleton && (opts_.anonymous_singletons || src.empty() || src[0] == '_'))
            return "_";
        std::string n = src;
        if (n.empty() || n == "_")
            n = "_G" + std::to_string(id);
        while (taken_.count(n))
            n += "_" + std::to_string(id);
        taken_.insert(n);
        assigned_.emplace(id, n);
        return n;
    }

    PrintOptions opts_;
    std::map<VarId, int> occurrences_;
    std::map<VarId, std::string> assigned_;
    std::set<std::string> taken_;
};

inline std::string to_string(const Term &t, PrintOptions opts = {}) { return Printer(opts).term(t, 999); }

inline std::string to_string(const Goal &g, PrintOptions opts = {}) {
    Printer p(opts);
    p.count(g);
    return p.goal(g);
}

inline std::string to_string(const Clause &c, PrintOptions opts = {}) {
    Printer p(opts);
    p.count(c);
    return p.clause(c);
}

// `X = a, Y = f(_G7).` or `true.` for a solution without answer variables.
inline std::string format_solution(const Solution &s) {
    if (s.assignments.empty())
        return "true.";
    Printer p({Grammar::Standard, VarStyle::Ids, false});
    std::string out;
    for (const auto &[name, value] : s.assignments) {
        if (!out.empty())
            out += ", ";
        out += name + " = " + p.term(value, 699);
    }
    return out + ".";
}

// Renames unbound variables by order of appearance so that solutions from
// independent runs can be compared textually.
inline std::string canonical_solution(const Solution &s) {
    std::map<VarId, std::size_t> order;
    std::function<Term(const Term &)> canon = [&](const Term &t) -> Term {
        if (t.is_var()) {
            auto [it, inserted] = order.emplace(t.var_id(), order.size());
            return Term::var(it->second, "_");
        }
        if (t.is_compound()) {
            std::vector<Term> args;
            for (const auto &a : t.args())
                args.push_back(canon(a));
            return Term::compound(t.name(), std::move(args));
        }
        return t;
    };
    Solution c;
    for (const auto &[name, value] : s.assignments)
        c.assignments.emplace_back(name, canon(value));
    return format_solution(c);
}

} // namespace mup
