#pragma once

#include <utility>
#include <vector>

#include "bindings.hpp"
#include "term.hpp"

namespace mup {

// True when variable `id` occurs in t under the current bindings.
inline bool occurs_in(VarId id, const Term &t, const Bindings &b) {
    std::vector<Term> pending{t};
    while (!pending.empty()) {
        Term cur = deref(pending.back(), b);
        pending.pop_back();
        if (cur.is_var()) {
            if (cur.var_id() == id)
                return true;
        } else if (cur.is_compound()) {
            for (const auto &a : cur.args())
                pending.push_back(a);
        }
    }
    return false;
}

//
// Robinson unification against a trailed store. On success `b` holds a most
// general unifier of t and s (relative to its prior content); on failure `b`
// is left exactly as it was. Numbers unify only with numbers of the same
// class and value, so 3 and 3.0 do not unify.
//
// Without the occurs check a cyclic binding can be created; the result of
// unifying such terms is unspecified.
//
inline bool unify(const Term &t, const Term &s, Bindings &b, bool occurs_check = false) {
    auto mark = b.checkpoint();
    std::vector<std::pair<Term, Term>> pending{{t, s}};
    bool ok = true;
    while (ok && !pending.empty()) {
        auto [l, r] = std::move(pending.back());
        pending.pop_back();
        l = deref(l, b);
        r = deref(r, b);
        if (l.same_node(r))
            continue;
        if (l.is_var() && r.is_var()) {
            if (l.var_id() == r.var_id())
                continue;
            // Younger variable points at the older one.
            if (l.var_id() < r.var_id())
                std::swap(l, r);
            b.bind(l.var_id(), r);
            continue;
        }
        if (r.is_var())
            std::swap(l, r);
        if (l.is_var()) {
            if (occurs_check && occurs_in(l.var_id(), r, b)) {
                ok = false;
                break;
            }
            b.bind(l.var_id(), r);
            continue;
        }
        if (l.kind() != r.kind()) {
            ok = false;
            break;
        }
        switch (l.kind()) {
        case Term::Kind::Atom:
            ok = l.name() == r.name();
            break;
        case Term::Kind::Int:
            ok = l.int_value() == r.int_value();
            break;
        case Term::Kind::Float:
            ok = l.float_value() == r.float_value();
            break;
        case Term::Kind::Compound:
            if (l.name() != r.name() || l.arity() != r.arity()) {
                ok = false;
                break;
            }
            for (std::size_t i = l.arity(); i-- > 0;)
                pending.emplace_back(l.arg(i), r.arg(i));
            break;
        case Term::Kind::Var:
            break;
        }
    }
    if (ok)
        b.release(mark);
    else {
        b.undo_to(mark);
        b.release(mark);
    }
    return ok;
}

} // namespace mup
