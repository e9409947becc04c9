#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mup {

using VarId = std::uint64_t;

//
// Immutable first-order term. Terms are cheap handles onto shared nodes, so
// copying a Term never copies structure. Variables are identified by their
// integer id alone; the name is kept for display.
//
class Term {
public:
    enum class Kind { Var, Atom, Int, Float, Compound };

    Term() = default;

    static Term var(VarId id, std::string name = "_") {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Var;
        n->id = id;
        n->name = std::move(name);
        return Term(std::move(n));
    }

    static Term atom(std::string name) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Atom;
        n->name = std::move(name);
        return Term(std::move(n));
    }

    static Term integer(std::int64_t v) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Int;
        n->int_value = v;
        return Term(std::move(n));
    }

    static Term real(double v) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Float;
        n->float_value = v;
        return Term(std::move(n));
    }

    // Zero-arity symbols are atoms, never compounds.
    static Term compound(std::string functor, std::vector<Term> args) {
        if (args.empty())
            return atom(std::move(functor));
        auto n = std::make_shared<Node>();
        n->kind = Kind::Compound;
        n->name = std::move(functor);
        n->args = std::move(args);
        return Term(std::move(n));
    }

    bool is_null() const { return node_ == nullptr; }
    explicit operator bool() const { return node_ != nullptr; }

    Kind kind() const { return node_->kind; }
    bool is_var() const { return node_->kind == Kind::Var; }
    bool is_atom() const { return node_->kind == Kind::Atom; }
    bool is_int() const { return node_->kind == Kind::Int; }
    bool is_float() const { return node_->kind == Kind::Float; }
    bool is_number() const { return is_int() || is_float(); }
    bool is_compound() const { return node_->kind == Kind::Compound; }
    bool is_callable() const { return is_atom() || is_compound(); }

    VarId var_id() const { return node_->id; }
    // Variable display name, atom name or functor.
    const std::string &name() const { return node_->name; }
    std::int64_t int_value() const { return node_->int_value; }
    double float_value() const { return node_->float_value; }
    const std::vector<Term> &args() const { return node_->args; }
    std::size_t arity() const { return node_->args.size(); }
    const Term &arg(std::size_t i) const { return node_->args[i]; }

    bool same_node(const Term &other) const { return node_ == other.node_; }

private:
    struct Node {
        Kind kind = Kind::Atom;
        VarId id = 0;
        std::int64_t int_value = 0;
        double float_value = 0.0;
        std::string name;
        std::vector<Term> args;

        // Tear down uniquely owned subterms with an explicit stack; deep
        // terms would otherwise overflow through nested destructors.
        ~Node() {
            std::vector<std::shared_ptr<const Node>> pending;
            auto steal = [&](std::vector<Term> &kids) {
                for (auto &k : kids)
                    if (k.node_ && k.node_.use_count() == 1)
                        pending.push_back(std::move(k.node_));
            };
            steal(args);
            while (!pending.empty()) {
                auto n = std::move(pending.back());
                pending.pop_back();
                steal(const_cast<Node &>(*n).args);
            }
        }
    };

    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

// Structural identity. Variables compare by id, numbers by class and value.
inline bool operator==(const Term &a, const Term &b) {
    if (a.same_node(b))
        return true;
    if (a.is_null() || b.is_null())
        return false;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Term::Kind::Var:
        return a.var_id() == b.var_id();
    case Term::Kind::Atom:
        return a.name() == b.name();
    case Term::Kind::Int:
        return a.int_value() == b.int_value();
    case Term::Kind::Float:
        return a.float_value() == b.float_value();
    case Term::Kind::Compound:
        if (a.name() != b.name() || a.arity() != b.arity())
            return false;
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (!(a.arg(i) == b.arg(i)))
                return false;
        return true;
    }
    return false;
}

inline bool operator!=(const Term &a, const Term &b) { return !(a == b); }

// Per-run source of fresh variable identifiers.
struct VarSource {
    VarId next = 0;

    Term fresh(std::string name = "_") { return Term::var(next++, std::move(name)); }
};

inline const char *const kNil = "[]";
inline const char *const kCons = ".";

inline Term nil() { return Term::atom(kNil); }
inline Term cons(Term head, Term tail) { return Term::compound(kCons, {std::move(head), std::move(tail)}); }

inline Term make_list(const std::vector<Term> &items, Term tail = nil()) {
    Term out = std::move(tail);
    for (auto it = items.rbegin(); it != items.rend(); ++it)
        out = cons(*it, out);
    return out;
}

inline bool is_nil(const Term &t) { return t.is_atom() && t.name() == kNil; }
inline bool is_cons(const Term &t) { return t.is_compound() && t.arity() == 2 && t.name() == kCons; }

// Visits variable occurrences depth-first, left to right.
template <typename F>
void for_each_var(const Term &t, F &&f) {
    std::vector<const Term *> pending{&t};
    while (!pending.empty()) {
        const Term *cur = pending.back();
        pending.pop_back();
        if (cur->is_var())
            f(*cur);
        else if (cur->is_compound())
            for (auto it = cur->args().rbegin(); it != cur->args().rend(); ++it)
                pending.push_back(&*it);
    }
}

// Distinct variables in depth-first left-to-right first-occurrence order.
inline void collect_vars(const Term &t, std::vector<Term> &out) {
    for_each_var(t, [&](const Term &v) {
        for (const auto &seen : out)
            if (seen.var_id() == v.var_id())
                return;
        out.push_back(v);
    });
}

// One past the largest variable id in t, or 0 when t is ground.
inline VarId var_ceiling(const Term &t) {
    VarId c = 0;
    for_each_var(t, [&](const Term &v) { c = std::max(c, v.var_id() + 1); });
    return c;
}

inline bool is_ground(const Term &t) {
    bool ground = true;
    for_each_var(t, [&](const Term &) { ground = false; });
    return ground;
}

// "name/arity" for messages.
inline std::string indicator(const Term &callable) {
    return callable.name() + "/" + std::to_string(callable.is_compound() ? callable.arity() : 0);
}

} // namespace mup
