#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "goal.hpp"
#include "term.hpp"

namespace mup {

//
// Substitution store with a trail. Every bind is recorded on the trail so
// that undo_to() can restore the exact map that existed at a checkpoint.
// Checkpoints nest: undoing or releasing one also drops every checkpoint
// taken after it.
//
class Bindings {
public:
    struct Mark {
        std::uint64_t owner = 0;
        std::uint64_t serial = 0;
        std::size_t trail_position = 0;
    };

    Bindings() : owner_(next_owner()) {}

    const Term *lookup(VarId id) const {
        if (id >= slots_.size() || slots_[id].is_null())
            return nullptr;
        return &slots_[id];
    }

    bool is_bound(VarId id) const { return lookup(id) != nullptr; }

    void bind(VarId id, Term value) {
        if (is_bound(id))
            throw InternalError("rebinding bound variable _G" + std::to_string(id));
        if (id >= slots_.size())
            slots_.resize(std::max<std::size_t>(id + 1, slots_.size() * 2));
        slots_[id] = std::move(value);
        trail_.push_back(id);
    }

    Mark checkpoint() {
        Mark m{owner_, next_serial_++, trail_.size()};
        marks_.push_back({m.serial, m.trail_position});
        return m;
    }

    // Unbinds everything bound since `m`. The mark itself stays live.
    void undo_to(const Mark &m) {
        std::size_t idx = find_mark(m);
        unwind(m.trail_position);
        marks_.resize(idx + 1);
    }

    // Forgets `m` and later marks without touching any binding.
    void release(const Mark &m) {
        std::size_t idx = find_mark(m);
        marks_.resize(idx);
    }

    bool is_live(const Mark &m) const {
        if (m.owner != owner_)
            return false;
        auto it = std::lower_bound(marks_.begin(), marks_.end(), m.serial,
                                   [](const auto &entry, std::uint64_t s) { return entry.first < s; });
        return it != marks_.end() && it->first == m.serial && it->second == m.trail_position;
    }

    std::size_t size() const { return trail_.size(); }
    std::size_t live_marks() const { return marks_.size(); }
    const std::vector<VarId> &trail() const { return trail_; }

    std::map<VarId, Term> snapshot() const {
        std::map<VarId, Term> out;
        for (VarId id : trail_)
            out.emplace(id, slots_[id]);
        return out;
    }

    // Same bound variables, same values (by node identity), same trail order.
    friend bool operator==(const Bindings &a, const Bindings &b) {
        if (a.trail_ != b.trail_)
            return false;
        for (VarId id : a.trail_)
            if (!a.slots_[id].same_node(b.slots_[id]))
                return false;
        return true;
    }

private:
    static std::uint64_t next_owner() {
        static std::atomic<std::uint64_t> counter{1};
        return counter.fetch_add(1);
    }

    std::size_t find_mark(const Mark &m) const {
        if (m.owner != owner_)
            throw InternalError("checkpoint belongs to a different bindings store");
        auto it = std::lower_bound(marks_.begin(), marks_.end(), m.serial,
                                   [](const auto &entry, std::uint64_t s) { return entry.first < s; });
        if (it == marks_.end() || it->first != m.serial || it->second != m.trail_position)
            throw InternalError("stale checkpoint");
        return static_cast<std::size_t>(it - marks_.begin());
    }

    void unwind(std::size_t position) {
        while (trail_.size() > position) {
            slots_[trail_.back()] = Term();
            trail_.pop_back();
        }
    }

    std::uint64_t owner_;
    std::uint64_t next_serial_ = 0;
    std::vector<Term> slots_;
    std::vector<VarId> trail_;
    std::vector<std::pair<std::uint64_t, std::size_t>> marks_;
};

// Follows the variable chain at the root only.
inline Term deref(Term t, const Bindings &b) {
    while (t.is_var()) {
        const Term *next = b.lookup(t.var_id());
        if (!next)
            break;
        t = *next;
    }
    return t;
}

// Replaces every bound variable, at any depth, by its value.
// Iterative, so arbitrarily deep terms (long lists) are safe.
inline Term apply_substitution(const Term &t, const Bindings &b) {
    struct Frame {
        Term node;
        std::size_t next = 0;
        std::vector<Term> args;
        bool changed = false;
    };
    Term d = deref(t, b);
    if (!d.is_compound())
        return d;
    std::vector<Frame> stack;
    stack.push_back({d, 0, {}, false});
    stack.back().args.reserve(d.arity());
    Term result;
    for (;;) {
        Frame &f = stack.back();
        if (f.next < f.node.arity()) {
            const Term &a = f.node.arg(f.next);
            Term da = deref(a, b);
            if (da.is_compound()) {
                Frame child{da, 0, {}, false};
                child.args.reserve(da.arity());
                stack.push_back(std::move(child));
                continue;
            }
            f.changed = f.changed || !da.same_node(a);
            f.args.push_back(std::move(da));
            ++f.next;
            continue;
        }
        Term done = f.changed ? Term::compound(f.node.name(), std::move(f.args)) : f.node;
        stack.pop_back();
        if (stack.empty())
            return done;
        Frame &parent = stack.back();
        parent.changed = parent.changed || !done.same_node(parent.node.arg(parent.next));
        parent.args.push_back(std::move(done));
        ++parent.next;
    }
}

inline GoalPtr apply_substitution(const GoalPtr &g, const Bindings &b) {
    return map_terms(g, [&](const Term &t) { return apply_substitution(t, b); });
}

// Variable-to-variable renaming used for clause and quantifier instantiation.
class Renaming {
public:
    explicit Renaming(VarSource &source) : source_(source) {}

    Term operator()(const Term &t) {
        switch (t.kind()) {
        case Term::Kind::Var: {
            for (const auto &[from, to] : map_)
                if (from == t.var_id())
                    return to;
            Term fresh = source_.fresh(t.name());
            map_.emplace_back(t.var_id(), fresh);
            return fresh;
        }
        case Term::Kind::Compound: {
            std::vector<Term> args;
            args.reserve(t.arity());
            for (const auto &a : t.args())
                args.push_back((*this)(a));
            return Term::compound(t.name(), std::move(args));
        }
        default:
            return t;
        }
    }

    // Fixes the image of one variable ahead of time.
    void assign(VarId from, Term to) { map_.emplace_back(from, std::move(to)); }

private:
    VarSource &source_;
    std::vector<std::pair<VarId, Term>> map_;
};

// Copies a clause with every variable replaced by a never-used variable.
inline Clause fresh_rename(const Clause &c, VarSource &source) {
    Renaming rename(source);
    Clause out;
    out.head = rename(c.head);
    out.body = map_terms(c.body, [&](const Term &t) { return rename(t); });
    out.span = c.span;
    return out;
}

// Answer for one query success: query variable name to its resolved value,
// in order of first occurrence in the query.
struct Solution {
    std::vector<std::pair<std::string, Term>> assignments;

    const Term *find(const std::string &name) const {
        for (const auto &[n, t] : assignments)
            if (n == name)
                return &t;
        return nullptr;
    }

    bool empty() const { return assignments.empty(); }
};

inline Solution make_solution(const std::vector<Term> &answer_vars, const Bindings &b) {
    Solution s;
    for (const auto &v : answer_vars)
        s.assignments.emplace_back(v.name(), apply_substitution(v, b));
    return s;
}

} // namespace mup
