#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bindings.hpp"
#include "builtins.hpp"
#include "error.hpp"
#include "goal.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "term.hpp"
#include "unify.hpp"

namespace mup {

enum class CommitMode {
    Soft, // commit to the succeeding disjunct, keep all of its solutions
    First // commit to the first solution of the succeeding disjunct
};

enum class UnknownPredicate { Error, Fail };

struct SolveConfig {
    CommitMode commit_mode = CommitMode::Soft;
    bool occurs_check = false;
    // Maximum number of nested backchaining steps on one derivation path.
    std::optional<std::size_t> depth_limit;
    std::optional<std::size_t> max_solutions;
    UnknownPredicate unknown_predicate = UnknownPredicate::Error;

    void validate() const {
        if (depth_limit && *depth_limit == 0)
            throw Error("depth limit must be at least 1");
        if (max_solutions && *max_solutions == 0)
            throw Error("max solutions must be at least 1");
    }
};

enum class TraceKind { Reduce, BackchainEnter, BackchainExit, ChoiceTaken, ChoiceDiscarded, UnifyOk, UnifyFail };

inline const char *to_string(TraceKind k) {
    switch (k) {
    case TraceKind::Reduce: return "reduce";
    case TraceKind::BackchainEnter: return "backchain_enter";
    case TraceKind::BackchainExit: return "backchain_exit";
    case TraceKind::ChoiceTaken: return "choice_taken";
    case TraceKind::ChoiceDiscarded: return "choice_discarded";
    case TraceKind::UnifyOk: return "unify_ok";
    case TraceKind::UnifyFail: return "unify_fail";
    }
    return "?";
}

struct TraceEvent {
    TraceKind kind;
    std::size_t depth;
    std::string payload;

    // `DEPTH KIND PAYLOAD`
    std::string to_line() const { return std::to_string(depth) + " " + to_string(kind) + " " + payload; }
};

using TraceSink = std::function<void(const TraceEvent &)>;

enum class Outcome { Exhausted, Limited, Errored };

inline const char *to_string(Outcome o) {
    switch (o) {
    case Outcome::Exhausted: return "exhausted";
    case Outcome::Limited: return "limited";
    case Outcome::Errored: return "errored";
    }
    return "?";
}

namespace detail {

struct Instr {
    enum class Op { Solve, Commit, Exit };

    Op op = Op::Solve;
    GoalPtr goal;
    std::size_t depth = 0;
    std::size_t cut_barrier = 0;
    std::size_t cp_index = 0;
    std::uint64_t cp_serial = 0;
    bool first_only = false;
    Term atom;
};

// Continuation: a persistent stack of pending instructions shared between
// choicepoints.
struct ContCell {
    Instr instr;
    mutable std::shared_ptr<const ContCell> next;

    ContCell(Instr i, std::shared_ptr<const ContCell> n) : instr(std::move(i)), next(std::move(n)) {}

    // Unlinks uniquely owned tails iteratively so long chains do not recurse.
    ~ContCell() {
        auto n = std::move(next);
        while (n && n.use_count() == 1) {
            auto after = std::move(n->next);
            n = std::move(after);
        }
    }
};

using Cont = std::shared_ptr<const ContCell>;

inline Cont push(Instr i, Cont next) { return std::make_shared<const ContCell>(std::move(i), std::move(next)); }

struct ChoicePoint {
    enum class Kind {
        Clauses,     // remaining clauses for a call
        Alternative, // right branch of an inclusive disjunction
        Else         // right branch of a choice or soft if-then-else
    };

    Kind kind = Kind::Clauses;
    std::uint64_t serial = 0;
    Bindings::Mark mark;
    Cont cont;

    Term atom;
    const std::vector<std::size_t> *candidates = nullptr;
    std::size_t next = 0;
    std::size_t depth = 0;

    GoalPtr goal;
    GoalPtr left; // discarded disjunct, for tracing
    std::size_t cut_barrier = 0;
    bool disabled = false;
    bool from_choice = false;
    std::uint64_t limit_hits_at_entry = 0;
};

inline Term substitute_var(const Term &t, VarId id, const Term &replacement) {
    if (t.is_var())
        return t.var_id() == id ? replacement : t;
    if (!t.is_compound())
        return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto &a : t.args())
        args.push_back(substitute_var(a, id, replacement));
    return Term::compound(t.name(), std::move(args));
}

inline std::vector<Term> answer_vars_of(const Goal &g) {
    std::vector<Term> all, out;
    collect_vars(g, all);
    for (const auto &v : all)
        if (!v.name().empty() && v.name()[0] != '_')
            out.push_back(v);
    return out;
}

} // namespace detail

//
// Lazy, pull-based solution sequence for one query. Goal reduction and
// backchaining run on an explicit continuation and choicepoint stack, so no
// host recursion grows with derivation depth. No work happens between calls
// to next().
//
// The Program must outlive the stream.
//
class SolutionStream {
public:
    SolutionStream(const Program &program, GoalPtr goal, std::vector<Term> answer_vars, SolveConfig cfg = {},
                   IoPorts io = IoPorts::standard(), TraceSink trace = {})
        : program_(&program), goal_(std::move(goal)), answer_vars_(std::move(answer_vars)), cfg_(cfg),
          io_(std::move(io)), trace_(std::move(trace)) {
        cfg_.validate();
        vars_.next = std::max(program.var_ceiling(), var_ceiling(*goal_));
        for (const auto &v : answer_vars_)
            vars_.next = std::max(vars_.next, v.var_id() + 1);
    }

    std::optional<Solution> next() {
        if (done_)
            return std::nullopt;
        if (cfg_.max_solutions && produced_ >= *cfg_.max_solutions) {
            truncated_ = true;
            done_ = true;
            return std::nullopt;
        }
        try {
            bool ok = true;
            if (!started_) {
                started_ = true;
                detail::Instr root;
                root.goal = goal_;
                current_ = detail::push(std::move(root), nullptr);
            } else {
                ok = backtrack();
            }
            while (ok) {
                if (!current_) {
                    ++produced_;
                    return make_solution(answer_vars_, bindings_);
                }
                detail::Instr in = current_->instr;
                current_ = current_->next;
                ok = step(in);
                if (!ok)
                    ok = backtrack();
            }
        } catch (...) {
            done_ = true;
            errored_ = true;
            throw;
        }
        done_ = true;
        return std::nullopt;
    }

    bool done() const { return done_; }

    // Meaningful once done(): Limited when the depth bound cut off part of the
    // search or max_solutions truncated it.
    Outcome outcome() const {
        if (errored_)
            return Outcome::Errored;
        if (limit_hits_ > 0 || truncated_)
            return Outcome::Limited;
        return Outcome::Exhausted;
    }

    bool depth_limit_hit() const { return limit_hits_ > 0; }
    std::size_t produced() const { return produced_; }
    const std::vector<Term> &answer_vars() const { return answer_vars_; }

private:
    using Instr = detail::Instr;
    using ChoicePoint = detail::ChoicePoint;
    using Cont = detail::Cont;

    bool tracing() const { return static_cast<bool>(trace_); }

    void emit(TraceKind k, std::size_t depth, std::string payload) {
        if (trace_)
            trace_(TraceEvent{k, depth, std::move(payload)});
    }

    std::string show(const Goal &g) const {
        Printer p({Grammar::Standard, VarStyle::Ids, false});
        return p.goal(*apply_substitution(std::make_shared<const Goal>(g), bindings_));
    }

    std::string show(const Term &t) const {
        Printer p({Grammar::Standard, VarStyle::Ids, false});
        return p.term(apply_substitution(t, bindings_));
    }

    Instr solve_instr(GoalPtr g, std::size_t depth, std::size_t barrier) const {
        Instr i;
        i.op = Instr::Op::Solve;
        i.goal = std::move(g);
        i.depth = depth;
        i.cut_barrier = barrier;
        return i;
    }

    ChoicePoint &push_choicepoint(ChoicePoint::Kind kind) {
        ChoicePoint cp;
        cp.kind = kind;
        cp.serial = next_serial_++;
        cp.mark = bindings_.checkpoint();
        choicepoints_.push_back(std::move(cp));
        return choicepoints_.back();
    }

    void pop_choicepoint() {
        bindings_.release(choicepoints_.back().mark);
        choicepoints_.pop_back();
    }

    // Drops every choicepoint at position >= n.
    void cut_to(std::size_t n) {
        if (choicepoints_.size() > n) {
            bindings_.release(choicepoints_[n].mark);
            choicepoints_.resize(n);
        }
    }

    bool step(const Instr &in) {
        switch (in.op) {
        case Instr::Op::Exit:
            emit(TraceKind::BackchainExit, in.depth, show(in.atom));
            return true;
        case Instr::Op::Commit:
            return commit(in);
        case Instr::Op::Solve:
            break;
        }
        const Goal &g = *in.goal;
        switch (g.kind) {
        case Goal::Kind::True:
            return true;
        case Goal::Kind::Call:
            return call(g.term, in.depth);
        case Goal::Kind::Eq:
            return unify_traced(g.term, g.rhs, in.depth);
        case Goal::Kind::Conj:
            if (tracing())
                emit(TraceKind::Reduce, in.depth, show(g));
            current_ = detail::push(solve_instr(g.first, in.depth, in.cut_barrier),
                                    detail::push(solve_instr(g.second, in.depth, in.cut_barrier), current_));
            return true;
        case Goal::Kind::Exists: {
            if (tracing())
                emit(TraceKind::Reduce, in.depth, show(g));
            Term fresh = vars_.fresh(g.term.name());
            VarId bound = g.term.var_id();
            GoalPtr body = map_terms(g.first, [&](const Term &t) { return detail::substitute_var(t, bound, fresh); });
            current_ = detail::push(solve_instr(body, in.depth, in.cut_barrier), current_);
            return true;
        }
        case Goal::Kind::Choice:
        case Goal::Kind::SoftIfThenElse: {
            if (tracing())
                emit(TraceKind::Reduce, in.depth, show(g));
            bool is_choice = g.kind == Goal::Kind::Choice;
            GoalPtr otherwise = is_choice ? g.second : g.third;
            std::size_t idx = choicepoints_.size();
            ChoicePoint &cp = push_choicepoint(ChoicePoint::Kind::Else);
            cp.goal = otherwise;
            cp.left = g.first;
            cp.depth = in.depth;
            cp.cut_barrier = in.cut_barrier;
            cp.cont = current_;
            cp.from_choice = is_choice;
            cp.limit_hits_at_entry = limit_hits_;
            Instr commit;
            commit.op = Instr::Op::Commit;
            commit.cp_index = idx;
            commit.cp_serial = cp.serial;
            commit.depth = in.depth;
            commit.first_only = is_choice && cfg_.commit_mode == CommitMode::First;
            Cont rest = current_;
            if (!is_choice)
                rest = detail::push(solve_instr(g.second, in.depth, in.cut_barrier), rest);
            // A cut inside an if-then-else condition is local to the condition.
            std::size_t cond_barrier = is_choice ? in.cut_barrier : idx + 1;
            current_ = detail::push(solve_instr(g.first, in.depth, cond_barrier),
                                    detail::push(std::move(commit), std::move(rest)));
            return true;
        }
        case Goal::Kind::ClassicalOr: {
            if (tracing())
                emit(TraceKind::Reduce, in.depth, show(g));
            ChoicePoint &cp = push_choicepoint(ChoicePoint::Kind::Alternative);
            cp.goal = g.second;
            cp.depth = in.depth;
            cp.cut_barrier = in.cut_barrier;
            cp.cont = current_;
            current_ = detail::push(solve_instr(g.first, in.depth, in.cut_barrier), current_);
            return true;
        }
        case Goal::Kind::Cut:
            cut_to(in.cut_barrier);
            return true;
        }
        throw InternalError("unknown goal kind");
    }

    bool commit(const Instr &in) {
        if (in.cp_index >= choicepoints_.size() || choicepoints_[in.cp_index].serial != in.cp_serial)
            throw InternalError("commit target choicepoint is gone");
        ChoicePoint &cp = choicepoints_[in.cp_index];
        if (!cp.disabled) {
            cp.disabled = true;
            if (cp.from_choice && tracing()) {
                emit(TraceKind::ChoiceTaken, in.depth, "left " + show(*cp.left));
                emit(TraceKind::ChoiceDiscarded, in.depth, "right " + show(*cp.goal));
            }
        }
        if (in.first_only)
            cut_to(in.cp_index);
        return true;
    }

    bool unify_traced(const Term &a, const Term &b, std::size_t depth) {
        if (!tracing())
            return unify(a, b, bindings_, cfg_.occurs_check);
        std::string payload = show(a) + " = " + show(b);
        bool ok = unify(a, b, bindings_, cfg_.occurs_check);
        emit(ok ? TraceKind::UnifyOk : TraceKind::UnifyFail, depth, std::move(payload));
        return ok;
    }

    bool call(const Term &goal, std::size_t depth) {
        Term t = deref(goal, bindings_);
        if (t.is_var())
            throw InstantiationError("call of an unbound goal");
        if (!t.is_callable())
            throw TypeError("callable", show(t));
        auto key = predicate_key(t);
        if (is_builtin(key.first, key.second))
            return call_builtin(t, depth);

        const auto *candidates = program_->lookup(key);
        if (!candidates) {
            if (cfg_.unknown_predicate == UnknownPredicate::Error)
                throw ExistenceError(key.first + "/" + std::to_string(key.second));
            return false;
        }
        std::size_t inner = depth + 1;
        if (cfg_.depth_limit && inner > *cfg_.depth_limit) {
            ++limit_hits_;
            return false;
        }
        if (tracing())
            emit(TraceKind::BackchainEnter, inner, show(t));
        ChoicePoint &cp = push_choicepoint(ChoicePoint::Kind::Clauses);
        cp.atom = t;
        cp.candidates = candidates;
        cp.depth = inner;
        cp.cont = current_;
        return resume_clauses();
    }

    // Tries the remaining clauses of the topmost Clauses choicepoint.
    bool resume_clauses() {
        std::size_t idx = choicepoints_.size() - 1;
        ChoicePoint &cp = choicepoints_[idx];
        const auto &cands = *cp.candidates;
        for (std::size_t i = cp.next; i < cands.size(); ++i) {
            Clause c = fresh_rename(program_->clauses()[cands[i]], vars_);
            std::string payload = tracing() ? show(cp.atom) + " = " + show(c.head) : std::string();
            if (!unify(c.head, cp.atom, bindings_, cfg_.occurs_check)) {
                if (tracing())
                    emit(TraceKind::UnifyFail, cp.depth, std::move(payload));
                continue;
            }
            if (tracing())
                emit(TraceKind::UnifyOk, cp.depth, std::move(payload));
            Cont cont = cp.cont;
            Term atom = cp.atom;
            std::size_t depth = cp.depth;
            if (i + 1 < cands.size())
                cp.next = i + 1;
            else
                pop_choicepoint();
            if (tracing()) {
                Instr exit;
                exit.op = Instr::Op::Exit;
                exit.atom = atom;
                exit.depth = depth;
                cont = detail::push(std::move(exit), std::move(cont));
            }
            current_ = detail::push(solve_instr(c.body, depth, idx), std::move(cont));
            return true;
        }
        pop_choicepoint();
        return false;
    }

    bool backtrack() {
        while (!choicepoints_.empty()) {
            ChoicePoint &cp = choicepoints_.back();
            bindings_.undo_to(cp.mark);
            switch (cp.kind) {
            case ChoicePoint::Kind::Clauses:
                if (resume_clauses())
                    return true;
                continue;
            case ChoicePoint::Kind::Alternative: {
                Instr i = solve_instr(cp.goal, cp.depth, cp.cut_barrier);
                Cont cont = cp.cont;
                pop_choicepoint();
                current_ = detail::push(std::move(i), std::move(cont));
                return true;
            }
            case ChoicePoint::Kind::Else: {
                ChoicePoint saved = cp;
                pop_choicepoint();
                if (saved.disabled)
                    continue;
                // The first branch was cut off by the depth bound rather than
                // failing finitely: do not fall through to the second.
                if (limit_hits_ > saved.limit_hits_at_entry)
                    continue;
                if (saved.from_choice && tracing()) {
                    emit(TraceKind::ChoiceTaken, saved.depth, "right " + show(*saved.goal));
                    emit(TraceKind::ChoiceDiscarded, saved.depth, "left " + show(*saved.left));
                }
                current_ = detail::push(solve_instr(saved.goal, saved.depth, saved.cut_barrier), saved.cont);
                return true;
            }
            }
        }
        return false;
    }

    bool call_builtin(const Term &t, std::size_t depth) {
        const std::string &name = t.name();
        if (t.is_atom()) {
            if (name == "true")
                return true;
            if (name == "fail" || name == "false")
                return false;
            if (name == "nl") {
                io_.write("\n");
                return true;
            }
        } else if (t.arity() == 2) {
            if (name == "=")
                return unify_traced(t.arg(0), t.arg(1), depth);
            if (name == "is") {
                Term v = eval_arith(t.arg(1), bindings_);
                return unify(t.arg(0), v, bindings_, cfg_.occurs_check);
            }
            if (auto cmp = comparison_for(name))
                return compare_builtin(*cmp, t.arg(0), t.arg(1), bindings_);
        } else if (t.arity() == 1) {
            if (name == "read")
                return read_builtin(t.arg(0), io_, bindings_, vars_, cfg_.occurs_check);
            if (name == "write") {
                write_builtin(t.arg(0), io_, bindings_);
                return true;
            }
        }
        throw InternalError("builtin " + indicator(t) + " has no implementation");
    }

    const Program *program_;
    GoalPtr goal_;
    std::vector<Term> answer_vars_;
    SolveConfig cfg_;
    IoPorts io_;
    TraceSink trace_;

    Bindings bindings_;
    VarSource vars_;
    std::vector<ChoicePoint> choicepoints_;
    Cont current_;
    std::uint64_t next_serial_ = 0;
    std::uint64_t limit_hits_ = 0;
    std::size_t produced_ = 0;
    bool started_ = false;
    bool done_ = false;
    bool truncated_ = false;
    bool errored_ = false;
};

inline SolutionStream solve(const Program &p, const Query &q, SolveConfig cfg = {}, IoPorts io = IoPorts::standard(),
                            TraceSink trace = {}) {
    return SolutionStream(p, q.goal, q.answer_vars, cfg, std::move(io), std::move(trace));
}

// Answer variables are the goal's variables whose names do not start with '_'.
inline SolutionStream solve(const Program &p, const GoalPtr &g, SolveConfig cfg = {},
                            IoPorts io = IoPorts::standard(), TraceSink trace = {}) {
    return SolutionStream(p, g, detail::answer_vars_of(*g), cfg, std::move(io), std::move(trace));
}

struct QueryResult {
    std::vector<Solution> solutions;
    Outcome outcome = Outcome::Exhausted;
    std::string error; // set when outcome is Errored
};

// Parses and runs a query, collecting solutions up to cfg.max_solutions.
inline QueryResult run_query(const Program &p, std::string_view text, SolveConfig cfg = {},
                             IoPorts io = IoPorts::standard(), TraceSink trace = {}) {
    QueryResult r;
    try {
        Query q = parse_query(text, {}, p.var_ceiling());
        SolutionStream s = solve(p, q, cfg, std::move(io), std::move(trace));
        while (auto sol = s.next())
            r.solutions.push_back(std::move(*sol));
        r.outcome = s.outcome();
    } catch (const Error &e) {
        r.outcome = Outcome::Errored;
        r.error = e.what();
    }
    return r;
}

} // namespace mup
