#include <gtest/gtest.h>

#include <map>
#include <random>

#include <mup/bindings.hpp>
#include <mup/parser.hpp>
#include <mup/printer.hpp>

using namespace mup;

namespace {

Term X = Term::var(0, "X");
Term Y = Term::var(1, "Y");
Term a = Term::atom("a");
Term b = Term::atom("b");

Term f(Term t) { return Term::compound("f", {std::move(t)}); }

} // namespace

TEST(Term, CompoundWithoutArgumentsIsAnAtom) {
    Term t = Term::compound("p", {});
    EXPECT_TRUE(t.is_atom());
    EXPECT_EQ(t, Term::atom("p"));
}

TEST(Term, VariablesAreIdenticalByIdentifier) {
    EXPECT_EQ(Term::var(3, "A"), Term::var(3, "B"));
    EXPECT_NE(Term::var(3, "A"), Term::var(4, "A"));
}

TEST(Term, NumbersCompareByClassAndValue) {
    EXPECT_EQ(Term::integer(1), Term::integer(1));
    EXPECT_NE(Term::integer(1), Term::real(1.0));
}

TEST(Term, ListSugar) {
    Term l = make_list({a, b});
    EXPECT_TRUE(is_cons(l));
    EXPECT_EQ(l.arg(0), a);
    EXPECT_TRUE(is_cons(l.arg(1)));
    EXPECT_TRUE(is_nil(l.arg(1).arg(1)));
}

TEST(Term, CollectVarsInFirstOccurrenceOrder) {
    std::vector<Term> vars;
    collect_vars(Term::compound("p", {Y, f(X), Y}), vars);
    ASSERT_EQ(vars.size(), 2u);
    EXPECT_EQ(vars[0], Y);
    EXPECT_EQ(vars[1], X);
}

TEST(Deref, SingleBinding) {
    Bindings bs;
    bs.bind(X.var_id(), a);
    EXPECT_EQ(deref(X, bs), a);
}

TEST(Deref, ChainOfTwo) {
    Bindings bs;
    bs.bind(X.var_id(), Y);
    bs.bind(Y.var_id(), Term::integer(3));
    EXPECT_EQ(deref(X, bs), Term::integer(3));
}

TEST(Deref, IsShallow) {
    Bindings bs;
    bs.bind(X.var_id(), a);
    EXPECT_EQ(deref(f(X), bs), f(X));
}

TEST(Deref, IsIdempotent) {
    Bindings bs;
    bs.bind(X.var_id(), Y);
    EXPECT_EQ(deref(deref(X, bs), bs), deref(X, bs));
}

TEST(ApplySubstitution, Partial) {
    Bindings bs;
    bs.bind(X.var_id(), a);
    EXPECT_EQ(apply_substitution(Term::compound("f", {X, Y}), bs), Term::compound("f", {a, Y}));
}

TEST(ApplySubstitution, IdentityOnGround) {
    Bindings bs;
    EXPECT_EQ(apply_substitution(a, bs), a);
}

TEST(ApplySubstitution, ComposesBindings) {
    Bindings bs;
    bs.bind(X.var_id(), Term::compound("g", {Y}));
    bs.bind(Y.var_id(), b);
    EXPECT_EQ(apply_substitution(Term::compound("p", {X}), bs),
              Term::compound("p", {Term::compound("g", {b})}));
}

TEST(ApplySubstitution, Idempotent) {
    Bindings bs;
    bs.bind(X.var_id(), f(Y));
    Term once = apply_substitution(Term::compound("p", {X, Y}), bs);
    EXPECT_EQ(apply_substitution(once, bs), once);
}

TEST(Checkpoint, SingleUndo) {
    Bindings bs;
    auto m = bs.checkpoint();
    bs.bind(X.var_id(), a);
    bs.undo_to(m);
    EXPECT_FALSE(bs.is_bound(X.var_id()));
}

TEST(Checkpoint, NestedUndo) {
    Bindings bs;
    auto m1 = bs.checkpoint();
    bs.bind(X.var_id(), a);
    auto m2 = bs.checkpoint();
    bs.bind(Y.var_id(), b);
    bs.undo_to(m2);
    EXPECT_EQ(deref(X, bs), a);
    EXPECT_FALSE(bs.is_bound(Y.var_id()));
    EXPECT_TRUE(bs.is_live(m1));
    EXPECT_TRUE(bs.is_live(m2));
}

TEST(Checkpoint, UndoingAnOuterMarkInvalidatesInnerMarks) {
    Bindings bs;
    auto m1 = bs.checkpoint();
    bs.bind(X.var_id(), a);
    auto m2 = bs.checkpoint();
    bs.undo_to(m1);
    EXPECT_FALSE(bs.is_live(m2));
    EXPECT_THROW(bs.undo_to(m2), InternalError);
}

TEST(Checkpoint, ForeignMarkIsAnInternalError) {
    Bindings one, two;
    auto m = one.checkpoint();
    EXPECT_THROW(two.undo_to(m), InternalError);
}

TEST(Checkpoint, RebindingIsAnInternalError) {
    Bindings bs;
    bs.bind(X.var_id(), a);
    EXPECT_THROW(bs.bind(X.var_id(), b), InternalError);
}

// Random interleavings of checkpoint/bind/undo must leave exactly the binds
// that were never undone, compared against a freshly built store.
TEST(Checkpoint, ThousandBindUndoCyclesRestoreTheMap) {
    std::mt19937_64 rng(7);
    Bindings bs;
    bs.bind(100, a); // pre-existing binding that must survive
    std::map<VarId, Term> initial = bs.snapshot();
    for (int cycle = 0; cycle < 1000; ++cycle) {
        auto outer = bs.checkpoint();
        std::vector<Bindings::Mark> marks{outer};
        std::vector<std::map<VarId, Term>> expected{bs.snapshot()};
        int ops = std::uniform_int_distribution<int>(1, 12)(rng);
        VarId next = 0;
        for (int i = 0; i < ops; ++i) {
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0:
                marks.push_back(bs.checkpoint());
                expected.push_back(bs.snapshot());
                break;
            case 1:
                bs.bind(next++, Term::integer(cycle));
                break;
            default: {
                auto k = std::uniform_int_distribution<std::size_t>(0, marks.size() - 1)(rng);
                bs.undo_to(marks[k]);
                ASSERT_EQ(bs.snapshot(), expected[k]);
                marks.resize(k + 1);
                expected.resize(k + 1);
                // Variables bound after the mark are free again.
                next = 0;
                while (bs.is_bound(next))
                    ++next;
            }
            }
        }
        bs.undo_to(outer);
        bs.release(outer);
        ASSERT_EQ(bs.snapshot(), initial);
        ASSERT_EQ(bs.live_marks(), 0u);
    }
    Bindings fresh;
    fresh.bind(100, initial.at(100));
    EXPECT_EQ(bs.snapshot(), fresh.snapshot());
}

TEST(FreshRename, StructuralCopyWithFreshVariables) {
    Program p = parse_program("p(X) :- q(X).");
    VarSource vars{p.var_ceiling()};
    Clause c = fresh_rename(p.clauses()[0], vars);
    Term v = c.head.arg(0);
    ASSERT_TRUE(v.is_var());
    EXPECT_NE(v, p.clauses()[0].head.arg(0));
    EXPECT_GE(v.var_id(), p.var_ceiling());
    ASSERT_EQ(c.body->kind, Goal::Kind::Call);
    EXPECT_EQ(c.body->term.arg(0), v);
}

TEST(FreshRename, SuccessiveRenamingsShareNoVariables) {
    Program p = parse_program("p(X, Y) :- q(X, Z), r(Z, Y).");
    VarSource vars{p.var_ceiling()};
    std::vector<Term> one, two;
    Clause c1 = fresh_rename(p.clauses()[0], vars);
    Clause c2 = fresh_rename(p.clauses()[0], vars);
    collect_vars(c1.head, one);
    collect_vars(*c1.body, one);
    collect_vars(c2.head, two);
    collect_vars(*c2.body, two);
    for (const auto &v : one)
        for (const auto &w : two)
            EXPECT_NE(v, w);
}

TEST(FreshRename, GroundClauseIsUnchanged) {
    Program p = parse_program("p(a) :- q(b).");
    VarSource vars;
    Clause c = fresh_rename(p.clauses()[0], vars);
    EXPECT_EQ(to_string(c), to_string(p.clauses()[0]));
}

TEST(Solution, ResolvesEveryAnswerVariable) {
    Bindings bs;
    bs.bind(X.var_id(), f(Y));
    bs.bind(Y.var_id(), b);
    Solution s = make_solution({X}, bs);
    ASSERT_NE(s.find("X"), nullptr);
    EXPECT_EQ(*s.find("X"), f(b));
}
