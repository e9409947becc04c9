#include <gtest/gtest.h>

#include <mup/corpus.hpp>
#include <mup/engine.hpp>

using namespace mup;

namespace {

Term X = Term::var(0, "X");

Term expr(const std::string &text, VarSource &vars) { return parse_term(text, vars); }

std::string rprime_output(const std::string &input) {
    const auto &entry = corpus_entry("rprime");
    Program p = parse_program(entry.source);
    ScriptedIo io({input});
    QueryResult r = run_query(p, "rprime.", {}, io.ports());
    EXPECT_EQ(r.outcome, Outcome::Exhausted) << r.error;
    EXPECT_EQ(r.solutions.size(), 1u);
    return io.output();
}

} // namespace

TEST(EvalArith, NumberEvaluatesToItself) {
    Bindings b;
    EXPECT_EQ(eval_arith(Term::integer(3), b), Term::integer(3));
    EXPECT_EQ(eval_arith(Term::real(2.5), b), Term::real(2.5));
}

TEST(EvalArith, BoundVariable) {
    Bindings b;
    b.bind(0, Term::integer(2));
    EXPECT_EQ(eval_arith(Term::compound("+", {X, Term::integer(1)}), b), Term::integer(3));
}

TEST(EvalArith, UnboundVariableIsAnInstantiationError) {
    Bindings b;
    EXPECT_THROW(eval_arith(Term::compound("+", {X, Term::integer(1)}), b), InstantiationError);
}

TEST(EvalArith, NonNumericLeafIsATypeError) {
    Bindings b;
    VarSource vars;
    EXPECT_THROW(eval_arith(expr("a + 1", vars), b), TypeError);
    EXPECT_THROW(eval_arith(expr("foo(1, 2, 3)", vars), b), TypeError);
}

TEST(EvalArith, IntegerOperators) {
    Bindings b;
    VarSource vars;
    EXPECT_EQ(eval_arith(expr("2 * 3 + 1", vars), b), Term::integer(7));
    EXPECT_EQ(eval_arith(expr("7 - 10", vars), b), Term::integer(-3));
    EXPECT_EQ(eval_arith(expr("7 // 2", vars), b), Term::integer(3));
    EXPECT_EQ(eval_arith(expr("-7 // 2", vars), b), Term::integer(-3));
    EXPECT_EQ(eval_arith(expr("7 mod 3", vars), b), Term::integer(1));
    EXPECT_EQ(eval_arith(expr("-7 mod 3", vars), b), Term::integer(2));
    EXPECT_EQ(eval_arith(expr("7 mod -3", vars), b), Term::integer(-2));
    EXPECT_EQ(eval_arith(expr("- (2 + 3)", vars), b), Term::integer(-5));
}

TEST(EvalArith, FloatOperators) {
    Bindings b;
    VarSource vars;
    EXPECT_EQ(eval_arith(expr("7 / 2", vars), b), Term::real(3.5));
    EXPECT_EQ(eval_arith(expr("1.5 + 1", vars), b), Term::real(2.5));
    EXPECT_EQ(eval_arith(expr("2.0 * 3", vars), b), Term::real(6.0));
    EXPECT_THROW(eval_arith(expr("7.0 mod 2", vars), b), TypeError);
}

TEST(EvalArith, ZeroDivisorAndOverflow) {
    Bindings b;
    VarSource vars;
    EXPECT_THROW(eval_arith(expr("1 // 0", vars), b), EvaluationError);
    EXPECT_THROW(eval_arith(expr("1 mod 0", vars), b), EvaluationError);
    EXPECT_THROW(eval_arith(expr("1 / 0", vars), b), EvaluationError);
    EXPECT_THROW(eval_arith(expr("9223372036854775807 + 1", vars), b), EvaluationError);
    EXPECT_THROW(eval_arith(expr("-9223372036854775808 - 1", vars), b), EvaluationError);
    EXPECT_THROW(eval_arith(expr("4611686018427387904 * 2", vars), b), EvaluationError);
}

TEST(Compare, Examples) {
    Bindings b;
    EXPECT_TRUE(compare_builtin(Comparison::Less, Term::integer(1), Term::integer(2), b));
    EXPECT_FALSE(compare_builtin(Comparison::GreaterEq, Term::integer(3), Term::integer(9), b));
    EXPECT_THROW(compare_builtin(Comparison::Less, X, Term::integer(2), b), InstantiationError);
}

TEST(Compare, EveryOperator) {
    Bindings b;
    auto cmp = [&](const char *op, Term l, Term r) { return compare_builtin(*comparison_for(op), l, r, b); };
    EXPECT_TRUE(cmp(">", Term::integer(3), Term::integer(2)));
    EXPECT_TRUE(cmp("=<", Term::integer(2), Term::integer(2)));
    EXPECT_TRUE(cmp(">=", Term::integer(2), Term::integer(2)));
    EXPECT_TRUE(cmp("=:=", Term::integer(2), Term::real(2.0)));
    EXPECT_TRUE(cmp("=\\=", Term::integer(2), Term::real(2.5)));
    EXPECT_FALSE(comparison_for("=="));
}

TEST(Compare, NeverBinds) {
    Program p;
    SolutionStream s = solve(p, parse_query("X = 1, X < 2, Y = X.").goal);
    auto sol = s.next();
    ASSERT_TRUE(sol);
    EXPECT_EQ(format_solution(*sol), "X = 1, Y = 1.");
    Bindings b;
    b.bind(0, Term::integer(1));
    Bindings before = b;
    compare_builtin(Comparison::Less, X, Term::integer(2), b);
    EXPECT_TRUE(b == before);
}

TEST(Read, ParsesOneTermPerLine) {
    ScriptedIo io({"7."});
    auto ports = io.ports();
    Bindings b;
    VarSource vars{10};
    ASSERT_TRUE(read_builtin(X, ports, b, vars));
    EXPECT_EQ(deref(X, b), Term::integer(7));
}

TEST(Read, EndOfInputIsEndOfFile) {
    ScriptedIo io;
    auto ports = io.ports();
    Bindings b;
    VarSource vars{10};
    ASSERT_TRUE(read_builtin(X, ports, b, vars));
    EXPECT_EQ(deref(X, b), Term::atom("end_of_file"));
}

TEST(Read, FailsWhenTheTermDoesNotUnify) {
    ScriptedIo io({"foo(bar)."});
    auto ports = io.ports();
    Bindings b;
    VarSource vars{10};
    EXPECT_FALSE(read_builtin(Term::atom("baz"), ports, b, vars));
}

TEST(Read, ParseErrorsPropagate) {
    ScriptedIo io({"foo(."});
    auto ports = io.ports();
    Bindings b;
    VarSource vars{10};
    EXPECT_THROW(read_builtin(X, ports, b, vars), SyntaxError);
}

TEST(Write, PrintsAtomsUnquoted) {
    ScriptedIo io;
    auto ports = io.ports();
    Bindings b;
    write_builtin(Term::atom("prime"), ports, b);
    EXPECT_EQ(io.output(), "prime");
}

TEST(Write, PrintsBoundTerms) {
    ScriptedIo io;
    auto ports = io.ports();
    Bindings b;
    b.bind(0, Term::integer(4));
    write_builtin(Term::compound("f", {X, Term::atom("it's")}), ports, b);
    EXPECT_EQ(io.output(), "f(4,'it\\'s')");
}

TEST(Write, OutputIsNotUndoneOnBacktracking) {
    Program p = parse_program("n(1).\nn(2).\n");
    ScriptedIo io;
    Query q = parse_query("write(x), nl, n(X), X > 1.", {}, p.var_ceiling());
    SolutionStream s = solve(p, q, {}, io.ports());
    while (s.next()) {
    }
    EXPECT_EQ(io.output(), "x\n");
}

TEST(Rprime, Seven) {
    EXPECT_EQ(rprime_output("7."), "prime");
}

TEST(Rprime, Nine) {
    EXPECT_EQ(rprime_output("9."), "composite");
}

TEST(Rprime, SmallNumbers) {
    EXPECT_EQ(rprime_output("2."), "prime");
    EXPECT_EQ(rprime_output("4."), "composite");
    EXPECT_EQ(rprime_output("97."), "prime");
    EXPECT_EQ(rprime_output("91."), "composite");
}

TEST(BuiltinTable, DispatchBeatsUserClauses) {
    EXPECT_TRUE(is_builtin("is", 2));
    EXPECT_TRUE(is_builtin("write", 1));
    EXPECT_FALSE(is_builtin("write", 2));
    EXPECT_THROW(parse_program("X < Y :- true."), PermissionError);
    // Same name, other arity: an ordinary user predicate.
    Program p = parse_program("write(a, b).");
    EXPECT_EQ(run_query(p, "write(X, Y).").solutions.size(), 1u);
}
