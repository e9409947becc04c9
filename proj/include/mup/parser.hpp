#pragma once

#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "goal.hpp"
#include "lexer.hpp"
#include "operators.hpp"
#include "term.hpp"

namespace mup {

struct ParseOptions {
    Grammar grammar = Grammar::Standard;
    // Accept `;` as inclusive disjunction in goals.
    bool classical_or = true;
};

struct Query {
    GoalPtr goal;
    // Named variables (not starting with '_') in first-occurrence order.
    std::vector<Term> answer_vars;
};

//
// Operator-precedence reader over the token stream, followed by a
// term-to-goal pass that recognizes the control constructs.
//
class Parser {
public:
    Parser(std::string_view text, ParseOptions opts, VarSource &vars)
        : tokens_(Lexer(text).tokenize()), opts_(opts), vars_(vars) {}

    bool at_eof() const { return peek().kind == Token::Kind::Eof; }

    Clause next_clause() {
        const Token &start = peek();
        SourceSpan span{start.line, start.column};
        Term t = read_clause_term();
        Clause c;
        c.span = span;
        if (t.is_compound() && t.name() == ":-" && t.arity() == 2) {
            c.head = t.arg(0);
            c.body = to_goal(t.arg(1), span);
        } else if (t.is_compound() && t.name() == ":-" && t.arity() == 1) {
            throw SyntaxError("directives are not supported", span.line, span.column);
        } else {
            c.head = t;
        }
        check_head(c.head, span);
        return c;
    }

    Query next_query() {
        const Token &start = peek();
        SourceSpan span{start.line, start.column};
        Term t = read_clause_term();
        Query q;
        q.goal = to_goal(t, span);
        for (const auto &v : scope_order_)
            if (v.name().empty() || v.name()[0] != '_')
                q.answer_vars.push_back(v);
        return q;
    }

    [[noreturn]] void fail_here(const std::string &msg) const { fail(msg, peek()); }

    // Reads one '.'-terminated term with its own variable scope.
    Term next_term() { return read_clause_term(); }

    // A term with an optional terminating '.'.
    Term bare_term() {
        scope_.clear();
        scope_order_.clear();
        if (at_eof())
            fail("unexpected end of input", peek());
        Term t = parse(1200).first;
        if (peek().kind == Token::Kind::End)
            advance();
        return t;
    }

    // Converts a body term into a goal under the configured grammar.
    GoalPtr to_goal(const Term &t, SourceSpan at) const {
        if (t.is_var())
            throw SyntaxError("variable used as a goal (call/1 is not supported)", at.line, at.column);
        if (t.is_number())
            throw SyntaxError("number used as a goal", at.line, at.column);
        const std::string &f = t.name();
        if (t.is_atom()) {
            if (f == "true")
                return goals::truth();
            if (f == "!") {
                if (opts_.grammar == Grammar::Verification)
                    return goals::cut();
                throw SyntaxError("cut (!) is not part of the language; use `G0 # G1` for committed choice",
                                  at.line, at.column);
            }
            return goals::call(t);
        }
        if (t.arity() == 2) {
            if (f == ",")
                return goals::conj(to_goal(t.arg(0), at), to_goal(t.arg(1), at));
            if (f == "#" && opts_.grammar == Grammar::Standard)
                return goals::choice(to_goal(t.arg(0), at), to_goal(t.arg(1), at));
            if (f == ";") {
                const Term &l = t.arg(0);
                if (opts_.grammar == Grammar::Verification && l.is_compound() && l.name() == "*->" &&
                    l.arity() == 2)
                    return goals::soft_if_then_else(to_goal(l.arg(0), at), to_goal(l.arg(1), at),
                                                    to_goal(t.arg(1), at));
                if (!opts_.classical_or && opts_.grammar == Grammar::Standard)
                    throw SyntaxError("classical disjunction `;` is disabled", at.line, at.column);
                return goals::classical_or(to_goal(l, at), to_goal(t.arg(1), at));
            }
            if (f == "*->" && opts_.grammar == Grammar::Verification)
                return goals::soft_if_then_else(to_goal(t.arg(0), at), to_goal(t.arg(1), at),
                                                goals::call(Term::atom("fail")));
            if (f == "=")
                return goals::eq(t.arg(0), t.arg(1));
            if (f == ":-")
                throw SyntaxError("`:-` inside a goal", at.line, at.column);
        }
        return goals::call(t);
    }

private:
    const Token &peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    const Token &advance() {
        const Token &t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string &msg, const Token &at) const {
        throw SyntaxError(msg, at.line, at.column);
    }

    Term read_clause_term() {
        scope_.clear();
        scope_order_.clear();
        if (at_eof())
            fail("unexpected end of input", peek());
        Term t = parse(1200).first;
        const Token &end = peek();
        if (end.kind != Token::Kind::End)
            fail(end.kind == Token::Kind::Eof ? "missing '.' at end of clause" : "unexpected '" + end.text + "'",
                 end);
        advance();
        return t;
    }

    void check_head(const Term &head, SourceSpan at) const {
        if (head.is_var())
            throw SyntaxError("clause head is a variable", at.line, at.column);
        if (head.is_number())
            throw SyntaxError("clause head is a number", at.line, at.column);
        static const char *const control[] = {",", ";", "#", "*->", ":-"};
        if (head.is_compound() && head.arity() == 2)
            for (const char *c : control)
                if (head.name() == c)
                    throw SyntaxError(std::string("cannot define control construct ") + c, at.line, at.column);
        if (head.is_atom() && head.name() == "!")
            throw SyntaxError("cannot define !", at.line, at.column);
    }

    std::optional<OpDef> infix_at(const Token &t) const {
        if (t.kind == Token::Kind::Punct && t.text == ",")
            return infix_op(",", opts_.grammar);
        if (t.kind == Token::Kind::Name)
            return infix_op(t.text, opts_.grammar);
        return std::nullopt;
    }

    bool starts_term(const Token &t) const {
        switch (t.kind) {
        case Token::Kind::Name:
            return !infix_at(t).has_value();
        case Token::Kind::QuotedName:
        case Token::Kind::Var:
        case Token::Kind::Int:
        case Token::Kind::Float:
            return true;
        case Token::Kind::Punct:
            return t.text == "(" || t.text == "[";
        default:
            return false;
        }
    }

    // Returns the term and the priority of its principal operator.
    std::pair<Term, int> parse(int max_prec) {
        auto [left, left_prec] = parse_primary(max_prec);
        for (;;) {
            const Token &tok = peek();
            auto op = infix_at(tok);
            if (!op || op->priority > max_prec || left_prec > left_max(*op))
                break;
            std::string name = tok.kind == Token::Kind::Punct ? "," : tok.text;
            Token op_tok = advance();
            auto [right, right_prec] = parse(right_max(*op));
            if ((name == "#" || name == ";") && right_prec == 1100 && right.is_compound() &&
                right.name() != name && (right.name() == "#" || right.name() == ";"))
                fail("mixing `#` and `;` requires parentheses", op_tok);
            left = Term::compound(name, {left, right});
            left_prec = op->priority;
        }
        return {left, left_prec};
    }

    std::pair<Term, int> parse_primary(int max_prec) {
        const Token &tok = peek();
        switch (tok.kind) {
        case Token::Kind::Int:
        case Token::Kind::Float: {
            Token t = advance();
            return {number(t, false), 0};
        }
        case Token::Kind::Var: {
            Token t = advance();
            return {variable(t.text), 0};
        }
        case Token::Kind::QuotedName: {
            Token t = advance();
            if (peek().is_punct('(') && !peek().layout_before)
                return {Term::compound(t.text, arguments()), 0};
            return {Term::atom(t.text), 0};
        }
        case Token::Kind::Name: {
            Token t = advance();
            const Token &nx = peek();
            if (nx.is_punct('(') && !nx.layout_before)
                return {Term::compound(t.text, arguments()), 0};
            if (t.text == "-" && (nx.kind == Token::Kind::Int || nx.kind == Token::Kind::Float) &&
                !nx.layout_before) {
                Token n = advance();
                return {number(n, true), 0};
            }
            if (auto pre = prefix_op(t.text); pre && pre->priority <= max_prec && starts_term(nx)) {
                Term arg = parse(right_max(*pre)).first;
                return {Term::compound(t.text, {arg}), pre->priority};
            }
            return {Term::atom(t.text), 0};
        }
        case Token::Kind::Punct:
            if (tok.text == "(") {
                advance();
                Term inner = parse(1200).first;
                expect(')');
                return {inner, 0};
            }
            if (tok.text == "[") {
                advance();
                if (peek().is_punct(']')) {
                    advance();
                    return {nil(), 0};
                }
                std::vector<Term> items{parse(999).first};
                while (peek().is_punct(',')) {
                    advance();
                    items.push_back(parse(999).first);
                }
                Term tail = nil();
                if (peek().is_punct('|')) {
                    advance();
                    tail = parse(999).first;
                }
                expect(']');
                return {make_list(items, tail), 0};
            }
            fail("unexpected '" + tok.text + "'", tok);
        case Token::Kind::End:
            fail("unexpected end of clause", tok);
        case Token::Kind::Eof:
            fail("unexpected end of input", tok);
        }
        fail("unexpected token", tok);
    }

    std::vector<Term> arguments() {
        expect('(');
        std::vector<Term> args{parse(999).first};
        while (peek().is_punct(',')) {
            advance();
            args.push_back(parse(999).first);
        }
        expect(')');
        return args;
    }

    void expect(char c) {
        const Token &t = peek();
        if (!t.is_punct(c))
            fail(std::string("expected '") + c + "'" +
                     (t.kind == Token::Kind::Eof ? " before end of input" : ", found '" + t.text + "'"),
                 t);
        advance();
    }

    Term number(const Token &t, bool negative) const {
        if (t.kind == Token::Kind::Float) {
            double v = 0;
            auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (res.ec != std::errc())
                fail("bad float literal", t);
            return Term::real(negative ? -v : v);
        }
        std::uint64_t mag = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), mag);
        if (res.ec != std::errc())
            fail("integer literal out of range", t);
        constexpr auto max = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
        if (negative) {
            if (mag > max + 1)
                fail("integer literal out of range", t);
            if (mag == max + 1)
                return Term::integer(std::numeric_limits<std::int64_t>::min());
            return Term::integer(-static_cast<std::int64_t>(mag));
        }
        if (mag > max)
            fail("integer literal out of range", t);
        return Term::integer(static_cast<std::int64_t>(mag));
    }

    Term variable(const std::string &name) {
        if (name == "_")
            return vars_.fresh("_");
        auto it = scope_.find(name);
        if (it != scope_.end())
            return it->second;
        Term v = vars_.fresh(name);
        scope_.emplace(name, v);
        scope_order_.push_back(v);
        return v;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    ParseOptions opts_;
    VarSource &vars_;
    std::map<std::string, Term> scope_;
    std::vector<Term> scope_order_;
};

inline Program parse_program(std::string_view text, ParseOptions opts = {}) {
    VarSource vars;
    Parser p(text, opts, vars);
    Program prog;
    while (!p.at_eof())
        prog.add(p.next_clause());
    return prog;
}

// Query variables get ids from `first_id` upward.
inline Query parse_query(std::string_view text, ParseOptions opts = {}, VarId first_id = 0) {
    VarSource vars{first_id};
    Parser p(text, opts, vars);
    Query q = p.next_query();
    if (!p.at_eof())
        p.fail_here("trailing input after query");
    return q;
}

inline Term parse_term(std::string_view text, VarSource &vars) {
    Parser p(text, {}, vars);
    Term t = p.bare_term();
    if (!p.at_eof())
        p.fail_here("trailing input after term");
    return t;
}

} // namespace mup
