#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bindings.hpp"
#include "builtin_table.hpp"
#include "error.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "term.hpp"
#include "unify.hpp"

namespace mup {

//
// Pluggable text ports for read/1 and write/1. The input side yields one line
// per call and nullopt at end of input.
//
struct IoPorts {
    std::function<std::optional<std::string>()> read_line;
    std::function<void(std::string_view)> write;

    static IoPorts standard() { return streams(std::cin, std::cout); }

    static IoPorts streams(std::istream &in, std::ostream &out) {
        IoPorts io;
        io.read_line = [&in]() -> std::optional<std::string> {
            std::string line;
            if (!std::getline(in, line))
                return std::nullopt;
            return line;
        };
        io.write = [&out](std::string_view s) {
            out << s;
            out.flush();
        };
        return io;
    }
};

// Scripted input queue plus captured output, for tests.
class ScriptedIo {
public:
    explicit ScriptedIo(std::deque<std::string> input = {}) : state_(std::make_shared<State>()) {
        state_->input = std::move(input);
    }

    void feed(std::string line) { state_->input.push_back(std::move(line)); }
    const std::string &output() const { return state_->output; }
    void clear_output() { state_->output.clear(); }

    IoPorts ports() const {
        IoPorts io;
        auto st = state_;
        io.read_line = [st]() -> std::optional<std::string> {
            if (st->input.empty())
                return std::nullopt;
            std::string line = std::move(st->input.front());
            st->input.pop_front();
            return line;
        };
        io.write = [st](std::string_view s) { st->output.append(s); };
        return io;
    }

private:
    struct State {
        std::deque<std::string> input;
        std::string output;
    };
    std::shared_ptr<State> state_;
};

namespace detail {

// `f` is one of the __builtin_*_overflow intrinsics.
template <typename F>
inline Term checked_int(F f, std::int64_t x, std::int64_t y, const char *op) {
    std::int64_t r = 0;
    if (f(x, y, &r))
        throw EvaluationError(std::string("integer overflow in ") + op);
    return Term::integer(r);
}

inline constexpr auto add = [](std::int64_t x, std::int64_t y, std::int64_t *r) { return __builtin_add_overflow(x, y, r); };
inline constexpr auto sub = [](std::int64_t x, std::int64_t y, std::int64_t *r) { return __builtin_sub_overflow(x, y, r); };
inline constexpr auto mul = [](std::int64_t x, std::int64_t y, std::int64_t *r) { return __builtin_mul_overflow(x, y, r); };

inline double as_double(const Term &t) { return t.is_int() ? static_cast<double>(t.int_value()) : t.float_value(); }

} // namespace detail

//
// Evaluates an arithmetic expression. Integers: + - * // mod and unary -.
// Floats (or mixed operands): + - * /. `/` always yields a float.
//
inline Term eval_arith(const Term &expr, const Bindings &b) {
    Term t = deref(expr, b);
    switch (t.kind()) {
    case Term::Kind::Int:
    case Term::Kind::Float:
        return t;
    case Term::Kind::Var:
        throw InstantiationError("arithmetic expression");
    case Term::Kind::Atom:
        throw TypeError("evaluable", quote_atom(t.name()) + "/0");
    case Term::Kind::Compound:
        break;
    }
    const std::string &op = t.name();
    if (t.arity() == 1 && op == "-") {
        Term x = eval_arith(t.arg(0), b);
        if (x.is_float())
            return Term::real(-x.float_value());
        return detail::checked_int(detail::sub, 0, x.int_value(), "-");
    }
    if (t.arity() != 2)
        throw TypeError("evaluable", quote_atom(op) + "/" + std::to_string(t.arity()));
    Term x = eval_arith(t.arg(0), b);
    Term y = eval_arith(t.arg(1), b);
    bool ints = x.is_int() && y.is_int();
    if (op == "+") {
        if (ints)
            return detail::checked_int(detail::add, x.int_value(), y.int_value(), "+");
        return Term::real(detail::as_double(x) + detail::as_double(y));
    }
    if (op == "-") {
        if (ints)
            return detail::checked_int(detail::sub, x.int_value(), y.int_value(), "-");
        return Term::real(detail::as_double(x) - detail::as_double(y));
    }
    if (op == "*") {
        if (ints)
            return detail::checked_int(detail::mul, x.int_value(), y.int_value(), "*");
        return Term::real(detail::as_double(x) * detail::as_double(y));
    }
    if (op == "/") {
        double d = detail::as_double(y);
        if (d == 0.0)
            throw EvaluationError("zero divisor");
        return Term::real(detail::as_double(x) / d);
    }
    if (op == "//" || op == "mod") {
        if (!ints)
            throw TypeError("integer", "float operand of " + op);
        if (y.int_value() == 0)
            throw EvaluationError("zero divisor");
        if (x.int_value() == INT64_MIN && y.int_value() == -1) {
            if (op == "//")
                throw EvaluationError("integer overflow in //");
            return Term::integer(0);
        }
        if (op == "//")
            return Term::integer(x.int_value() / y.int_value());
        // mod takes the sign of the divisor.
        std::int64_t m = x.int_value() % y.int_value();
        if (m != 0 && ((m < 0) != (y.int_value() < 0)))
            m += y.int_value();
        return Term::integer(m);
    }
    throw TypeError("evaluable", quote_atom(op) + "/2");
}

enum class Comparison { Less, Greater, LessEq, GreaterEq, Equal, NotEqual };

inline std::optional<Comparison> comparison_for(const std::string &name) {
    if (name == "<") return Comparison::Less;
    if (name == ">") return Comparison::Greater;
    if (name == "=<") return Comparison::LessEq;
    if (name == ">=") return Comparison::GreaterEq;
    if (name == "=:=") return Comparison::Equal;
    if (name == "=\\=") return Comparison::NotEqual;
    return std::nullopt;
}

// Numeric comparison of two evaluated expressions; never binds.
inline bool compare_builtin(Comparison op, const Term &lhs, const Term &rhs, const Bindings &b) {
    Term x = eval_arith(lhs, b);
    Term y = eval_arith(rhs, b);
    int c = 0;
    if (x.is_int() && y.is_int())
        c = (x.int_value() > y.int_value()) - (x.int_value() < y.int_value());
    else {
        double dx = detail::as_double(x), dy = detail::as_double(y);
        c = (dx > dy) - (dx < dy);
    }
    switch (op) {
    case Comparison::Less: return c < 0;
    case Comparison::Greater: return c > 0;
    case Comparison::LessEq: return c <= 0;
    case Comparison::GreaterEq: return c >= 0;
    case Comparison::Equal: return c == 0;
    case Comparison::NotEqual: return c != 0;
    }
    return false;
}

// Reads the next non-blank input line as a term and unifies it with t.
// End of input reads as the atom end_of_file.
inline bool read_builtin(const Term &t, IoPorts &io, Bindings &b, VarSource &vars, bool occurs_check = false) {
    Term value = Term::atom("end_of_file");
    while (auto line = io.read_line()) {
        if (line->find_first_not_of(" \t\r") == std::string::npos)
            continue;
        value = parse_term(*line, vars);
        break;
    }
    return unify(t, value, b, occurs_check);
}

inline void write_builtin(const Term &t, IoPorts &io, const Bindings &b) {
    Printer p;
    Term v = apply_substitution(t, b);
    if (v.is_atom())
        io.write(v.name());
    else
        io.write(p.term(v, 1200));
}

} // namespace mup
