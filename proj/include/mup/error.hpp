#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mup {

// Base of every error the library reports. Logical failure is never an
// error; these are raised only for malformed input or misuse.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string &msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": syntax error: " + msg),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class InstantiationError : public Error {
public:
    explicit InstantiationError(const std::string &where)
        : Error("instantiation error in " + where) {}
};

class TypeError : public Error {
public:
    TypeError(const std::string &expected, const std::string &culprit)
        : Error("type error: expected " + expected + ", got " + culprit) {}
};

class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string &what) : Error("evaluation error: " + what) {}
};

class ExistenceError : public Error {
public:
    explicit ExistenceError(const std::string &indicator)
        : Error("unknown procedure " + indicator) {}
};

class PermissionError : public Error {
public:
    explicit PermissionError(const std::string &what) : Error("permission error: " + what) {}
};

class TranslationError : public Error {
public:
    explicit TranslationError(const std::string &what) : Error("translation error: " + what) {}
};

class InternalError : public Error {
public:
    explicit InternalError(const std::string &what) : Error("internal error: " + what) {}
};

} // namespace mup
