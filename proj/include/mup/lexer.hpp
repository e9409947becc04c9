#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace mup {

struct Token {
    enum class Kind { Name, QuotedName, Var, Int, Float, Punct, End, Eof };

    Kind kind = Kind::Eof;
    std::string text;
    bool layout_before = false; // whitespace or comment precedes the token
    std::size_t line = 1;
    std::size_t column = 1;

    bool is_punct(char c) const { return kind == Kind::Punct && text.size() == 1 && text[0] == c; }
};

namespace detail {

inline bool is_symbol_char(char c) {
    switch (c) {
    case '+': case '-': case '*': case '/': case '\\': case '^': case '<': case '>':
    case '=': case '~': case ':': case '.': case '?': case '@': case '#': case '&': case '$':
        return true;
    default:
        return false;
    }
}

inline bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace detail

//
// Tokenizer for the clause syntax. A '.' followed by layout, '%' or end of
// input terminates a clause; inside a symbol-character run it is just a
// character.
//
class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        for (;;) {
            out.push_back(next());
            if (out.back().kind == Token::Kind::Eof)
                break;
        }
        return out;
    }

    Token next() {
        bool layout = skip_layout();
        Token tok;
        tok.layout_before = layout;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size()) {
            tok.kind = Token::Kind::Eof;
            return tok;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(tok);
        } else if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
            tok.kind = Token::Kind::Var;
            while (pos_ < text_.size() && detail::is_alnum(peek()))
                tok.text += advance();
        } else if (std::islower(static_cast<unsigned char>(c))) {
            tok.kind = Token::Kind::Name;
            while (pos_ < text_.size() && detail::is_alnum(peek()))
                tok.text += advance();
        } else if (c == '\'' || c == '"') {
            tok.kind = Token::Kind::QuotedName;
            tok.text = lex_quoted(advance(), tok);
        } else if (c == '.' && end_follows(pos_ + 1)) {
            advance();
            tok.kind = Token::Kind::End;
            tok.text = ".";
        } else if (detail::is_symbol_char(c)) {
            tok.kind = Token::Kind::Name;
            while (pos_ < text_.size() && detail::is_symbol_char(peek()))
                tok.text += advance();
        } else if (c == '!' || c == ';') {
            tok.kind = Token::Kind::Name;
            tok.text = std::string(1, advance());
        } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '|' || c == '{' || c == '}') {
            tok.kind = Token::Kind::Punct;
            tok.text = std::string(1, advance());
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", line_, column_);
        }
        return tok;
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    bool end_follows(std::size_t at) const {
        if (at >= text_.size())
            return true;
        char c = text_[at];
        return std::isspace(static_cast<unsigned char>(c)) || c == '%';
    }

    bool skip_layout() {
        bool any = false;
        while (pos_ < text_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                any = true;
            } else if (c == '%') {
                while (pos_ < text_.size() && peek() != '\n')
                    advance();
                any = true;
            } else if (c == '/' && peek(1) == '*') {
                std::size_t l = line_, col = column_;
                advance();
                advance();
                while (pos_ < text_.size() && !(peek() == '*' && peek(1) == '/'))
                    advance();
                if (pos_ >= text_.size())
                    throw SyntaxError("unterminated block comment", l, col);
                advance();
                advance();
                any = true;
            } else {
                break;
            }
        }
        return any;
    }

    void lex_number(Token &tok) {
        tok.kind = Token::Kind::Int;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            tok.text += advance();
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            tok.kind = Token::Kind::Float;
            tok.text += advance();
            while (std::isdigit(static_cast<unsigned char>(peek())))
                tok.text += advance();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            tok.kind = Token::Kind::Float;
            tok.text += advance();
            if (peek() == '+' || peek() == '-')
                tok.text += advance();
            while (std::isdigit(static_cast<unsigned char>(peek())))
                tok.text += advance();
        }
    }

    std::string lex_quoted(char quote, const Token &tok) {
        std::string out;
        for (;;) {
            if (pos_ >= text_.size())
                throw SyntaxError("unterminated quoted atom", tok.line, tok.column);
            char c = advance();
            if (c == quote) {
                if (peek() == quote) {
                    out += advance();
                    continue;
                }
                return out;
            }
            if (c == '\\') {
                if (pos_ >= text_.size())
                    throw SyntaxError("unterminated quoted atom", tok.line, tok.column);
                char e = advance();
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '\\': out += '\\'; break;
                case '\'': out += '\''; break;
                case '"': out += '"'; break;
                case '\n': break; // line continuation
                default:
                    throw SyntaxError(std::string("unknown escape \\") + e, line_, column_);
                }
                continue;
            }
            out += c;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

} // namespace mup
