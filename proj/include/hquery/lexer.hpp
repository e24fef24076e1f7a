#ifndef HQUERY_LEXER_HPP
#define HQUERY_LEXER_HPP

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace hquery {

enum class TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    FloatLiteral,
    StringLiteral,
    Operator,
    Punctuation,
    EndOfInput,
};

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string text;   // keywords normalized to upper case
    std::string value;  // decoded payload for string literals
    int line = 1;
    int column = 1;
};

inline const std::vector<std::string>& reserved_words() {
    static const std::vector<std::string> words = {
        "SELECT", "FROM", "WHERE", "GROUP", "ORDER", "BY", "AS",
        "START", "CONNECT", "STOP", "WITH", "NO", "CYCLE", "UNIQUE",
        "MEMORIZE", "MAXIMUM", "IF", "AND", "OR", "NOT",
        "THIS", "TRUE", "FALSE", "NONE",
    };
    return words;
}

inline bool is_reserved_word(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    const auto& words = reserved_words();
    return std::find(words.begin(), words.end(), upper) != words.end();
}

inline bool is_valid_identifier(std::string_view name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return !is_reserved_word(name);
}

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            skip_trivia();
            if (pos_ >= src_.size()) break;
            tokens.push_back(next());
        }
        Token eof;
        eof.kind = TokenKind::EndOfInput;
        eof.line = line_;
        eof.column = column_;
        tokens.push_back(eof);
        return tokens;
    }

private:
    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token next() {
        Token tok;
        tok.line = line_;
        tok.column = column_;
        char c = src_[pos_];

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                word += src_[pos_];
                advance();
            }
            if (is_reserved_word(word)) {
                tok.kind = TokenKind::Keyword;
                std::transform(word.begin(), word.end(), word.begin(),
                               [](unsigned char ch) { return std::toupper(ch); });
            } else {
                tok.kind = TokenKind::Identifier;
            }
            tok.text = std::move(word);
            return tok;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) return number(tok);
        if (c == '"' || c == '\'') return string_literal(tok);

        // multi-char operators first
        static const std::array<std::string_view, 6> two_char = {
            "==", "!=", "<=", ">=", "&&", "||"};
        if (pos_ + 1 < src_.size()) {
            std::string_view pair = src_.substr(pos_, 2);
            for (std::string_view op : two_char) {
                if (pair == op) {
                    tok.kind = TokenKind::Operator;
                    tok.text = std::string(pair);
                    advance();
                    advance();
                    return tok;
                }
            }
        }

        switch (c) {
            case '+': case '-': case '*': case '/':
            case '<': case '>': case '=':
                tok.kind = TokenKind::Operator;
                tok.text = std::string(1, c);
                advance();
                return tok;
            case ';': case ',': case '(': case ')':
            case '[': case ']': case '{': case '}': case '.':
                tok.kind = TokenKind::Punctuation;
                tok.text = std::string(1, c);
                advance();
                return tok;
            default:
                throw ScriptError(ErrorKind::Lex,
                                  std::string("unexpected character '") + c + "'",
                                  tok.line, tok.column);
        }
    }

    Token number(Token tok) {
        std::string text;
        bool is_float = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            text += src_[pos_];
            advance();
        }
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            is_float = true;
            text += src_[pos_];
            advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                text += src_[pos_];
                advance();
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            std::string exp(1, src_[pos_]);
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                exp += src_[pos_];
                advance();
            }
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    exp += src_[pos_];
                    advance();
                }
                text += exp;
                is_float = true;
            } else {
                rewind(save);
            }
        }
        tok.kind = is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral;
        tok.text = std::move(text);
        return tok;
    }

    Token string_literal(Token tok) {
        char quote = src_[pos_];
        advance();
        std::string out;
        while (true) {
            if (pos_ >= src_.size())
                throw ScriptError(ErrorKind::Lex, "unterminated string literal",
                                  tok.line, tok.column);
            char c = src_[pos_];
            if (c == quote) {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size())
                    throw ScriptError(ErrorKind::Lex, "unterminated string literal",
                                      tok.line, tok.column);
                char e = src_[pos_];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '\\': out += '\\'; break;
                    case '"': out += '"'; break;
                    case '\'': out += '\''; break;
                    case '0': out += '\0'; break;
                    default: out += e;
                }
                advance();
            } else {
                out += c;
                advance();
            }
        }
        tok.kind = TokenKind::StringLiteral;
        tok.text = out;
        tok.value = std::move(out);
        return tok;
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void rewind(std::size_t to) {
        // only used within a single line (exponent backtracking)
        column_ -= static_cast<int>(pos_ - to);
        pos_ = to;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

inline std::vector<Token> tokenize(std::string_view source) {
    return Lexer(source).run();
}

} // namespace hquery

#endif
