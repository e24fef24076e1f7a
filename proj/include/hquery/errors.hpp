#ifndef HQUERY_ERRORS_HPP
#define HQUERY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hquery {

enum class ErrorKind {
    Lex,
    Parse,
    Compile,
    UnknownVariable,
    UnknownFunction,
    UnknownFormatter,
    TypeMismatch,
    InvalidName,
    HostError,
    BudgetExceeded,
    Runtime,
};

class ScriptError : public std::runtime_error {
public:
    ScriptError(ErrorKind kind, std::string message, int line = -1, int column = -1)
        : std::runtime_error(format(kind, message, line, column)),
          kind_(kind), line_(line), column_(column) {}

    ErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

    // lex/parse/compile errors are "static" failures, everything else is runtime
    bool is_static() const {
        return kind_ == ErrorKind::Lex || kind_ == ErrorKind::Parse ||
               kind_ == ErrorKind::Compile;
    }

private:
    static std::string format(ErrorKind kind, const std::string& msg, int line, int col) {
        std::string out = kind_name(kind);
        if (line >= 0) {
            out += " at line " + std::to_string(line);
            if (col >= 0) out += ", column " + std::to_string(col);
        }
        out += ": " + msg;
        return out;
    }

    static const char* kind_name(ErrorKind kind) {
        switch (kind) {
            case ErrorKind::Lex: return "lex error";
            case ErrorKind::Parse: return "parse error";
            case ErrorKind::Compile: return "compile error";
            case ErrorKind::UnknownVariable: return "unknown variable";
            case ErrorKind::UnknownFunction: return "unknown function";
            case ErrorKind::UnknownFormatter: return "unknown formatter";
            case ErrorKind::TypeMismatch: return "type mismatch";
            case ErrorKind::InvalidName: return "invalid name";
            case ErrorKind::HostError: return "host error";
            case ErrorKind::BudgetExceeded: return "budget exceeded";
            case ErrorKind::Runtime: return "runtime error";
        }
        return "error";
    }

    ErrorKind kind_;
    int line_;
    int column_;
};

} // namespace hquery

#endif
