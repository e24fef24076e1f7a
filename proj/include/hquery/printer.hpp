#ifndef HQUERY_PRINTER_HPP
#define HQUERY_PRINTER_HPP

#include "ast.hpp"

#include <string>

namespace hquery {

// Canonical source rendering; parse(pretty_print(a)) is structurally equal to a.
class Printer {
public:
    std::string print(const Script& script) {
        std::string out;
        for (const Statement& stmt : script.statements) {
            if (stmt.is_assign) {
                out += stmt.target;
                if (stmt.ttl_seconds) {
                    out += '{';
                    out += number(*stmt.ttl_seconds);
                    out += '}';
                }
                out += " = ";
            }
            emit(stmt.expr, 0, out);
            out += ";\n";
        }
        return out;
    }

    std::string print(const ExprPtr& expr) {
        std::string out;
        emit(expr, 0, out);
        return out;
    }

private:
    // precedence: OR=1 AND=2 NOT=3 cmp=4 sum=5 prod=6 unary=7 prim=8; query=0
    static int prec(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Query: return 0;
            case ExprKind::BinOp:
                if (e.name == "OR") return 1;
                if (e.name == "AND") return 2;
                if (e.name == "+" || e.name == "-") return 5;
                if (e.name == "*" || e.name == "/") return 6;
                return 4; // comparisons
            case ExprKind::UnOp:
                return e.name == "NOT" ? 3 : 7;
            default:
                return 8;
        }
    }

    void emit(const ExprPtr& e, int min_level, std::string& out) {
        if (!e) return;
        bool parens = prec(*e) < min_level;
        if (parens) out += '(';
        emit_node(*e, out);
        if (parens) out += ')';
    }

    void emit_node(const Expr& e, std::string& out) {
        switch (e.kind) {
            case ExprKind::Literal:
                out += serialize(e.literal);
                break;
            case ExprKind::ListExpr:
                out += '[';
                emit_seq(e.args, out);
                out += ']';
                break;
            case ExprKind::Var:
                out += e.name;
                break;
            case ExprKind::ThisRef:
                if (!e.name.empty()) {
                    out += e.name;
                    out += '.';
                }
                out += "this";
                break;
            case ExprKind::Call:
                out += e.name;
                out += '(';
                emit_seq(e.args, out);
                out += ')';
                break;
            case ExprKind::BinOp: {
                int p = prec(e);
                if (p == 4) {
                    emit(e.lhs, 5, out);
                    out += ' ';
                    out += e.name;
                    out += ' ';
                    emit(e.rhs, 5, out);
                } else {
                    emit(e.lhs, p, out);
                    out += ' ';
                    out += e.name;
                    out += ' ';
                    emit(e.rhs, p + 1, out);
                }
                break;
            }
            case ExprKind::UnOp:
                if (e.name == "NOT") {
                    out += "NOT ";
                    emit(e.operand, 3, out);
                } else {
                    out += '-';
                    emit(e.operand, 7, out);
                }
                break;
            case ExprKind::If:
                out += "IF(";
                emit(e.cond, 1, out);
                out += "; ";
                emit_seq(e.then_seq, out);
                if (e.has_else) {
                    out += "; ";
                    emit_seq(e.else_seq, out);
                }
                out += ')';
                break;
            case ExprKind::Query:
                emit_query(*e.query, out);
                break;
        }
    }

    // Sub-expression contexts use min level 1 so that nested queries (level 0)
    // are parenthesized; an unparenthesized inner SELECT would swallow the
    // enclosing query's remaining clauses on re-parse.
    void emit_seq(const std::vector<ExprPtr>& items, std::string& out) {
        bool first = true;
        for (const ExprPtr& item : items) {
            if (!first) out += ", ";
            first = false;
            emit(item, 1, out);
        }
    }

    void emit_query(const SelectQuery& q, std::string& out) {
        out += "SELECT ";
        emit_seq(q.select, out);
        out += " FROM ";
        bool first = true;
        for (const FromItem& item : q.from) {
            if (!first) out += ", ";
            first = false;
            if (!item.name.empty()) {
                out += item.name;
                out += '=';
            }
            emit(item.expr, 1, out);
        }
        if (q.where) {
            out += " WHERE ";
            emit(q.where, 1, out);
        }
        if (!q.group_by.empty()) {
            out += " GROUP BY ";
            emit_seq(q.group_by, out);
        }
        if (!q.order_by.empty()) {
            out += " ORDER BY ";
            first = true;
            for (const OrderItem& item : q.order_by) {
                if (!first) out += ", ";
                first = false;
                emit(item.expr, 1, out);
                if (item.descending) out += " DESC";
            }
        }
        if (q.hierarchy) {
            const Hierarchy& h = *q.hierarchy;
            out += " START WITH ";
            emit_binds(h.start, out);
            out += " CONNECT BY ";
            switch (h.mode) {
                case SearchMode::DefaultDfs: break;
                case SearchMode::NoCycle: out += "NO CYCLE "; break;
                case SearchMode::Unique: out += "UNIQUE "; break;
                case SearchMode::Memorize:
                    out += "MEMORIZE " + std::to_string(h.memorize_len) + " ";
                    break;
            }
            if (h.maximum) out += "MAXIMUM " + std::to_string(*h.maximum) + " ";
            emit_binds(h.updates, out);
            out += " STOP WITH ";
            emit(h.stop, 1, out);
        }
        if (q.as_spec) {
            out += " AS ";
            out += q.as_spec->name;
            if (q.as_spec->has_parens || !q.as_spec->args.empty()) {
                out += '(';
                emit_seq(q.as_spec->args, out);
                out += ')';
            }
        }
    }

    void emit_binds(const std::vector<Binding>& binds, std::string& out) {
        bool first = true;
        for (const Binding& b : binds) {
            if (!first) out += ", ";
            first = false;
            out += b.name;
            out += " = ";
            emit(b.expr, 1, out);
        }
    }

    std::string number(double d) {
        std::string out;
        detail::serialize_float(d, out);
        return out;
    }
};

inline std::string pretty_print(const Script& script) { return Printer().print(script); }
inline std::string pretty_print(const ExprPtr& expr) { return Printer().print(expr); }

} // namespace hquery

#endif
