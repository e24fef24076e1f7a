#ifndef HQUERY_COMPILER_HPP
#define HQUERY_COMPILER_HPP

#include "ast.hpp"
#include "parser.hpp"

#include <set>

namespace hquery {

// The IR shares the AST node types: compilation normalizes the tree
// (constant folding over pure literal arithmetic and list construction)
// and precomputes SELECT-column labels for AS dict.
class Compiler {
public:
    Script compile(const Script& script) {
        Script out;
        out.statements.reserve(script.statements.size());
        for (const Statement& stmt : script.statements) {
            Statement s = stmt;
            s.expr = compile_expr(stmt.expr);
            out.statements.push_back(std::move(s));
        }
        return out;
    }

    ExprPtr compile_expr(const ExprPtr& e) {
        if (!e) return nullptr;
        switch (e->kind) {
            case ExprKind::Literal:
            case ExprKind::Var:
            case ExprKind::ThisRef:
                return e;
            case ExprKind::ListExpr: {
                auto node = clone(*e);
                bool all_literal = true;
                for (ExprPtr& arg : node->args) {
                    arg = compile_expr(arg);
                    if (arg->kind != ExprKind::Literal) all_literal = false;
                }
                if (all_literal) {
                    List items;
                    items.reserve(node->args.size());
                    for (const ExprPtr& arg : node->args) items.push_back(arg->literal);
                    return make_literal(Value(std::move(items)), *e);
                }
                return node;
            }
            case ExprKind::Call: {
                auto node = clone(*e);
                for (ExprPtr& arg : node->args) arg = compile_expr(arg);
                return node; // never fold through calls
            }
            case ExprKind::UnOp: {
                auto node = clone(*e);
                node->operand = compile_expr(node->operand);
                if (node->name == "-" && node->operand->kind == ExprKind::Literal) {
                    try {
                        return make_literal(negate(node->operand->literal), *e);
                    } catch (const ScriptError&) {
                        // leave unfolded; the error surfaces at evaluation
                    }
                }
                return node;
            }
            case ExprKind::BinOp: {
                auto node = clone(*e);
                node->lhs = compile_expr(node->lhs);
                node->rhs = compile_expr(node->rhs);
                if (node->lhs->kind == ExprKind::Literal &&
                    node->rhs->kind == ExprKind::Literal && is_arith(node->name)) {
                    try {
                        return make_literal(
                            fold_arith(node->name, node->lhs->literal, node->rhs->literal), *e);
                    } catch (const ScriptError&) {
                    }
                }
                return node;
            }
            case ExprKind::If: {
                auto node = clone(*e);
                node->cond = compile_expr(node->cond);
                for (ExprPtr& x : node->then_seq) x = compile_expr(x);
                for (ExprPtr& x : node->else_seq) x = compile_expr(x);
                return node;
            }
            case ExprKind::Query:
                return compile_query(*e);
        }
        return e;
    }

private:
    ExprPtr compile_query(const Expr& e) {
        auto q = std::make_shared<SelectQuery>(*e.query);
        q->labels.clear();
        for (std::size_t i = 0; i < q->select.size(); ++i) {
            q->select[i] = compile_expr(q->select[i]);
            q->labels.push_back(label_for(*q->select[i], i));
        }
        std::set<std::string> from_names;
        for (FromItem& item : q->from) {
            if (!item.name.empty() && !from_names.insert(item.name).second)
                throw ScriptError(ErrorKind::Compile,
                                  "duplicate FROM source name '" + item.name + "'",
                                  e.line, e.column);
            item.expr = compile_expr(item.expr);
        }
        q->where = compile_expr(q->where);
        for (ExprPtr& g : q->group_by) g = compile_expr(g);
        for (OrderItem& o : q->order_by) o.expr = compile_expr(o.expr);
        if (q->hierarchy) {
            Hierarchy& h = *q->hierarchy;
            std::set<std::string> start_names;
            for (Binding& b : h.start) {
                if (!start_names.insert(b.name).second)
                    throw ScriptError(ErrorKind::Compile,
                                      "duplicate START WITH binding '" + b.name + "'",
                                      e.line, e.column);
                b.expr = compile_expr(b.expr);
            }
            for (Binding& b : h.updates) b.expr = compile_expr(b.expr);
            h.stop = compile_expr(h.stop);
        }
        if (q->as_spec)
            for (ExprPtr& a : q->as_spec->args) a = compile_expr(a);
        auto node = clone(e);
        node->query = q;
        return node;
    }

    static std::string label_for(const Expr& item, std::size_t index) {
        switch (item.kind) {
            case ExprKind::Call:
            case ExprKind::Var:
                return item.name;
            case ExprKind::ThisRef:
                return item.name.empty() ? "this" : item.name;
            default:
                return "col" + std::to_string(index);
        }
    }

    static bool is_arith(const std::string& op) {
        return op == "+" || op == "-" || op == "*" || op == "/";
    }

    static Value fold_arith(const std::string& op, const Value& a, const Value& b) {
        if (op == "+") return add(a, b);
        if (op == "-") return subtract(a, b);
        if (op == "*") return multiply(a, b);
        return divide(a, b);
    }

    static std::shared_ptr<Expr> clone(const Expr& e) { return std::make_shared<Expr>(e); }

    static ExprPtr make_literal(Value v, const Expr& at) {
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::Literal;
        node->literal = std::move(v);
        node->line = at.line;
        node->column = at.column;
        return node;
    }
};

inline Script compile(const Script& ast) { return Compiler().compile(ast); }

inline Script compile(std::string_view source) { return Compiler().compile(parse(source)); }

} // namespace hquery

#endif
