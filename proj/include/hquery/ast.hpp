#ifndef HQUERY_AST_HPP
#define HQUERY_AST_HPP

#include "value.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hquery {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct SelectQuery;

enum class ExprKind {
    Literal,
    ListExpr,
    Var,
    ThisRef,   // name empty = bare `this`, otherwise `name.this`
    Call,
    BinOp,     // op text in `name`: == != < <= > >= + - * / AND OR
    UnOp,      // op text in `name`: - NOT
    If,
    Query,
};

struct Expr {
    ExprKind kind = ExprKind::Literal;
    Value literal;
    std::string name;              // var/call name, thisref source, operator text
    std::vector<ExprPtr> args;     // call args / list items
    ExprPtr lhs, rhs;              // binop
    ExprPtr operand;               // unop
    ExprPtr cond;                  // if
    std::vector<ExprPtr> then_seq; // if
    std::vector<ExprPtr> else_seq; // if
    bool has_else = false;
    std::shared_ptr<const SelectQuery> query;
    int line = -1, column = -1;
};

struct Binding {
    std::string name;
    ExprPtr expr;
};

struct FromItem {
    std::string name; // empty = anonymous
    ExprPtr expr;
};

struct OrderItem {
    ExprPtr expr;
    bool descending = false;
};

enum class SearchMode { DefaultDfs, NoCycle, Unique, Memorize };

struct Hierarchy {
    std::vector<Binding> start;
    SearchMode mode = SearchMode::DefaultDfs;
    std::int64_t memorize_len = 0;          // valid when mode == Memorize
    std::optional<std::int64_t> maximum;    // result cap, combinable with any mode
    std::vector<Binding> updates;
    ExprPtr stop;
};

struct AsSpec {
    std::string name;
    std::vector<ExprPtr> args;
    bool has_parens = false;
};

struct SelectQuery {
    std::vector<ExprPtr> select;
    std::vector<FromItem> from;
    ExprPtr where;
    std::vector<ExprPtr> group_by;
    std::vector<OrderItem> order_by;
    std::optional<Hierarchy> hierarchy;
    std::optional<AsSpec> as_spec;
    std::vector<std::string> labels; // populated by the compiler
};

struct Statement {
    bool is_assign = false;
    std::string target;
    std::optional<double> ttl_seconds; // temporal assignment `n{t} = e`
    ExprPtr expr;
};

struct Script {
    std::vector<Statement> statements;
};

// ---- structural equality (labels and source positions ignored) ----

bool ast_eq(const ExprPtr& a, const ExprPtr& b);

inline bool ast_eq_seq(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!ast_eq(a[i], b[i])) return false;
    return true;
}

inline bool ast_eq(const SelectQuery& a, const SelectQuery& b) {
    if (!ast_eq_seq(a.select, b.select)) return false;
    if (a.from.size() != b.from.size()) return false;
    for (std::size_t i = 0; i < a.from.size(); ++i)
        if (a.from[i].name != b.from[i].name || !ast_eq(a.from[i].expr, b.from[i].expr))
            return false;
    if (!ast_eq(a.where, b.where)) return false;
    if (!ast_eq_seq(a.group_by, b.group_by)) return false;
    if (a.order_by.size() != b.order_by.size()) return false;
    for (std::size_t i = 0; i < a.order_by.size(); ++i)
        if (a.order_by[i].descending != b.order_by[i].descending ||
            !ast_eq(a.order_by[i].expr, b.order_by[i].expr))
            return false;
    if (a.hierarchy.has_value() != b.hierarchy.has_value()) return false;
    if (a.hierarchy) {
        const Hierarchy& ha = *a.hierarchy;
        const Hierarchy& hb = *b.hierarchy;
        if (ha.mode != hb.mode || ha.memorize_len != hb.memorize_len ||
            ha.maximum != hb.maximum)
            return false;
        if (ha.start.size() != hb.start.size() || ha.updates.size() != hb.updates.size())
            return false;
        for (std::size_t i = 0; i < ha.start.size(); ++i)
            if (ha.start[i].name != hb.start[i].name || !ast_eq(ha.start[i].expr, hb.start[i].expr))
                return false;
        for (std::size_t i = 0; i < ha.updates.size(); ++i)
            if (ha.updates[i].name != hb.updates[i].name ||
                !ast_eq(ha.updates[i].expr, hb.updates[i].expr))
                return false;
        if (!ast_eq(ha.stop, hb.stop)) return false;
    }
    if (a.as_spec.has_value() != b.as_spec.has_value()) return false;
    if (a.as_spec) {
        if (a.as_spec->name != b.as_spec->name) return false;
        if (!ast_eq_seq(a.as_spec->args, b.as_spec->args)) return false;
    }
    return true;
}

inline bool ast_eq(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Literal:
            return identical(a->literal, b->literal);
        case ExprKind::ListExpr:
            return ast_eq_seq(a->args, b->args);
        case ExprKind::Var:
        case ExprKind::ThisRef:
            return a->name == b->name;
        case ExprKind::Call:
            return a->name == b->name && ast_eq_seq(a->args, b->args);
        case ExprKind::BinOp:
            return a->name == b->name && ast_eq(a->lhs, b->lhs) && ast_eq(a->rhs, b->rhs);
        case ExprKind::UnOp:
            return a->name == b->name && ast_eq(a->operand, b->operand);
        case ExprKind::If:
            return ast_eq(a->cond, b->cond) && a->has_else == b->has_else &&
                   ast_eq_seq(a->then_seq, b->then_seq) && ast_eq_seq(a->else_seq, b->else_seq);
        case ExprKind::Query:
            return ast_eq(*a->query, *b->query);
    }
    return false;
}

inline bool ast_eq(const Script& a, const Script& b) {
    if (a.statements.size() != b.statements.size()) return false;
    for (std::size_t i = 0; i < a.statements.size(); ++i) {
        const Statement& sa = a.statements[i];
        const Statement& sb = b.statements[i];
        if (sa.is_assign != sb.is_assign || sa.target != sb.target ||
            sa.ttl_seconds != sb.ttl_seconds || !ast_eq(sa.expr, sb.expr))
            return false;
    }
    return true;
}

} // namespace hquery

#endif
