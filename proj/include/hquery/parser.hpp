#ifndef HQUERY_PARSER_HPP
#define HQUERY_PARSER_HPP

#include "ast.hpp"
#include "lexer.hpp"

#include <charconv>
#include <cstdlib>

namespace hquery {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Script parse_script() {
        Script script;
        script.statements.push_back(parse_statement());
        while (at_punct(";")) {
            consume();
            if (at_end()) break;
            script.statements.push_back(parse_statement());
        }
        if (!at_end()) fail("expected ';' or end of script");
        return script;
    }

private:
    // ---- statements ----

    Statement parse_statement() {
        Statement stmt;
        if (peek().kind == TokenKind::Identifier &&
            (is_op_at(1, "=") || is_punct_at(1, "{"))) {
            stmt.is_assign = true;
            stmt.target = consume().text;
            if (at_punct("{")) {
                consume();
                const Token& num = peek();
                if (num.kind != TokenKind::IntLiteral && num.kind != TokenKind::FloatLiteral)
                    fail("expected a number inside '{...}'");
                stmt.ttl_seconds = std::strtod(consume().text.c_str(), nullptr);
                expect_punct("}");
            }
            expect_op("=");
            stmt.expr = parse_expr();
        } else {
            stmt.expr = parse_expr();
        }
        return stmt;
    }

    // ---- expressions (precedence climbing per grammar) ----

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (at_keyword("OR")) {
            consume();
            e = binop("OR", e, parse_and());
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_not();
        while (at_keyword("AND")) {
            consume();
            e = binop("AND", e, parse_not());
        }
        return e;
    }

    ExprPtr parse_not() {
        if (at_keyword("NOT")) {
            Token tok = consume();
            auto node = std::make_shared<Expr>();
            node->kind = ExprKind::UnOp;
            node->name = "NOT";
            node->operand = parse_not();
            node->line = tok.line;
            node->column = tok.column;
            return node;
        }
        return parse_cmp();
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_sum();
        static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
        for (const char* op : ops) {
            if (at_op(op)) {
                consume();
                return binop(op, e, parse_sum());
            }
        }
        return e;
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_prod();
        while (at_op("+") || at_op("-")) {
            std::string op = consume().text;
            e = binop(op, e, parse_prod());
        }
        return e;
    }

    ExprPtr parse_prod() {
        ExprPtr e = parse_unary();
        while (at_op("*") || at_op("/")) {
            std::string op = consume().text;
            e = binop(op, e, parse_unary());
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at_op("-")) {
            Token tok = consume();
            auto node = std::make_shared<Expr>();
            node->kind = ExprKind::UnOp;
            node->name = "-";
            node->operand = parse_unary();
            node->line = tok.line;
            node->column = tok.column;
            return node;
        }
        return parse_prim();
    }

    ExprPtr parse_prim() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::IntLiteral: {
                Token t = consume();
                std::int64_t v = 0;
                auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (res.ec != std::errc{})
                    throw ScriptError(ErrorKind::Parse, "integer literal out of range",
                                      t.line, t.column);
                return literal(Value(v), t);
            }
            case TokenKind::FloatLiteral: {
                Token t = consume();
                return literal(Value(std::strtod(t.text.c_str(), nullptr)), t);
            }
            case TokenKind::StringLiteral: {
                Token t = consume();
                return literal(Value(t.value), t);
            }
            case TokenKind::Keyword: {
                if (tok.text == "TRUE") return literal(Value(true), consume());
                if (tok.text == "FALSE") return literal(Value(false), consume());
                if (tok.text == "NONE") return literal(Value(), consume());
                if (tok.text == "THIS") {
                    Token t = consume();
                    auto node = std::make_shared<Expr>();
                    node->kind = ExprKind::ThisRef;
                    node->line = t.line;
                    node->column = t.column;
                    return node;
                }
                if (tok.text == "IF") return parse_if();
                if (tok.text == "SELECT") return parse_query();
                fail("unexpected keyword '" + tok.text + "'");
            }
            case TokenKind::Identifier:
                return parse_ident_prim();
            case TokenKind::Punctuation:
                if (tok.text == "(") {
                    consume();
                    ExprPtr e = parse_expr();
                    expect_punct(")");
                    return e;
                }
                if (tok.text == "[") return parse_list();
                fail("unexpected '" + tok.text + "'");
            default:
                fail("unexpected end of input");
        }
        return nullptr; // unreachable
    }

    ExprPtr parse_ident_prim() {
        Token name = consume();
        auto node = std::make_shared<Expr>();
        node->line = name.line;
        node->column = name.column;
        if (at_punct("(")) {
            consume();
            node->kind = ExprKind::Call;
            node->name = name.text;
            if (!at_punct(")")) node->args = parse_arglist();
            expect_punct(")");
            return node;
        }
        if (at_punct(".")) {
            consume();
            if (!at_keyword("THIS")) fail("expected 'this' after '.'");
            consume();
            node->kind = ExprKind::ThisRef;
            node->name = name.text;
            return node;
        }
        node->kind = ExprKind::Var;
        node->name = name.text;
        return node;
    }

    ExprPtr parse_list() {
        Token open = consume(); // '['
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::ListExpr;
        node->line = open.line;
        node->column = open.column;
        if (!at_punct("]")) node->args = parse_arglist();
        expect_punct("]");
        return node;
    }

    ExprPtr parse_if() {
        Token kw = consume(); // IF
        expect_punct("(");
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::If;
        node->line = kw.line;
        node->column = kw.column;
        node->cond = parse_expr();
        expect_punct(";");
        node->then_seq = parse_arglist();
        if (at_punct(";")) {
            consume();
            node->has_else = true;
            node->else_seq = parse_arglist();
        }
        expect_punct(")");
        return node;
    }

    std::vector<ExprPtr> parse_arglist() {
        std::vector<ExprPtr> items;
        items.push_back(parse_expr());
        while (at_punct(",")) {
            consume();
            items.push_back(parse_expr());
        }
        return items;
    }

    // ---- queries ----

    ExprPtr parse_query() {
        Token kw = consume(); // SELECT
        auto q = std::make_shared<SelectQuery>();
        q->select = parse_arglist();
        expect_keyword("FROM");
        q->from.push_back(parse_from_item());
        while (at_punct(",")) {
            consume();
            q->from.push_back(parse_from_item());
        }
        if (at_keyword("WHERE")) {
            consume();
            q->where = parse_expr();
        }
        if (at_keyword("GROUP")) {
            consume();
            expect_keyword("BY");
            q->group_by = parse_arglist();
        }
        if (at_keyword("ORDER")) {
            consume();
            expect_keyword("BY");
            q->order_by = parse_orderlist();
        }
        if (at_keyword("START")) q->hierarchy = parse_hierarchy();
        if (at_keyword("AS")) {
            consume();
            if (peek().kind != TokenKind::Identifier) fail("expected format name after AS");
            AsSpec spec;
            spec.name = consume().text;
            if (at_punct("(")) {
                consume();
                spec.has_parens = true;
                if (!at_punct(")")) spec.args = parse_arglist();
                expect_punct(")");
            }
            q->as_spec = std::move(spec);
        }
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::Query;
        node->query = q;
        node->line = kw.line;
        node->column = kw.column;
        return node;
    }

    FromItem parse_from_item() {
        FromItem item;
        if (peek().kind == TokenKind::Identifier && is_op_at(1, "=")) {
            item.name = consume().text;
            consume(); // '='
        }
        item.expr = parse_expr();
        return item;
    }

    std::vector<OrderItem> parse_orderlist() {
        std::vector<OrderItem> items;
        while (true) {
            OrderItem item;
            item.expr = parse_expr();
            // ASC/DESC are contextual (plain identifiers elsewhere)
            if (peek().kind == TokenKind::Identifier) {
                std::string upper = peek().text;
                std::transform(upper.begin(), upper.end(), upper.begin(),
                               [](unsigned char c) { return std::toupper(c); });
                if (upper == "ASC") {
                    consume();
                } else if (upper == "DESC") {
                    consume();
                    item.descending = true;
                }
            }
            items.push_back(std::move(item));
            if (!at_punct(",")) break;
            consume();
        }
        return items;
    }

    Hierarchy parse_hierarchy() {
        Hierarchy h;
        expect_keyword("START");
        expect_keyword("WITH");
        h.start = parse_bindlist();
        expect_keyword("CONNECT");
        expect_keyword("BY");
        bool mode_set = false;
        while (true) {
            if (at_keyword("NO")) {
                Token t = consume();
                expect_keyword("CYCLE");
                set_mode(h, SearchMode::NoCycle, mode_set, t);
            } else if (at_keyword("UNIQUE")) {
                Token t = consume();
                set_mode(h, SearchMode::Unique, mode_set, t);
            } else if (at_keyword("MEMORIZE")) {
                Token t = consume();
                set_mode(h, SearchMode::Memorize, mode_set, t);
                h.memorize_len = strategy_int("MEMORIZE");
            } else if (at_keyword("MAXIMUM")) {
                Token t = consume();
                if (h.maximum)
                    throw ScriptError(ErrorKind::Parse, "duplicate MAXIMUM", t.line, t.column);
                h.maximum = strategy_int("MAXIMUM");
            } else {
                break;
            }
        }
        h.updates = parse_bindlist();
        expect_keyword("STOP");
        expect_keyword("WITH");
        h.stop = parse_expr();
        return h;
    }

    void set_mode(Hierarchy& h, SearchMode mode, bool& mode_set, const Token& at) {
        if (mode_set)
            throw ScriptError(ErrorKind::Parse,
                              "at most one of NO CYCLE, UNIQUE, MEMORIZE per query",
                              at.line, at.column);
        h.mode = mode;
        mode_set = true;
    }

    std::int64_t strategy_int(const char* kw) {
        const Token& tok = peek();
        if (tok.kind != TokenKind::IntLiteral)
            fail(std::string("expected integer after ") + kw);
        std::int64_t v = std::strtoll(consume().text.c_str(), nullptr, 10);
        if (v < 1)
            throw ScriptError(ErrorKind::Parse, std::string(kw) + " argument must be >= 1",
                              tok.line, tok.column);
        return v;
    }

    std::vector<Binding> parse_bindlist() {
        std::vector<Binding> binds;
        while (true) {
            Binding b;
            if (peek().kind != TokenKind::Identifier) fail("expected variable name");
            b.name = consume().text;
            expect_op("=");
            b.expr = parse_expr();
            binds.push_back(std::move(b));
            if (!at_punct(",")) break;
            consume();
        }
        return binds;
    }

    // ---- helpers ----

    ExprPtr literal(Value v, const Token& tok) {
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::Literal;
        node->literal = std::move(v);
        node->line = tok.line;
        node->column = tok.column;
        return node;
    }

    ExprPtr binop(const std::string& op, ExprPtr l, ExprPtr r) {
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::BinOp;
        node->name = op;
        node->lhs = std::move(l);
        node->rhs = std::move(r);
        node->line = node->lhs->line;
        node->column = node->lhs->column;
        return node;
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    Token consume() { return tokens_[pos_++]; }

    bool at_end() const { return peek().kind == TokenKind::EndOfInput; }

    bool at_keyword(std::string_view kw) const {
        return peek().kind == TokenKind::Keyword && peek().text == kw;
    }

    bool at_op(std::string_view op) const {
        return peek().kind == TokenKind::Operator && peek().text == op;
    }

    bool at_punct(std::string_view p) const {
        return peek().kind == TokenKind::Punctuation && peek().text == p;
    }

    bool is_op_at(std::size_t ahead, std::string_view op) const {
        return peek(ahead).kind == TokenKind::Operator && peek(ahead).text == op;
    }

    bool is_punct_at(std::size_t ahead, std::string_view p) const {
        return peek(ahead).kind == TokenKind::Punctuation && peek(ahead).text == p;
    }

    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail(std::string("expected ") + std::string(kw));
        consume();
    }

    void expect_op(std::string_view op) {
        if (!at_op(op)) fail(std::string("expected '") + std::string(op) + "'");
        consume();
    }

    void expect_punct(std::string_view p) {
        if (!at_punct(p)) fail(std::string("expected '") + std::string(p) + "'");
        consume();
    }

    [[noreturn]] void fail(const std::string& message) {
        const Token& tok = peek();
        std::string got = tok.kind == TokenKind::EndOfInput
                              ? "end of input"
                              : "'" + tok.text + "'";
        throw ScriptError(ErrorKind::Parse, message + ", got " + got, tok.line, tok.column);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

inline Script parse(std::vector<Token> tokens) {
    return Parser(std::move(tokens)).parse_script();
}

inline Script parse(std::string_view source) {
    return Parser(tokenize(source)).parse_script();
}

} // namespace hquery

#endif
