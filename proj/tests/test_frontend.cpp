#include "helpers.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace hquery;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const Expr& only_expr(const Script& s) {
    REQUIRE(s.statements.size() == 1);
    return *s.statements[0].expr;
}

} // namespace

TEST_CASE("lexer: keywords are case-insensitive and normalized") {
    auto toks = tokenize("select FROM Where gRoUp");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0].kind == TokenKind::Keyword);
    CHECK(toks[0].text == "SELECT");
    CHECK(toks[1].text == "FROM");
    CHECK(toks[2].text == "WHERE");
    CHECK(toks[3].text == "GROUP");
    CHECK(toks[4].kind == TokenKind::EndOfInput);
}

TEST_CASE("lexer: MEMORIZE 15 and punctuation") {
    auto toks = tokenize("CONNECT BY MEMORIZE 15 tower = move(this, tower)");
    CHECK(toks[0].text == "CONNECT");
    CHECK(toks[2].text == "MEMORIZE");
    CHECK(toks[3].kind == TokenKind::IntLiteral);
    CHECK(toks[3].text == "15");
    CHECK(toks[4].kind == TokenKind::Identifier);
    CHECK(toks[4].text == "tower");
    CHECK(toks[5].kind == TokenKind::Operator);
    CHECK(toks[5].text == "=");
    CHECK(toks[6].kind == TokenKind::Identifier);
    CHECK(toks[7].text == "(");
    CHECK(toks[8].kind == TokenKind::Keyword); // THIS
    CHECK(toks[8].text == "THIS");
}

TEST_CASE("lexer: numbers") {
    auto toks = tokenize("3 3.5 1e3 2.5e-2 7e");
    CHECK(toks[0].kind == TokenKind::IntLiteral);
    CHECK(toks[1].kind == TokenKind::FloatLiteral);
    CHECK(toks[2].kind == TokenKind::FloatLiteral);
    CHECK(toks[2].text == "1e3");
    CHECK(toks[3].kind == TokenKind::FloatLiteral);
    // "7e" is an int followed by an identifier (exponent backtracking)
    CHECK(toks[4].kind == TokenKind::IntLiteral);
    CHECK(toks[4].text == "7");
    CHECK(toks[5].kind == TokenKind::Identifier);
    CHECK(toks[5].text == "e");
}

TEST_CASE("lexer: strings, escapes, both quote styles") {
    auto toks = tokenize(R"( "a\nb" 'it''s' "q\"z" )");
    CHECK(toks[0].kind == TokenKind::StringLiteral);
    CHECK(toks[0].value == "a\nb");
    CHECK(toks[1].value == "it");
    CHECK(toks[2].value == "s");
    CHECK(toks[3].value == "q\"z");
}

TEST_CASE("lexer: comments and positions") {
    auto toks = tokenize("x # trailing\n  y");
    CHECK(toks[0].text == "x");
    CHECK(toks[0].line == 1);
    CHECK(toks[1].text == "y");
    CHECK(toks[1].line == 2);
    CHECK(toks[1].column == 3);
}

TEST_CASE("lexer: unexpected character reports a lex error") {
    try {
        tokenize("a $ b");
        FAIL("expected a lex error");
    } catch (const ScriptError& e) {
        CHECK(e.kind() == ErrorKind::Lex);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("reserved words: full set and identifier validity") {
    CHECK(reserved_words().size() == 24);
    CHECK(is_reserved_word("select"));
    CHECK(is_reserved_word("Memorize"));
    CHECK(is_reserved_word("this"));
    CHECK_FALSE(is_reserved_word("asc"));
    CHECK_FALSE(is_reserved_word("desc"));
    CHECK(is_valid_identifier("foo_1"));
    CHECK(is_valid_identifier("_x"));
    CHECK_FALSE(is_valid_identifier("1a"));
    CHECK_FALSE(is_valid_identifier(""));
    CHECK_FALSE(is_valid_identifier("where"));
}

TEST_CASE("parser: assignment, temporal assignment, multi-statement") {
    Script s = parse("a = 1; b{2.5} = a + 1; [a, b];");
    REQUIRE(s.statements.size() == 3);
    CHECK(s.statements[0].is_assign);
    CHECK(s.statements[0].target == "a");
    CHECK_FALSE(s.statements[0].ttl_seconds.has_value());
    CHECK(s.statements[1].target == "b");
    REQUIRE(s.statements[1].ttl_seconds.has_value());
    CHECK(*s.statements[1].ttl_seconds == 2.5);
    CHECK_FALSE(s.statements[2].is_assign);
    CHECK(s.statements[2].expr->kind == ExprKind::ListExpr);
}

TEST_CASE("parser: trailing semicolon optional on last statement") {
    CHECK(parse("1 + 2").statements.size() == 1);
    CHECK(parse("1 + 2;").statements.size() == 1);
    CHECK_THROWS_AS(parse("1 + 2 3"), ScriptError);
}

TEST_CASE("parser: precedence and associativity") {
    const Expr& e = only_expr(parse("1 + 2 * 3 == 7 AND NOT a OR b;"));
    REQUIRE(e.kind == ExprKind::BinOp);
    CHECK(e.name == "OR");
    REQUIRE(e.lhs->kind == ExprKind::BinOp);
    CHECK(e.lhs->name == "AND");
    CHECK(e.lhs->lhs->name == "==");
    CHECK(e.lhs->lhs->lhs->name == "+");
    CHECK(e.lhs->lhs->lhs->rhs->name == "*");
    CHECK(e.lhs->rhs->kind == ExprKind::UnOp);
    CHECK(e.lhs->rhs->name == "NOT");
    CHECK(e.rhs->kind == ExprKind::Var);
}

TEST_CASE("parser: unary minus binds tighter than multiplication") {
    const Expr& e = only_expr(parse("-a * b;"));
    CHECK(e.name == "*");
    CHECK(e.lhs->kind == ExprKind::UnOp);
}

TEST_CASE("parser: this forms") {
    const Expr& bare = only_expr(parse("this;"));
    CHECK(bare.kind == ExprKind::ThisRef);
    CHECK(bare.name.empty());
    const Expr& named = only_expr(parse("m1.this;"));
    CHECK(named.kind == ExprKind::ThisRef);
    CHECK(named.name == "m1");
    CHECK_THROWS_AS(parse("m1.x;"), ScriptError);
}

TEST_CASE("parser: IF forms") {
    const Expr& no_else = only_expr(parse("IF(c; a(), true);"));
    REQUIRE(no_else.kind == ExprKind::If);
    CHECK_FALSE(no_else.has_else);
    CHECK(no_else.then_seq.size() == 2);

    const Expr& with_else = only_expr(parse("IF(true; 1, 2; 9);"));
    CHECK(with_else.has_else);
    CHECK(with_else.then_seq.size() == 2);
    CHECK(with_else.else_seq.size() == 1);
}

TEST_CASE("parser: query shape of the depth-first tower script") {
    std::string src = read_file(std::string(HQUERY_DATA_DIR) + "/hanoi_basic.sss");
    Script s = parse(src);
    REQUIRE(s.statements.size() == 2);
    const Expr& e = *s.statements[1].expr;
    REQUIRE(e.kind == ExprKind::Query);
    const SelectQuery& q = *e.query;
    REQUIRE(q.select.size() == 1);
    CHECK(q.select[0]->kind == ExprKind::ThisRef);
    REQUIRE(q.from.size() == 1);
    CHECK(q.from[0].name.empty());
    REQUIRE(q.where != nullptr);
    REQUIRE(q.hierarchy.has_value());
    const Hierarchy& h = *q.hierarchy;
    CHECK(h.mode == SearchMode::DefaultDfs);
    REQUIRE(h.start.size() == 2);
    CHECK(h.start[0].name == "tower");
    CHECK(h.start[1].name == "level");
    REQUIRE(h.updates.size() == 2);
    CHECK(h.updates[0].name == "tower");
    REQUIRE(h.stop != nullptr);
    CHECK(h.stop->name == "OR");
}

TEST_CASE("parser: named sources and seven-way product") {
    std::string src = read_file(std::string(HQUERY_DATA_DIR) + "/hanoi_vanilla.sss");
    Script s = parse(src);
    const SelectQuery& q = *s.statements[1].expr->query;
    REQUIRE(q.from.size() == 7);
    CHECK(q.from[0].name == "m1");
    CHECK(q.from[6].name == "m7");
    REQUIRE(q.select.size() == 7);
    CHECK(q.select[0]->kind == ExprKind::ThisRef);
    CHECK(q.select[0]->name == "m1");
    REQUIRE(q.as_spec.has_value());
    CHECK(q.as_spec->name == "list");
    CHECK_FALSE(q.hierarchy.has_value());
}

TEST_CASE("parser: search strategy clauses") {
    auto query_of = [](const std::string& strategies) {
        std::string src = "SELECT this FROM m START WITH t = 1 CONNECT BY " + strategies +
                          " t = t + 1 STOP WITH t > 3;";
        return parse(src).statements[0].expr->query;
    };
    CHECK(query_of("")->hierarchy->mode == SearchMode::DefaultDfs);
    CHECK(query_of("NO CYCLE")->hierarchy->mode == SearchMode::NoCycle);
    CHECK(query_of("UNIQUE")->hierarchy->mode == SearchMode::Unique);
    auto mem = query_of("MEMORIZE 15");
    CHECK(mem->hierarchy->mode == SearchMode::Memorize);
    CHECK(mem->hierarchy->memorize_len == 15);
    auto capped = query_of("MEMORIZE 20 MAXIMUM 1000");
    CHECK(capped->hierarchy->memorize_len == 20);
    CHECK(capped->hierarchy->maximum == 1000);
    auto flipped = query_of("MAXIMUM 5 UNIQUE");
    CHECK(flipped->hierarchy->mode == SearchMode::Unique);
    CHECK(flipped->hierarchy->maximum == 5);

    CHECK_THROWS_AS(query_of("NO CYCLE UNIQUE"), ScriptError);
    CHECK_THROWS_AS(query_of("MEMORIZE 0"), ScriptError);
    CHECK_THROWS_AS(query_of("MAXIMUM 0"), ScriptError);
    CHECK_THROWS_AS(query_of("MEMORIZE"), ScriptError);
}

TEST_CASE("parser: ORDER BY with contextual ASC/DESC") {
    Script s = parse("SELECT a FROM b ORDER BY a DESC, c asc, d;");
    const SelectQuery& q = *s.statements[0].expr->query;
    REQUIRE(q.order_by.size() == 3);
    CHECK(q.order_by[0].descending);
    CHECK_FALSE(q.order_by[1].descending);
    CHECK_FALSE(q.order_by[2].descending);
    // asc/desc stay plain identifiers outside ORDER BY
    CHECK(parse("asc = 1; desc = asc;").statements.size() == 2);
}

TEST_CASE("parser: reserved words rejected as assignment targets") {
    CHECK_THROWS_AS(parse("select = 1;"), ScriptError);
    CHECK_THROWS_AS(parse("WHERE = 1;"), ScriptError);
    CHECK_THROWS_AS(parse("true = 1;"), ScriptError);
}

TEST_CASE("parser: error positions carried through") {
    try {
        parse("a =\n   ;");
        FAIL("expected a parse error");
    } catch (const ScriptError& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(e.line() == 2);
    }
}

TEST_CASE("parser: all shipped scripts parse") {
    const char* names[] = {
        "hanoi_vanilla.sss", "hanoi_basic.sss", "hanoi_nocycle.sss",
        "hanoi_unique.sss",  "hanoi_memorize.sss", "robot_nav.sss",
        "spheres.sss",       "projection.sss",  "grid_demo.sss",
    };
    for (const char* name : names) {
        CAPTURE(name);
        std::string src = read_file(std::string(HQUERY_DATA_DIR) + "/" + name);
        CHECK_NOTHROW(parse(src));
    }
}

TEST_CASE("printer: canonical examples") {
    CHECK(pretty_print(parse("1+2*3;")) == "1 + 2 * 3;\n");
    CHECK(pretty_print(parse("(1+2)*3;")) == "(1 + 2) * 3;\n");
    CHECK(pretty_print(parse("IF(c; a(), true);")) == "IF(c; a(), true);\n");
    CHECK(pretty_print(parse("x = NOT (a OR b);")) == "x = NOT (a OR b);\n");
    CHECK(pretty_print(parse("select this from m as list;")) ==
          "SELECT this FROM m AS list;\n");
}

TEST_CASE("property: pretty-print/parse round trip on random scripts") {
    std::mt19937 rng(20260824);
    for (int i = 0; i < 500; ++i) {
        CAPTURE(i);
        Script script = testutil::scriptgen::random_script(rng);
        std::string text = pretty_print(script);
        CAPTURE(text);
        Script reparsed = parse(text);
        REQUIRE(ast_eq(script, reparsed));
        // printing is a fixed point after one round
        CHECK(pretty_print(reparsed) == text);
    }
}
