#ifndef HQUERY_TEST_HELPERS_HPP
#define HQUERY_TEST_HELPERS_HPP

#include <hquery/hquery.hpp>

#include <algorithm>
#include <array>
#include <random>
#include <set>

// Test-only oracles and generators. These stay independent of the
// implementation paths they check.
namespace testutil {

using namespace hquery;

// ---- random nested values ----

inline Value random_value(std::mt19937& rng, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth >= 3 ? 4 : 6);
    switch (pick(rng)) {
        case 0: return Value();
        case 1: return Value(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
        case 2: return Value(std::int64_t{std::uniform_int_distribution<int>(-100, 100)(rng)});
        case 3: {
            double d = std::uniform_real_distribution<double>(-100.0, 100.0)(rng);
            return Value(d);
        }
        case 4: {
            static const char* words[] = {"", "a", "ab", "hello", "x y", "q\"z", "tab\there"};
            return Value(std::string(words[std::uniform_int_distribution<int>(0, 6)(rng)]));
        }
        case 5: {
            List items;
            int n = std::uniform_int_distribution<int>(0, 3)(rng);
            for (int i = 0; i < n; ++i) items.push_back(random_value(rng, depth + 1));
            return Value(std::move(items));
        }
        default: {
            Dict d;
            int n = std::uniform_int_distribution<int>(0, 3)(rng);
            for (int i = 0; i < n; ++i) {
                std::string key(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 5)(rng)));
                d[key] = random_value(rng, depth + 1);
            }
            return Value(std::move(d));
        }
    }
}

// ---- Hanoi oracles (independent of worlds::hanoi_move) ----

// Tower configuration as 3 stacks of disk sizes, top = back.
using Towers = std::array<std::vector<int>, 3>;

inline Towers initial_towers(int disks) {
    Towers t;
    for (int d = disks; d >= 1; --d) t[0].push_back(d);
    return t;
}

inline Towers goal_towers(int disks) {
    Towers t;
    for (int d = disks; d >= 1; --d) t[2].push_back(d);
    return t;
}

inline bool oracle_move(const Towers& in, int from, int to, Towers& out) {
    if (in[from].empty()) return false;
    int disk = in[from].back();
    if (!in[to].empty() && in[to].back() <= disk) return false;
    out = in;
    out[from].pop_back();
    out[to].push_back(disk);
    return true;
}

inline const std::array<std::pair<int, int>, 6>& hanoi_steps() {
    static const std::array<std::pair<int, int>, 6> steps = {
        {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}};
    return steps;
}

inline Value towers_value(const Towers& t) {
    List out;
    for (const auto& tower : t) {
        List l;
        for (int d : tower) l.push_back(Value(std::int64_t{d}));
        out.push_back(Value(std::move(l)));
    }
    return Value(std::move(out));
}

inline std::string towers_key(const Towers& t) { return serialize(towers_value(t)); }

// Brute-force enumeration of all step sequences of length <= max_len whose
// prefixes are valid moves and whose final step reaches the goal. Mirrors
// the DFS emission rule: the goal-reaching step itself must be valid, and
// goal states passed through mid-sequence do not stop the search.
inline void oracle_hanoi_sequences(const Towers& state, const Towers& goal, int max_len,
                                   std::vector<std::pair<int, int>>& prefix,
                                   std::vector<std::vector<std::pair<int, int>>>& results) {
    if (static_cast<int>(prefix.size()) >= max_len) return;
    for (const auto& [from, to] : hanoi_steps()) {
        Towers next;
        if (!oracle_move(state, from, to, next)) continue;
        prefix.push_back({from, to});
        if (next == goal) results.push_back(prefix);
        oracle_hanoi_sequences(next, goal, max_len, prefix, results);
        prefix.pop_back();
    }
}

// ---- simple-path oracle over an explicit directed graph ----

struct OracleGraph {
    int nodes = 0;
    std::vector<std::vector<int>> out;            // adjacency
    std::vector<char> terminal;                   // node has a goal emission
};

// All simple paths (as node sequences, root excluded) from root to a
// terminal node, path length counted as edges + the terminal emission.
inline void oracle_simple_paths(const OracleGraph& g, int node, int max_len,
                                std::vector<char>& visited, std::vector<int>& path,
                                std::vector<std::vector<int>>& results) {
    if (g.terminal[node] && static_cast<int>(path.size()) + 1 <= max_len) {
        results.push_back(path); // terminal emission is implicit
    }
    if (static_cast<int>(path.size()) + 1 >= max_len) return;
    for (int next : g.out[node]) {
        if (visited[next]) continue;
        visited[next] = 1;
        path.push_back(next);
        oracle_simple_paths(g, next, max_len, visited, path, results);
        path.pop_back();
        visited[next] = 0;
    }
}

// ---- grid path-counting oracle (8-connected, free cells only) ----

inline int count_grid_paths(const worlds::GridMap& map, std::int64_t x, std::int64_t y,
                            std::set<std::pair<std::int64_t, std::int64_t>>& visited,
                            int remaining) {
    static const int dirs[8][2] = {{0, 1}, {0, -1}, {1, -1}, {-1, -1},
                                   {1, 0}, {-1, 0}, {-1, 1}, {1, 1}};
    if (remaining == 0) return 0;
    int total = 0;
    for (const auto& d : dirs) {
        std::int64_t nx = x + d[0], ny = y + d[1];
        if (!map.in_bounds(nx, ny) || map.is_obstacle(nx, ny)) continue;
        if (nx == map.goal_x && ny == map.goal_y) {
            ++total;
            continue; // goal step terminates a path; no recursion through it
        }
        if (visited.count({nx, ny})) continue;
        visited.insert({nx, ny});
        total += count_grid_paths(map, nx, ny, visited, remaining - 1);
        visited.erase({nx, ny});
    }
    return total;
}

inline int count_grid_paths(const worlds::GridMap& map, int max_len) {
    std::set<std::pair<std::int64_t, std::int64_t>> visited{{map.start_x, map.start_y}};
    return count_grid_paths(map, map.start_x, map.start_y, visited, max_len);
}

// ---- random script generator (grammar-driven, round-trip safe) ----
//
// Produces ASTs whose pretty-printed form re-parses to a structurally equal
// tree. Two deliberate restrictions keep the round trip exact: numeric
// literals are non-negative (a negative literal re-parses as unary minus),
// and identifiers avoid the contextual ORDER BY markers ASC/DESC.

namespace scriptgen {

inline const std::vector<std::string>& name_pool() {
    static const std::vector<std::string> pool = {
        "alpha", "beta", "gamma", "delta", "foo", "bar", "baz", "qux",
    };
    return pool;
}

inline std::string pick_name(std::mt19937& rng) {
    const auto& pool = name_pool();
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

ExprPtr random_expr(std::mt19937& rng, int depth);

inline std::shared_ptr<Expr> node(ExprKind kind) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    return e;
}

inline std::vector<ExprPtr> random_seq(std::mt19937& rng, int depth, int min_n, int max_n) {
    int n = std::uniform_int_distribution<int>(min_n, max_n)(rng);
    std::vector<ExprPtr> out;
    for (int i = 0; i < n; ++i) out.push_back(random_expr(rng, depth));
    return out;
}

inline std::vector<Binding> random_binds(std::mt19937& rng, int depth, int n) {
    std::vector<Binding> out;
    std::vector<std::string> names = name_pool();
    std::shuffle(names.begin(), names.end(), rng);
    for (int i = 0; i < n; ++i) out.push_back({names[static_cast<std::size_t>(i)],
                                               random_expr(rng, depth)});
    return out;
}

inline std::shared_ptr<SelectQuery> random_query(std::mt19937& rng, int depth) {
    auto q = std::make_shared<SelectQuery>();
    q->select = random_seq(rng, depth + 1, 1, 2);
    int nfrom = std::uniform_int_distribution<int>(1, 2)(rng);
    std::vector<std::string> from_names = name_pool();
    std::shuffle(from_names.begin(), from_names.end(), rng);
    for (int i = 0; i < nfrom; ++i) {
        FromItem item;
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
            item.name = from_names[static_cast<std::size_t>(i)];
        item.expr = random_expr(rng, depth + 1);
        q->from.push_back(std::move(item));
    }
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
        q->where = random_expr(rng, depth + 1);
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0)
        q->group_by = random_seq(rng, depth + 1, 1, 2);
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        int n = std::uniform_int_distribution<int>(1, 2)(rng);
        for (int i = 0; i < n; ++i) {
            OrderItem item;
            item.expr = random_expr(rng, depth + 1);
            item.descending = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
            q->order_by.push_back(std::move(item));
        }
    }
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        Hierarchy h;
        h.start = random_binds(rng, depth + 1, std::uniform_int_distribution<int>(1, 2)(rng));
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
            case 0: h.mode = SearchMode::DefaultDfs; break;
            case 1: h.mode = SearchMode::NoCycle; break;
            case 2: h.mode = SearchMode::Unique; break;
            default:
                h.mode = SearchMode::Memorize;
                h.memorize_len = std::uniform_int_distribution<std::int64_t>(1, 9)(rng);
        }
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
            h.maximum = std::uniform_int_distribution<std::int64_t>(1, 99)(rng);
        h.updates = random_binds(rng, depth + 1, std::uniform_int_distribution<int>(1, 2)(rng));
        h.stop = random_expr(rng, depth + 1);
        q->hierarchy = std::move(h);
    }
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
        AsSpec spec;
        static const char* formats[] = {"value", "list", "dict", "grid"};
        spec.name = formats[std::uniform_int_distribution<int>(0, 3)(rng)];
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
            spec.has_parens = true;
            spec.args = random_seq(rng, depth + 1, 0, 2);
        }
        q->as_spec = std::move(spec);
    }
    return q;
}

inline ExprPtr random_expr(std::mt19937& rng, int depth) {
    int max_kind = depth >= 4 ? 3 : 9;
    switch (std::uniform_int_distribution<int>(0, max_kind)(rng)) {
        case 0: { // literal (scalars only; lists print as list expressions)
            switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
                case 0: {
                    auto e = node(ExprKind::Literal);
                    e->literal = Value(std::int64_t{std::uniform_int_distribution<int>(0, 999)(rng)});
                    return e;
                }
                case 1: {
                    auto e = node(ExprKind::Literal);
                    e->literal =
                        Value(std::uniform_int_distribution<int>(0, 4000)(rng) / 8.0);
                    return e;
                }
                case 2: {
                    auto e = node(ExprKind::Literal);
                    static const char* words[] = {"", "a", "hello", "two words", "x_1"};
                    e->literal = Value(std::string(
                        words[std::uniform_int_distribution<int>(0, 4)(rng)]));
                    return e;
                }
                case 3: {
                    auto e = node(ExprKind::Literal);
                    e->literal = Value(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
                    return e;
                }
                default:
                    return node(ExprKind::Literal); // none
            }
        }
        case 1: {
            auto e = node(ExprKind::Var);
            e->name = pick_name(rng);
            return e;
        }
        case 2: {
            auto e = node(ExprKind::ThisRef);
            if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) e->name = pick_name(rng);
            return e;
        }
        case 3: {
            auto e = node(ExprKind::ListExpr);
            e->args = random_seq(rng, depth + 1, 0, 3);
            return e;
        }
        case 4: {
            auto e = node(ExprKind::Call);
            e->name = pick_name(rng);
            e->args = random_seq(rng, depth + 1, 0, 3);
            return e;
        }
        case 5: case 6: {
            auto e = node(ExprKind::BinOp);
            static const char* ops[] = {"+", "-", "*", "/", "==", "!=",
                                        "<", "<=", ">", ">=", "AND", "OR"};
            e->name = ops[std::uniform_int_distribution<int>(0, 11)(rng)];
            e->lhs = random_expr(rng, depth + 1);
            e->rhs = random_expr(rng, depth + 1);
            return e;
        }
        case 7: {
            auto e = node(ExprKind::UnOp);
            e->name = std::uniform_int_distribution<int>(0, 1)(rng) == 1 ? "-" : "NOT";
            e->operand = random_expr(rng, depth + 1);
            return e;
        }
        case 8: {
            auto e = node(ExprKind::If);
            e->cond = random_expr(rng, depth + 1);
            e->then_seq = random_seq(rng, depth + 1, 1, 2);
            if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
                e->has_else = true;
                e->else_seq = random_seq(rng, depth + 1, 1, 2);
            }
            return e;
        }
        default: {
            auto e = node(ExprKind::Query);
            e->query = random_query(rng, depth + 1);
            return e;
        }
    }
}

inline Script random_script(std::mt19937& rng) {
    Script script;
    int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < n; ++i) {
        Statement stmt;
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
            stmt.is_assign = true;
            stmt.target = pick_name(rng);
            if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
                stmt.ttl_seconds = std::uniform_int_distribution<int>(1, 40)(rng) / 4.0;
        }
        stmt.expr = random_expr(rng, 0);
        script.statements.push_back(std::move(stmt));
    }
    return script;
}

} // namespace scriptgen

} // namespace testutil

#endif
