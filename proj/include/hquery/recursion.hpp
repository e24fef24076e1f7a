#ifndef HQUERY_RECURSION_HPP
#define HQUERY_RECURSION_HPP

#include "interpreter.hpp"

#include <deque>
#include <set>

namespace hquery {

// Deduplicated state graph materialized by MEMORIZE.
struct StateGraph {
    struct Edge {
        int to;
        Value projection;
    };

    std::vector<std::vector<Edge>> out;        // per node, discovery order
    std::vector<std::vector<Value>> terminals; // goal projections per node
    std::vector<int> dist;                     // BFS distance from root
    std::map<std::string, int> ids;            // state key -> node id
    int root = 0;

    int add_node(const std::string& key, int distance) {
        int id = static_cast<int>(out.size());
        ids.emplace(key, id);
        out.emplace_back();
        terminals.emplace_back();
        dist.push_back(distance);
        return id;
    }

    std::size_t node_count() const { return out.size(); }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& e : out) n += e.size();
        return n;
    }
};

namespace detail {

// A CONNECT BY variable is a counter iff its update is syntactically
// `v = v + <number>` or `v = v - <number>` (operand order free for +).
inline bool is_counter_update(const Binding& b) {
    const Expr& e = *b.expr;
    if (e.kind != ExprKind::BinOp || (e.name != "+" && e.name != "-")) return false;
    auto is_self = [&](const ExprPtr& x) {
        return x->kind == ExprKind::Var && x->name == b.name;
    };
    auto is_num = [](const ExprPtr& x) {
        return x->kind == ExprKind::Literal && x->literal.is_number();
    };
    if (is_self(e.lhs) && is_num(e.rhs)) return true;
    if (e.name == "+" && is_num(e.lhs) && is_self(e.rhs)) return true;
    return false;
}

// Variables excluded from the state key.
inline std::set<std::string> excluded_key_vars(const Hierarchy& h,
                                               const EngineOptions& options) {
    std::set<std::string> excluded;
    if (options.state_key_vars) {
        std::set<std::string> keep(options.state_key_vars->begin(),
                                   options.state_key_vars->end());
        for (const Binding& b : h.start)
            if (!keep.count(b.name)) excluded.insert(b.name);
        for (const Binding& b : h.updates)
            if (!keep.count(b.name)) excluded.insert(b.name);
        return excluded;
    }
    for (const Binding& b : h.updates)
        if (is_counter_update(b)) excluded.insert(b.name);
    return excluded;
}

} // namespace detail

// Canonical key of a binding set, counters excluded.
inline std::string state_key(const std::map<std::string, Value>& bindings,
                             const std::set<std::string>& excluded = {}) {
    Dict d;
    for (const auto& [name, value] : bindings)
        if (!excluded.count(name)) d[name] = value;
    return serialize(Value(std::move(d)));
}

// All simple root-to-goal paths of total length <= max_len, shortest first,
// ties in edge discovery order; truncated at cap. Each path is the sequence
// of edge projections with the terminal projection last.
inline std::vector<Value> enumerate_paths(const StateGraph& g, std::int64_t max_len,
                                          std::optional<std::int64_t> cap = std::nullopt) {
    std::vector<Value> results;
    if (g.node_count() == 0) return results;
    auto capped = [&] { return cap && static_cast<std::int64_t>(results.size()) >= *cap; };

    std::vector<char> visited(g.node_count(), 0);
    List path;

    // iterative deepening: length L paths = L-1 graph edges plus the terminal
    for (std::int64_t target = 1; target <= max_len && !capped(); ++target) {
        std::int64_t hops = target - 1;
        auto dfs = [&](auto&& self, int node, std::int64_t depth) -> void {
            if (capped()) return;
            if (depth == hops) {
                for (const Value& proj : g.terminals[node]) {
                    List full = path;
                    full.push_back(proj);
                    results.push_back(Value(std::move(full)));
                    if (capped()) return;
                }
                return;
            }
            for (const StateGraph::Edge& e : g.out[node]) {
                if (visited[e.to]) continue;
                visited[e.to] = 1;
                path.push_back(e.projection);
                self(self, e.to, depth + 1);
                path.pop_back();
                visited[e.to] = 0;
                if (capped()) return;
            }
        };
        visited.assign(g.node_count(), 0);
        visited[g.root] = 1;
        path.clear();
        dfs(dfs, g.root, 0);
    }
    return results;
}

namespace detail {

struct HierarchyRows {
    std::vector<std::vector<Value>> rows; // product rows, declaration order
};

} // namespace detail

inline StateGraph Interpreter::build_state_graph(const SelectQuery& q, const EvalContext* ctx,
                                                 std::int64_t max_len) {
    const Hierarchy& h = *q.hierarchy;
    std::set<std::string> excluded = detail::excluded_key_vars(h, options_);

    std::map<std::string, Value> root_bindings;
    for (const Binding& b : h.start) root_bindings[b.name] = eval_expr(*b.expr, ctx);

    // FROM sources are expanded once; the product is re-walked per node
    std::vector<std::vector<Value>> sources;
    for (const FromItem& item : q.from)
        sources.push_back(expand_source(eval_expr(*item.expr, ctx)));
    std::vector<std::vector<Value>> rows = product_rows(sources);

    StateGraph g;
    g.root = g.add_node(state_key(root_bindings, excluded), 0);
    std::vector<std::map<std::string, Value>> bindings_of;
    bindings_of.push_back(root_bindings);

    std::uint64_t budget = options_.node_budget;
    std::uint64_t used = 0;
    std::deque<int> queue{g.root};

    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (g.dist[u] >= max_len) continue;

        for (const std::vector<Value>& row : rows) {
            if (++used > budget) {
                stats_.expansions += used;
                throw ScriptError(ErrorKind::BudgetExceeded,
                                  "hierarchical query exceeded node budget of " +
                                      std::to_string(budget));
            }
            EvalContext row_ctx;
            row_ctx.parent = ctx;
            detail::bind_row(row_ctx, q.from, row);
            row_ctx.recursion = bindings_of[u];

            if (q.where && truthy(eval_expr(*q.where, &row_ctx)))
                g.terminals[u].push_back(hierarchy_projection(q, row_ctx));

            if (truthy(eval_expr(*h.stop, &row_ctx))) continue;

            std::map<std::string, Value> post = bindings_of[u];
            for (const Binding& b : h.updates) post[b.name] = eval_expr(*b.expr, &row_ctx);
            std::string key = state_key(post, excluded);

            auto it = g.ids.find(key);
            int to;
            if (it == g.ids.end()) {
                to = g.add_node(key, g.dist[u] + 1);
                bindings_of.push_back(std::move(post));
                queue.push_back(to);
            } else {
                to = it->second;
            }
            g.out[u].push_back({to, hierarchy_projection(q, row_ctx)});
        }
    }
    stats_.expansions += used;
    return g;
}

inline Value Interpreter::eval_hierarchical(const SelectQuery& q, const EvalContext* ctx) {
    const Hierarchy& h = *q.hierarchy;

    if (h.mode == SearchMode::Memorize) {
        StateGraph g = build_state_graph(q, ctx, h.memorize_len);
        std::vector<Value> paths = enumerate_paths(g, h.memorize_len, h.maximum);
        stats_.results = paths.size();
        ResultTable table;
        table.labels = {"path"};
        for (Value& p : paths) table.rows.push_back({std::move(p)});
        return format_result(std::move(table), q.as_spec, ctx);
    }

    std::set<std::string> excluded = detail::excluded_key_vars(h, options_);

    std::map<std::string, Value> root_bindings;
    for (const Binding& b : h.start) root_bindings[b.name] = eval_expr(*b.expr, ctx);

    std::vector<std::vector<Value>> sources;
    for (const FromItem& item : q.from)
        sources.push_back(expand_source(eval_expr(*item.expr, ctx)));
    std::vector<std::vector<Value>> rows = product_rows(sources);

    std::string root_key = state_key(root_bindings, excluded);
    std::set<std::string> ancestors; // NO CYCLE: keys on the current path
    std::set<std::string> visited;   // UNIQUE: global visited set
    if (h.mode == SearchMode::NoCycle) ancestors.insert(root_key);
    if (h.mode == SearchMode::Unique) visited.insert(root_key);

    struct Frame {
        std::map<std::string, Value> bindings;
        std::size_t row = 0;
        std::string key;
    };
    std::vector<Frame> stack;
    stack.push_back({std::move(root_bindings), 0, root_key});

    List path; // per-level projections of the current branch
    std::vector<Value> results;

    std::uint64_t budget = options_.node_budget;
    std::uint64_t used = 0;
    auto capped = [&] {
        return h.maximum && static_cast<std::int64_t>(results.size()) >= *h.maximum;
    };

    while (!stack.empty() && !capped()) {
        Frame& f = stack.back();
        if (f.row == rows.size()) {
            if (h.mode == SearchMode::NoCycle) ancestors.erase(f.key);
            if (stack.size() > 1) path.pop_back();
            stack.pop_back();
            continue;
        }
        const std::vector<Value>& row = rows[f.row++];
        if (++used > budget) {
            stats_.expansions += used;
            throw ScriptError(ErrorKind::BudgetExceeded,
                              "hierarchical query exceeded node budget of " +
                                  std::to_string(budget) + " (missing STOP WITH?)");
        }

        EvalContext row_ctx;
        row_ctx.parent = ctx;
        detail::bind_row(row_ctx, q.from, row);
        row_ctx.recursion = f.bindings;

        try {
            // emission precedes the stop check: a goal found on the last
            // permitted level must still be reported
            if (q.where && truthy(eval_expr(*q.where, &row_ctx))) {
                List full = path;
                full.push_back(hierarchy_projection(q, row_ctx));
                results.push_back(Value(std::move(full)));
                if (capped()) break;
            }

            if (truthy(eval_expr(*h.stop, &row_ctx))) continue;

            // simultaneous assignment: all update right-hand sides see
            // pre-update values
            std::map<std::string, Value> post = f.bindings;
            {
                std::vector<Value> new_vals;
                new_vals.reserve(h.updates.size());
                for (const Binding& b : h.updates)
                    new_vals.push_back(eval_expr(*b.expr, &row_ctx));
                for (std::size_t i = 0; i < h.updates.size(); ++i)
                    post[h.updates[i].name] = std::move(new_vals[i]);
            }
            std::string key = state_key(post, excluded);

            if (h.mode == SearchMode::NoCycle && ancestors.count(key)) continue;
            if (h.mode == SearchMode::Unique && !visited.insert(key).second) continue;
            if (h.mode == SearchMode::NoCycle) ancestors.insert(key);

            path.push_back(hierarchy_projection(q, row_ctx));
            stack.push_back({std::move(post), 0, std::move(key)});
        } catch (const ScriptError& e) {
            if (e.is_static() || e.kind() == ErrorKind::BudgetExceeded) throw;
            throw ScriptError(e.kind(),
                              "depth " + std::to_string(stack.size() - 1) + ": " + e.what(),
                              e.line(), e.column());
        }
    }
    stats_.expansions += used;
    stats_.results = results.size();

    ResultTable table;
    table.labels = {"path"};
    for (Value& p : results) table.rows.push_back({std::move(p)});
    return format_result(std::move(table), q.as_spec, ctx);
}

} // namespace hquery

#endif
