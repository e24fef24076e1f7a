#ifndef HQUERY_INTERPRETER_HPP
#define HQUERY_INTERPRETER_HPP

#include "compiler.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <unordered_map>

namespace hquery {

// Rows produced by a query before AS formatting.
struct ResultTable {
    std::vector<std::string> labels;
    std::vector<std::vector<Value>> rows;
};

using HostFn = std::function<Value(const std::vector<Value>&)>;
using Formatter = std::function<Value(const ResultTable&, const std::vector<Value>&)>;
using WorldEnumerator = std::function<std::vector<Value>()>;

class FunctionRegistry {
public:
    struct Entry {
        HostFn fn;
        bool aggregate = false;
    };

    void add_function(const std::string& name, HostFn fn, bool aggregate = false) {
        if (!is_valid_identifier(name))
            throw ScriptError(ErrorKind::InvalidName,
                              "'" + name + "' is not a valid function name");
        functions_[name] = Entry{std::move(fn), aggregate};
    }

    const Entry* find(const std::string& name) const {
        auto it = functions_.find(name);
        return it == functions_.end() ? nullptr : &it->second;
    }

    void add_formatter(const std::string& name, Formatter fn) {
        if (!is_valid_identifier(name))
            throw ScriptError(ErrorKind::InvalidName,
                              "'" + name + "' is not a valid formatter name");
        formatters_[name] = std::move(fn);
    }

    const Formatter* find_formatter(const std::string& name) const {
        auto it = formatters_.find(name);
        return it == formatters_.end() ? nullptr : &it->second;
    }

    void add_world(const std::string& world_id, WorldEnumerator enumerate) {
        worlds_[world_id] = std::move(enumerate);
    }

    const WorldEnumerator* find_world(const std::string& world_id) const {
        auto it = worlds_.find(world_id);
        return it == worlds_.end() ? nullptr : &it->second;
    }

private:
    std::unordered_map<std::string, Entry> functions_;
    std::unordered_map<std::string, Formatter> formatters_;
    std::unordered_map<std::string, WorldEnumerator> worlds_;
};

// Persistent variables plus the temporal-variable cache. The clock is
// injectable so cache expiry is testable without sleeping.
struct Environment {
    struct TemporalEntry {
        Value value;
        double expiry; // seconds on the environment clock
    };

    std::unordered_map<std::string, Value> variables;
    std::unordered_map<std::string, TemporalEntry> temporal;
    std::function<double()> clock = [] {
        using namespace std::chrono;
        return duration<double>(steady_clock::now().time_since_epoch()).count();
    };
};

struct EngineOptions {
    std::uint64_t node_budget = 10'000'000;
    // When set, exactly these variables form the recursion state key
    // (overrides the counter-exclusion heuristic).
    std::optional<std::vector<std::string>> state_key_vars;
};

struct EngineStats {
    std::uint64_t expansions = 0;      // hierarchical row-transitions processed
    std::uint64_t rows_evaluated = 0;  // flat-query product rows visited
    std::uint64_t results = 0;         // results emitted by the last hierarchical query
};

// Name scope during evaluation. Lookup order: this-bindings, recursion
// bindings, enclosing context, then environment variables.
struct EvalContext {
    const EvalContext* parent = nullptr;
    std::map<std::string, Value> this_bindings;
    std::optional<Value> anon_this;
    std::map<std::string, Value> recursion;

    const Value* lookup(const std::string& name) const {
        auto it = this_bindings.find(name);
        if (it != this_bindings.end()) return &it->second;
        auto rt = recursion.find(name);
        if (rt != recursion.end()) return &rt->second;
        return parent ? parent->lookup(name) : nullptr;
    }

    const Value* lookup_this(const std::string& source) const {
        if (source.empty()) {
            if (anon_this) return &*anon_this;
        } else {
            auto it = this_bindings.find(source);
            if (it != this_bindings.end()) return &it->second;
        }
        return parent ? parent->lookup_this(source) : nullptr;
    }
};

struct StateGraph;

class Interpreter {
public:
    Interpreter() { register_builtins(); }

    Environment& env() { return env_; }
    FunctionRegistry& registry() { return registry_; }
    EngineOptions& options() { return options_; }
    EngineStats& stats() { return stats_; }

    void add_function(const std::string& name, HostFn fn, bool aggregate = false) {
        registry_.add_function(name, std::move(fn), aggregate);
    }

    void set_variable(const std::string& name, Value v) {
        env_.variables[name] = std::move(v);
    }

    Value eval(std::string_view source) { return eval_script(compile(source)); }

    Value eval_script(const Script& ir) {
        Value result;
        for (std::size_t i = 0; i < ir.statements.size(); ++i) {
            try {
                result = eval_statement(ir.statements[i]);
            } catch (const ScriptError& e) {
                if (e.is_static()) throw;
                throw ScriptError(e.kind(),
                                  "statement " + std::to_string(i + 1) + ": " + e.what(),
                                  e.line(), e.column());
            }
        }
        return result;
    }

    Value eval_expr(const Expr& e, const EvalContext* ctx = nullptr) {
        switch (e.kind) {
            case ExprKind::Literal:
                return e.literal;
            case ExprKind::ListExpr: {
                List items;
                items.reserve(e.args.size());
                for (const ExprPtr& arg : e.args) items.push_back(eval_expr(*arg, ctx));
                return Value(std::move(items));
            }
            case ExprKind::Var: {
                if (ctx)
                    if (const Value* v = ctx->lookup(e.name)) return *v;
                auto it = env_.variables.find(e.name);
                if (it != env_.variables.end()) return it->second;
                throw ScriptError(ErrorKind::UnknownVariable, "'" + e.name + "'",
                                  e.line, e.column);
            }
            case ExprKind::ThisRef: {
                if (ctx)
                    if (const Value* v = ctx->lookup_this(e.name)) return *v;
                std::string what = e.name.empty() ? "this" : e.name + ".this";
                throw ScriptError(ErrorKind::UnknownVariable,
                                  "'" + what + "' outside a query", e.line, e.column);
            }
            case ExprKind::Call: {
                std::vector<Value> args;
                args.reserve(e.args.size());
                for (const ExprPtr& arg : e.args) args.push_back(eval_expr(*arg, ctx));
                return call_function(e.name, args, e.line, e.column);
            }
            case ExprKind::BinOp:
                return eval_binop(e, ctx);
            case ExprKind::UnOp: {
                if (e.name == "NOT") return Value(!truthy(eval_expr(*e.operand, ctx)));
                return negate(eval_expr(*e.operand, ctx));
            }
            case ExprKind::If:
                return eval_if(e, ctx);
            case ExprKind::Query:
                return eval_query(*e.query, ctx);
        }
        throw ScriptError(ErrorKind::Runtime, "unreachable");
    }

    Value call_function(const std::string& name, const std::vector<Value>& args,
                        int line = -1, int column = -1) {
        const FunctionRegistry::Entry* entry = registry_.find(name);
        if (!entry)
            throw ScriptError(ErrorKind::UnknownFunction, "'" + name + "'", line, column);
        try {
            return entry->fn(args);
        } catch (const ScriptError&) {
            throw;
        } catch (const std::exception& e) {
            throw ScriptError(ErrorKind::HostError,
                              "function '" + name + "': " + e.what(), line, column);
        }
    }

    // Expands a FROM source value into its row elements.
    std::vector<Value> expand_source(const Value& v);

    Value eval_query(const SelectQuery& q, const EvalContext* ctx);
    Value eval_select(const SelectQuery& q, const EvalContext* ctx);
    Value project_item(const Expr& item, EvalContext& row_ctx,
                       const std::vector<Value>* group_members = nullptr);
    Value format_result(ResultTable table, const std::optional<AsSpec>& spec,
                        const EvalContext* ctx);

    Value eval_hierarchical(const SelectQuery& q, const EvalContext* ctx);
    StateGraph build_state_graph(const SelectQuery& q, const EvalContext* ctx,
                                 std::int64_t max_len);

    // cartesian product of the expanded sources, rightmost varying fastest
    static std::vector<std::vector<Value>> product_rows(
        const std::vector<std::vector<Value>>& sources);

    // per-level projection: a 1-item SELECT collapses to its single value
    Value hierarchy_projection(const SelectQuery& q, EvalContext& row_ctx);

private:
    Value eval_statement(const Statement& stmt) {
        if (!stmt.is_assign) return eval_expr(*stmt.expr);
        if (stmt.ttl_seconds) {
            double now = env_.clock();
            auto it = env_.temporal.find(stmt.target);
            if (it != env_.temporal.end() && it->second.expiry > now) {
                env_.variables[stmt.target] = it->second.value;
                return it->second.value;
            }
            Value v = eval_expr(*stmt.expr);
            env_.temporal[stmt.target] = {v, now + *stmt.ttl_seconds};
            env_.variables[stmt.target] = v;
            return v;
        }
        Value v = eval_expr(*stmt.expr);
        env_.variables[stmt.target] = v;
        return v;
    }

    Value eval_binop(const Expr& e, const EvalContext* ctx) {
        const std::string& op = e.name;
        if (op == "AND") {
            if (!truthy(eval_expr(*e.lhs, ctx))) return Value(false);
            return Value(truthy(eval_expr(*e.rhs, ctx)));
        }
        if (op == "OR") {
            if (truthy(eval_expr(*e.lhs, ctx))) return Value(true);
            return Value(truthy(eval_expr(*e.rhs, ctx)));
        }
        Value l = eval_expr(*e.lhs, ctx);
        Value r = eval_expr(*e.rhs, ctx);
        if (op == "==") return Value(deep_eq(l, r));
        if (op == "!=") return Value(!deep_eq(l, r));
        if (op == "<") return Value(compare(l, r) < 0);
        if (op == "<=") return Value(compare(l, r) <= 0);
        if (op == ">") return Value(compare(l, r) > 0);
        if (op == ">=") return Value(compare(l, r) >= 0);
        if (op == "+") return add(l, r);
        if (op == "-") return subtract(l, r);
        if (op == "*") return multiply(l, r);
        if (op == "/") return divide(l, r);
        throw ScriptError(ErrorKind::Runtime, "unknown operator '" + op + "'");
    }

    // IF evaluates exactly one branch; without an else, a falsy condition's
    // own value passes through unchanged.
    Value eval_if(const Expr& e, const EvalContext* ctx) {
        Value cond = eval_expr(*e.cond, ctx);
        if (truthy(cond)) {
            Value v;
            for (const ExprPtr& x : e.then_seq) v = eval_expr(*x, ctx);
            return v;
        }
        if (e.has_else) {
            Value v;
            for (const ExprPtr& x : e.else_seq) v = eval_expr(*x, ctx);
            return v;
        }
        return cond;
    }

    void register_builtins() {
        auto member_list = [](const std::vector<Value>& args) -> const List* {
            if (args.size() == 1 && args[0].is_list()) return &args[0].as_list();
            return nullptr;
        };
        registry_.add_function("count", [member_list](const std::vector<Value>& args) {
            if (const List* l = member_list(args))
                return Value(static_cast<std::int64_t>(l->size()));
            return Value(static_cast<std::int64_t>(args.size()));
        }, true);
        registry_.add_function("sum", [member_list](const std::vector<Value>& args) {
            const List* l = member_list(args);
            List single;
            if (!l) { single = List(args.begin(), args.end()); l = &single; }
            // seed with the first element so list summands add elementwise
            if (l->empty()) return Value(std::int64_t{0});
            Value acc = (*l)[0];
            for (std::size_t i = 1; i < l->size(); ++i) acc = add(acc, (*l)[i]);
            return acc;
        }, true);
        registry_.add_function("min", [member_list](const std::vector<Value>& args) {
            const List* l = member_list(args);
            List single;
            if (!l) { single = List(args.begin(), args.end()); l = &single; }
            if (l->empty()) return Value();
            Value best = (*l)[0];
            for (const Value& v : *l)
                if (value_less(v, best)) best = v;
            return best;
        }, true);
        registry_.add_function("max", [member_list](const std::vector<Value>& args) {
            const List* l = member_list(args);
            List single;
            if (!l) { single = List(args.begin(), args.end()); l = &single; }
            if (l->empty()) return Value();
            Value best = (*l)[0];
            for (const Value& v : *l)
                if (value_less(best, v)) best = v;
            return best;
        }, true);
        registry_.add_function("avg", [member_list](const std::vector<Value>& args) {
            const List* l = member_list(args);
            List single;
            if (!l) { single = List(args.begin(), args.end()); l = &single; }
            if (l->empty()) return Value();
            double total = 0;
            for (const Value& v : *l) {
                if (!v.is_number())
                    throw ScriptError(ErrorKind::TypeMismatch, "avg over non-numeric value");
                total += v.number();
            }
            return Value(total / static_cast<double>(l->size()));
        }, true);
        registry_.add_function("print", [](const std::vector<Value>& args) {
            Value v = args.empty() ? Value() : args[0];
            std::cout << serialize(v) << "\n";
            return v;
        });
    }

    Environment env_;
    FunctionRegistry registry_;
    EngineOptions options_;
    EngineStats stats_;
};

} // namespace hquery

#include "query.hpp"
#include "recursion.hpp"

#endif
