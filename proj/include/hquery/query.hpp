#ifndef HQUERY_QUERY_HPP
#define HQUERY_QUERY_HPP

#include "interpreter.hpp"

namespace hquery {

inline std::vector<Value> Interpreter::expand_source(const Value& v) {
    if (v.is_list()) return v.as_list();
    if (v.is_dict()) {
        std::vector<Value> out;
        out.reserve(v.as_dict().size());
        for (const auto& [key, val] : v.as_dict()) out.push_back(val);
        return out;
    }
    if (v.is_entity() && v.as_entity().handle == kWorldRootHandle) {
        if (const WorldEnumerator* world = registry_.find_world(v.as_entity().world))
            return (*world)();
    }
    return {v}; // scalars degrade to singletons
}

inline Value Interpreter::eval_query(const SelectQuery& q, const EvalContext* ctx) {
    if (q.hierarchy) return eval_hierarchical(q, ctx);
    return eval_select(q, ctx);
}

namespace detail {

// Fills the row's this-bindings. The anonymous `this` is the single source's
// element, or the first unnamed source when several sources are present.
inline void bind_row(EvalContext& row_ctx, const std::vector<FromItem>& from,
                     const std::vector<Value>& elems) {
    for (std::size_t s = 0; s < from.size(); ++s)
        if (!from[s].name.empty()) row_ctx.this_bindings[from[s].name] = elems[s];
    if (from.size() == 1) {
        row_ctx.anon_this = elems[0];
    } else {
        for (std::size_t s = 0; s < from.size(); ++s) {
            if (from[s].name.empty()) {
                row_ctx.anon_this = elems[s];
                break;
            }
        }
    }
}

// Per-row value handed to aggregate functions as a group member.
inline Value member_value(const EvalContext& row_ctx, const std::vector<Value>& elems) {
    if (row_ctx.anon_this) return *row_ctx.anon_this;
    return Value(List(elems.begin(), elems.end()));
}

} // namespace detail

inline Value Interpreter::eval_select(const SelectQuery& q, const EvalContext* ctx) {
    // 1. expand sources and build the cartesian product, rightmost fastest
    std::vector<std::vector<Value>> sources;
    sources.reserve(q.from.size());
    for (const FromItem& item : q.from)
        sources.push_back(expand_source(eval_expr(*item.expr, ctx)));

    const std::size_t nsrc = sources.size();
    bool grouped = !q.group_by.empty();

    struct Row {
        std::vector<Value> elems;
    };
    std::vector<Row> kept;

    bool any_empty = false;
    for (const auto& s : sources)
        if (s.empty()) any_empty = true;

    std::uint64_t row_number = 0;
    if (!any_empty) {
        std::vector<std::size_t> idx(nsrc, 0);
        while (true) {
            Row row;
            row.elems.reserve(nsrc);
            for (std::size_t s = 0; s < nsrc; ++s) row.elems.push_back(sources[s][idx[s]]);
            ++stats_.rows_evaluated;
            ++row_number;

            EvalContext row_ctx;
            row_ctx.parent = ctx;
            detail::bind_row(row_ctx, q.from, row.elems);

            bool keep = true;
            if (q.where) {
                try {
                    keep = truthy(eval_expr(*q.where, &row_ctx));
                } catch (const ScriptError& e) {
                    if (e.is_static()) throw;
                    throw ScriptError(e.kind(),
                                      "row " + std::to_string(row_number) + ": " + e.what(),
                                      e.line(), e.column());
                }
            }
            if (keep) kept.push_back(std::move(row));

            // advance rightmost-fastest
            std::size_t s = nsrc;
            while (s > 0) {
                --s;
                if (++idx[s] < sources[s].size()) break;
                idx[s] = 0;
                if (s == 0) goto product_done;
            }
        }
    product_done:;
    }

    // 2. group (first-seen order) or treat each row as its own unit
    struct Unit {
        std::vector<std::size_t> members; // indices into kept
    };
    std::vector<Unit> units;
    if (grouped) {
        std::map<std::string, std::size_t> seen;
        for (std::size_t r = 0; r < kept.size(); ++r) {
            EvalContext row_ctx;
            row_ctx.parent = ctx;
            detail::bind_row(row_ctx, q.from, kept[r].elems);
            List key_tuple;
            for (const ExprPtr& g : q.group_by) key_tuple.push_back(eval_expr(*g, &row_ctx));
            std::string key = serialize(Value(std::move(key_tuple)));
            auto [it, inserted] = seen.emplace(key, units.size());
            if (inserted) units.push_back({});
            units[it->second].members.push_back(r);
        }
    } else {
        units.reserve(kept.size());
        for (std::size_t r = 0; r < kept.size(); ++r) units.push_back({{r}});
    }

    // 3. project and compute ORDER BY keys per unit
    struct OutRow {
        std::vector<Value> cells;
        std::vector<Value> keys;
    };
    std::vector<OutRow> out_rows;
    out_rows.reserve(units.size());
    for (const Unit& unit : units) {
        const Row& rep = kept[unit.members.front()];
        EvalContext rep_ctx;
        rep_ctx.parent = ctx;
        detail::bind_row(rep_ctx, q.from, rep.elems);

        std::vector<Value> member_values;
        if (grouped) {
            member_values.reserve(unit.members.size());
            for (std::size_t r : unit.members) {
                EvalContext mc;
                mc.parent = ctx;
                detail::bind_row(mc, q.from, kept[r].elems);
                member_values.push_back(detail::member_value(mc, kept[r].elems));
            }
        }

        OutRow out;
        out.cells.reserve(q.select.size());
        for (const ExprPtr& item : q.select)
            out.cells.push_back(
                project_item(*item, rep_ctx, grouped ? &member_values : nullptr));
        for (const OrderItem& o : q.order_by) out.keys.push_back(eval_expr(*o.expr, &rep_ctx));
        out_rows.push_back(std::move(out));
    }

    // 4. stable sort on ORDER BY keys
    if (!q.order_by.empty()) {
        std::stable_sort(out_rows.begin(), out_rows.end(),
                         [&](const OutRow& a, const OutRow& b) {
                             for (std::size_t i = 0; i < q.order_by.size(); ++i) {
                                 int c = compare(a.keys[i], b.keys[i]);
                                 if (q.order_by[i].descending) c = -c;
                                 if (c != 0) return c < 0;
                             }
                             return false;
                         });
    }

    ResultTable table;
    table.labels = q.labels;
    if (table.labels.size() != q.select.size()) {
        table.labels.clear();
        for (std::size_t i = 0; i < q.select.size(); ++i)
            table.labels.push_back("col" + std::to_string(i));
    }
    table.rows.reserve(out_rows.size());
    for (OutRow& r : out_rows) table.rows.push_back(std::move(r.cells));
    return format_result(std::move(table), q.as_spec, ctx);
}

// SELECT projection with the implicit-this rule: a bare identifier that names
// a registered function is an implicit call; aggregates receive the group's
// member list; otherwise it is an ordinary variable lookup.
inline Value Interpreter::project_item(const Expr& item, EvalContext& row_ctx,
                                       const std::vector<Value>* group_members) {
    if (item.kind == ExprKind::Var) {
        if (const FunctionRegistry::Entry* entry = registry_.find(item.name)) {
            if (entry->aggregate && group_members) {
                std::vector<Value> args{Value(List(*group_members))};
                return call_function(item.name, args, item.line, item.column);
            }
            if (row_ctx.anon_this) {
                std::vector<Value> args{*row_ctx.anon_this};
                return call_function(item.name, args, item.line, item.column);
            }
        }
        if (const Value* v = row_ctx.lookup(item.name)) return *v;
        auto it = env_.variables.find(item.name);
        if (it != env_.variables.end()) return it->second;
        throw ScriptError(ErrorKind::UnknownVariable, "'" + item.name + "'",
                          item.line, item.column);
    }
    return eval_expr(item, &row_ctx);
}

inline std::vector<std::vector<Value>> Interpreter::product_rows(
    const std::vector<std::vector<Value>>& sources) {
    std::vector<std::vector<Value>> rows;
    for (const auto& s : sources)
        if (s.empty()) return rows;
    if (sources.empty()) return rows;
    std::vector<std::size_t> idx(sources.size(), 0);
    while (true) {
        std::vector<Value> row;
        row.reserve(sources.size());
        for (std::size_t s = 0; s < sources.size(); ++s) row.push_back(sources[s][idx[s]]);
        rows.push_back(std::move(row));
        std::size_t s = sources.size();
        while (true) {
            if (s == 0) return rows;
            --s;
            if (++idx[s] < sources[s].size()) break;
            idx[s] = 0;
        }
    }
}

inline Value Interpreter::hierarchy_projection(const SelectQuery& q, EvalContext& row_ctx) {
    if (q.select.size() == 1) return project_item(*q.select.front(), row_ctx);
    List cells;
    cells.reserve(q.select.size());
    for (const ExprPtr& item : q.select) cells.push_back(project_item(*item, row_ctx));
    return Value(std::move(cells));
}

inline Value Interpreter::format_result(ResultTable table, const std::optional<AsSpec>& spec,
                                        const EvalContext* ctx) {
    std::string name = spec ? spec->name : "list";
    if (name == "value") {
        if (table.rows.empty() || table.rows.front().empty()) return Value();
        return table.rows.front().front();
    }
    if (name == "list") {
        List out;
        out.reserve(table.rows.size());
        for (auto& row : table.rows) {
            if (row.size() == 1) {
                out.push_back(std::move(row.front()));
            } else {
                out.push_back(Value(List(std::make_move_iterator(row.begin()),
                                         std::make_move_iterator(row.end()))));
            }
        }
        return Value(std::move(out));
    }
    if (name == "dict") {
        List out;
        out.reserve(table.rows.size());
        for (auto& row : table.rows) {
            Dict d;
            for (std::size_t i = 0; i < row.size(); ++i) d[table.labels[i]] = std::move(row[i]);
            out.push_back(Value(std::move(d)));
        }
        return Value(std::move(out));
    }
    if (const Formatter* fmt = registry_.find_formatter(name)) {
        std::vector<Value> args;
        if (spec)
            for (const ExprPtr& a : spec->args) args.push_back(eval_expr(*a, ctx));
        return (*fmt)(table, args);
    }
    throw ScriptError(ErrorKind::UnknownFormatter, "'" + name + "'");
}

} // namespace hquery

#endif
