#ifndef HQUERY_WORLDS_HANOI_HPP
#define HQUERY_WORLDS_HANOI_HPP

#include "../interpreter.hpp"

namespace hquery::worlds {

// Applies a [from,to] step to a tower configuration (list of 3 lists, disks
// descending bottom-to-top). Returns the new configuration, or [] for an
// invalid step. Never mutates its input: the recursion engine backtracks
// through shared configurations.
inline Value hanoi_move(const Value& step, const Value& towers) {
    if (!step.is_list() || step.as_list().size() != 2 ||
        !step.as_list()[0].is_int() || !step.as_list()[1].is_int())
        throw ScriptError(ErrorKind::HostError, "move: step must be a [from, to] int pair");
    std::int64_t from = step.as_list()[0].as_int();
    std::int64_t to = step.as_list()[1].as_int();
    // [] flows through so nested applications of an invalid step stay invalid
    if (towers.is_list() && towers.as_list().empty()) return Value(List{});
    if (!towers.is_list() || towers.as_list().size() != 3)
        throw ScriptError(ErrorKind::HostError, "move: towers must be a list of 3 lists");
    const List& ts = towers.as_list();
    for (const Value& t : ts)
        if (!t.is_list())
            throw ScriptError(ErrorKind::HostError, "move: towers must be a list of 3 lists");
    if (from < 0 || from > 2 || to < 0 || to > 2)
        throw ScriptError(ErrorKind::HostError, "move: step indices must be in {0,1,2}");

    const List& src = ts[from].as_list();
    const List& dst = ts[to].as_list();
    if (src.empty()) return Value(List{});
    const Value& disk = src.back();
    if (!disk.is_int())
        throw ScriptError(ErrorKind::HostError, "move: disks must be integers");
    if (!dst.empty() && dst.back().is_int() && dst.back().as_int() <= disk.as_int())
        return Value(List{});

    List out;
    out.reserve(3);
    for (std::int64_t i = 0; i < 3; ++i) {
        List tower = ts[i].as_list();
        if (i == from) tower.pop_back();
        if (i == to) tower.push_back(disk);
        out.push_back(Value(std::move(tower)));
    }
    return Value(std::move(out));
}

inline void attach_hanoi(Interpreter& interp) {
    interp.add_function("move", [](const std::vector<Value>& args) {
        if (args.size() != 2)
            throw ScriptError(ErrorKind::HostError, "move expects (step, towers)");
        return hanoi_move(args[0], args[1]);
    });
}

} // namespace hquery::worlds

#endif
