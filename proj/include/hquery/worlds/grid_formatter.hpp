#ifndef HQUERY_WORLDS_GRID_FORMATTER_HPP
#define HQUERY_WORLDS_GRID_FORMATTER_HPP

#include "../interpreter.hpp"

#include <cmath>

namespace hquery::worlds {

// AS grid([ox,oy], [w,h], resolution): accumulates each row's leading scalar
// into the cell addressed by the row's trailing x,y cells. Out-of-range rows
// are dropped.
inline Value grid_formatter(const ResultTable& table, const std::vector<Value>& args) {
    auto num_pair = [](const Value& v, const char* what) -> std::pair<double, double> {
        if (!v.is_list() || v.as_list().size() != 2 || !v.as_list()[0].is_number() ||
            !v.as_list()[1].is_number())
            throw ScriptError(ErrorKind::HostError,
                              std::string("grid: ") + what + " must be a numeric pair");
        return {v.as_list()[0].number(), v.as_list()[1].number()};
    };
    if (args.size() != 3)
        throw ScriptError(ErrorKind::HostError, "grid expects (origin, size, resolution)");
    auto [ox, oy] = num_pair(args[0], "origin");
    auto [w, h] = num_pair(args[1], "size");
    if (!args[2].is_number() || args[2].number() <= 0.0)
        throw ScriptError(ErrorKind::HostError, "grid: resolution must be a positive number");
    double res = args[2].number();

    std::int64_t cols = std::llround(w / res);
    std::int64_t rows = std::llround(h / res);
    if (cols < 0) cols = 0;
    if (rows < 0) rows = 0;
    std::vector<double> data(static_cast<std::size_t>(cols * rows), 0.0);

    for (const std::vector<Value>& row : table.rows) {
        double scalar, x, y;
        if (row.size() >= 3) {
            if (!row[0].is_number() || !row[row.size() - 2].is_number() ||
                !row[row.size() - 1].is_number())
                throw ScriptError(ErrorKind::HostError, "grid: non-numeric cell");
            scalar = row[0].number();
            x = row[row.size() - 2].number();
            y = row[row.size() - 1].number();
        } else if (row.size() == 2 && row[1].is_list() && row[1].as_list().size() >= 2 &&
                   row[1].as_list()[0].is_number() && row[1].as_list()[1].is_number()) {
            if (!row[0].is_number())
                throw ScriptError(ErrorKind::HostError, "grid: non-numeric cell");
            scalar = row[0].number();
            x = row[1].as_list()[0].number();
            y = row[1].as_list()[1].number();
        } else {
            throw ScriptError(ErrorKind::HostError,
                              "grid: rows need a scalar followed by x,y coordinates");
        }
        std::int64_t ix = static_cast<std::int64_t>(std::floor((x - ox) / res));
        std::int64_t iy = static_cast<std::int64_t>(std::floor((y - oy) / res));
        if (ix < 0 || ix >= cols || iy < 0 || iy >= rows) continue;
        data[static_cast<std::size_t>(iy * cols + ix)] += scalar;
    }

    Dict out;
    out["width"] = Value(cols);
    out["height"] = Value(rows);
    List cells;
    cells.reserve(data.size());
    for (double d : data) cells.push_back(Value(d));
    out["data"] = Value(std::move(cells));
    return Value(std::move(out));
}

inline void register_grid_formatter(Interpreter& interp) {
    interp.registry().add_formatter("grid", grid_formatter);
}

} // namespace hquery::worlds

#endif
