#ifndef HQUERY_WORLDS_GRIDWORLD_HPP
#define HQUERY_WORLDS_GRIDWORLD_HPP

#include "../interpreter.hpp"
#include "grid_formatter.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace hquery::worlds {

// 2D occupancy map with a single robot. Map text format: equal-length lines
// of `#` (obstacle), `.` (free), `S` (start, exactly one), `G` (goal,
// exactly one); line 0 is y = 0, column 0 is x = 0.
struct GridMap {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<char> obstacle; // row-major
    std::int64_t start_x = 0, start_y = 0;
    std::int64_t goal_x = 0, goal_y = 0;
    std::int64_t robot_x = 0, robot_y = 0;
    std::vector<std::string> sound_log;

    bool in_bounds(std::int64_t x, std::int64_t y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    bool is_obstacle(std::int64_t x, std::int64_t y) const {
        return obstacle[static_cast<std::size_t>(y * width + x)] != 0;
    }

    static GridMap parse(const std::string& text) {
        GridMap map;
        std::istringstream in(text);
        std::string line;
        int starts = 0, goals = 0;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (map.height == 0) {
                map.width = static_cast<std::int64_t>(line.size());
                if (map.width == 0)
                    throw ScriptError(ErrorKind::HostError, "map: empty first line");
            } else if (static_cast<std::int64_t>(line.size()) != map.width) {
                throw ScriptError(ErrorKind::HostError,
                                  "map: line " + std::to_string(map.height + 1) +
                                      " has a different length");
            }
            std::int64_t y = map.height;
            for (std::int64_t x = 0; x < map.width; ++x) {
                char c = line[static_cast<std::size_t>(x)];
                switch (c) {
                    case '#': map.obstacle.push_back(1); break;
                    case '.': map.obstacle.push_back(0); break;
                    case 'S':
                        map.obstacle.push_back(0);
                        map.start_x = x;
                        map.start_y = y;
                        ++starts;
                        break;
                    case 'G':
                        map.obstacle.push_back(0);
                        map.goal_x = x;
                        map.goal_y = y;
                        ++goals;
                        break;
                    default:
                        throw ScriptError(ErrorKind::HostError,
                                          std::string("map: unexpected character '") + c + "'");
                }
            }
            ++map.height;
        }
        if (map.height == 0) throw ScriptError(ErrorKind::HostError, "map: empty map");
        if (starts != 1) throw ScriptError(ErrorKind::HostError, "map: exactly one S required");
        if (goals != 1) throw ScriptError(ErrorKind::HostError, "map: exactly one G required");
        map.robot_x = map.start_x;
        map.robot_y = map.start_y;
        return map;
    }

    static GridMap load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ScriptError(ErrorKind::HostError, "map: cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }
};

namespace detail_grid {

inline std::pair<std::int64_t, std::int64_t> int_pair(const Value& v, const char* what) {
    if (v.is_list() && v.as_list().size() == 2 && v.as_list()[0].is_number() &&
        v.as_list()[1].is_number())
        return {static_cast<std::int64_t>(v.as_list()[0].number()),
                static_cast<std::int64_t>(v.as_list()[1].number())};
    throw ScriptError(ErrorKind::HostError, std::string(what) + ": expected an [x, y] pair");
}

} // namespace detail_grid

// Registers position/move/checkCollision/distance/playSound plus the
// variables `robot`, `start_pos`, and `target_pos`. `move` only rejects
// out-of-bounds targets; obstacle cells are reported via checkCollision,
// mirroring the separation between moving and collision checking.
inline std::shared_ptr<GridMap> attach_gridworld(Interpreter& interp, GridMap map) {
    auto world = std::make_shared<GridMap>(std::move(map));

    interp.add_function("position", [world](const std::vector<Value>& args) {
        if (args.size() != 1)
            throw ScriptError(ErrorKind::HostError, "position expects (robot)");
        return Value(List{Value(world->robot_x), Value(world->robot_y)});
    });
    interp.add_function("move", [world](const std::vector<Value>& args) {
        if (args.size() != 2)
            throw ScriptError(ErrorKind::HostError, "move expects (robot, pos)");
        auto [x, y] = detail_grid::int_pair(args[1], "move");
        if (!world->in_bounds(x, y)) return Value(List{});
        world->robot_x = x;
        world->robot_y = y;
        return Value(List{Value(x), Value(y)});
    });
    interp.add_function("checkCollision", [world](const std::vector<Value>& args) {
        if (args.size() != 1)
            throw ScriptError(ErrorKind::HostError, "checkCollision expects (robot)");
        return Value(world->is_obstacle(world->robot_x, world->robot_y));
    });
    interp.add_function("distance", [](const std::vector<Value>& args) {
        if (args.size() != 2 || !args[0].is_list() || !args[1].is_list() ||
            args[0].as_list().size() != args[1].as_list().size())
            throw ScriptError(ErrorKind::HostError,
                              "distance expects two equal-length numeric lists");
        double sum = 0;
        const List& a = args[0].as_list();
        const List& b = args[1].as_list();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number() || !b[i].is_number())
                throw ScriptError(ErrorKind::HostError, "distance: non-numeric coordinate");
            double d = a[i].number() - b[i].number();
            sum += d * d;
        }
        return Value(std::sqrt(sum));
    });
    interp.add_function("playSound", [world](const std::vector<Value>& args) {
        if (args.size() != 1 || !args[0].is_str())
            throw ScriptError(ErrorKind::HostError, "playSound expects (path)");
        world->sound_log.push_back(args[0].as_str());
        return Value(true);
    });

    interp.set_variable("robot", Value("robot"));
    interp.set_variable("start_pos", Value(List{Value(world->start_x), Value(world->start_y)}));
    interp.set_variable("target_pos", Value(List{Value(world->goal_x), Value(world->goal_y)}));
    register_grid_formatter(interp);
    return world;
}

} // namespace hquery::worlds

#endif
