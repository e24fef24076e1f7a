#include <hquery/hquery.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace hquery;

struct WorldSpec {
    enum class Kind { None, Hanoi, Gridworld, Particles } kind = Kind::None;
    std::string map_path;
    std::int64_t seed = 0;
    std::int64_t count = 0;
};

WorldSpec parse_world_spec(const std::string& spec) {
    WorldSpec out;
    if (spec.empty() || spec == "none") return out;
    if (spec == "hanoi") {
        out.kind = WorldSpec::Kind::Hanoi;
        return out;
    }
    if (spec.rfind("gridworld:", 0) == 0) {
        out.kind = WorldSpec::Kind::Gridworld;
        out.map_path = spec.substr(10);
        if (out.map_path.empty())
            throw CLI::ValidationError("--world", "gridworld needs a map path");
        return out;
    }
    if (spec.rfind("particles:", 0) == 0) {
        out.kind = WorldSpec::Kind::Particles;
        std::string rest = spec.substr(10);
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--world", "particles needs <seed>,<n>");
        try {
            out.seed = std::stoll(rest.substr(0, comma));
            out.count = std::stoll(rest.substr(comma + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--world", "particles needs <seed>,<n>");
        }
        if (out.count < 0)
            throw CLI::ValidationError("--world", "particle count must be >= 0");
        return out;
    }
    throw CLI::ValidationError(
        "--world", "expected none | hanoi | gridworld:<map> | particles:<seed>,<n>");
}

void attach_world(Interpreter& interp, const WorldSpec& spec) {
    switch (spec.kind) {
        case WorldSpec::Kind::None:
            break;
        case WorldSpec::Kind::Hanoi:
            worlds::attach_hanoi(interp);
            break;
        case WorldSpec::Kind::Gridworld:
            worlds::attach_gridworld(interp, worlds::GridMap::load(spec.map_path));
            break;
        case WorldSpec::Kind::Particles:
            worlds::attach_particles(interp, spec.seed, spec.count);
            break;
    }
}

std::uint64_t default_budget() {
    if (const char* env = std::getenv("HQUERY_MAX_NODES")) {
        try {
            long long v = std::stoll(env);
            if (v >= 1) return static_cast<std::uint64_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid HQUERY_MAX_NODES\n";
    }
    return EngineOptions{}.node_budget;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_run(const std::string& path, const WorldSpec& world, bool show_time,
            std::uint64_t budget, const std::vector<std::string>& state_keys) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    Interpreter interp;
    interp.options().node_budget = budget;
    if (!state_keys.empty()) interp.options().state_key_vars = state_keys;
    attach_world(interp, world);

    Script ir;
    try {
        ir = compile(buf.str());
    } catch (const ScriptError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        auto t0 = std::chrono::steady_clock::now();
        Value result = interp.eval_script(ir);
        auto t1 = std::chrono::steady_clock::now();
        std::cout << serialize(result) << "\n";
        if (show_time) {
            double secs = std::chrono::duration<double>(t1 - t0).count();
            std::cerr << "# time: " << std::fixed << std::setprecision(3) << secs << "s\n";
        }
        return 0;
    } catch (const ScriptError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_static() ? 1 : 2;
    }
}

int cmd_repl(const WorldSpec& world) {
    Interpreter interp;
    interp.options().node_budget = default_budget();
    attach_world(interp, world);

    bool show_time = false;
    std::string buffer;
    std::cout << "hquery repl -- statements end with ';', :quit exits, :time on|off\n";
    while (true) {
        std::cout << (buffer.empty() ? "> " : ". ") << std::flush;
        std::string line;
        if (!std::getline(std::cin, line)) break;

        std::string trimmed = line;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        std::size_t first = trimmed.find_first_not_of(" \t");
        if (buffer.empty() && first != std::string::npos && trimmed[first] == ':') {
            std::string cmd = trimmed.substr(first);
            if (cmd == ":quit" || cmd == ":q") return 0;
            if (cmd == ":time on") {
                show_time = true;
                continue;
            }
            if (cmd == ":time off") {
                show_time = false;
                continue;
            }
            std::cout << "unknown command: " << cmd << "\n";
            continue;
        }

        buffer += line;
        buffer += "\n";
        if (trimmed.empty() || trimmed.back() != ';') continue;

        std::string source;
        std::swap(source, buffer);
        try {
            auto t0 = std::chrono::steady_clock::now();
            Value result = interp.eval(source);
            auto t1 = std::chrono::steady_clock::now();
            std::cout << serialize(result) << "\n";
            if (show_time) {
                double secs = std::chrono::duration<double>(t1 - t0).count();
                std::cout << "# time: " << std::fixed << std::setprecision(3) << secs << "s\n";
            }
        } catch (const ScriptError& e) {
            std::cout << "error: " << e.what() << "\n";
        }
    }
    return 0;
}

std::string tower_literal(int disks, bool full_first) {
    std::string tower = "[";
    for (int d = disks; d >= 1; --d) {
        tower += std::to_string(d);
        if (d > 1) tower += ",";
    }
    tower += "]";
    std::string empty = "[]";
    if (full_first) return "[" + tower + ",[],[]]";
    return "[[],[]," + tower + "]";
}

std::string hanoi_script(const std::string& strategy, int disks) {
    std::int64_t depth = (std::int64_t{1} << disks) - 1;
    std::string start = tower_literal(disks, true);
    std::string goal = tower_literal(disks, false);
    std::string moves = "moves = [[0,1],[0,2],[1,0],[1,2],[2,0],[2,1]];\n";

    if (strategy == "vanilla") {
        // nested products, one source per move
        std::string script = moves + "SELECT ";
        for (std::int64_t i = 1; i <= depth; ++i) {
            script += "m" + std::to_string(i) + ".this";
            if (i < depth) script += ", ";
        }
        script += "\nFROM ";
        for (std::int64_t i = 1; i <= depth; ++i) {
            script += "m" + std::to_string(i) + "=moves";
            if (i < depth) script += ", ";
        }
        std::string call = start;
        for (std::int64_t i = 1; i <= depth; ++i)
            call = "move(m" + std::to_string(i) + ".this, " + call + ")";
        script += "\nWHERE " + goal + " == " + call + "\nAS list;";
        return script;
    }
    if (strategy == "memorize") {
        return moves +
               "SELECT this FROM moves WHERE " + goal + " == move(this, tower)\n"
               "START WITH tower = " + start + "\n"
               "CONNECT BY MEMORIZE " + std::to_string(depth) + " tower = move(this, tower)\n"
               "STOP WITH [] == move(this, tower);";
    }
    std::string kw;
    if (strategy == "nocycle") kw = "NO CYCLE ";
    if (strategy == "unique") kw = "UNIQUE ";
    return moves +
           "SELECT this FROM moves WHERE " + goal + " == move(this, tower)\n"
           "START WITH tower = " + start + ", level = 1\n"
           "CONNECT BY " + kw + "tower = move(this, tower), level = level + 1\n"
           "STOP WITH level == " + std::to_string(depth) + " OR [] == move(this, tower);";
}

int cmd_bench(int disks, std::vector<std::string> strategies, std::uint64_t budget) {
    if (strategies.empty()) {
        strategies = {"default", "nocycle", "unique", "memorize"};
        if (disks <= 3) strategies.insert(strategies.begin(), "vanilla");
    }
    std::cout << std::left << std::setw(10) << "strategy" << std::right << std::setw(12)
              << "time[s]" << std::setw(14) << "expansions" << std::setw(10) << "results"
              << "\n";
    for (const std::string& strategy : strategies) {
        if (strategy == "vanilla" && disks > 3) {
            std::cout << std::left << std::setw(10) << strategy
                      << "  (skipped: only for <= 3 disks)\n";
            continue;
        }
        Interpreter interp;
        interp.options().node_budget = budget;
        worlds::attach_hanoi(interp);
        std::string script = hanoi_script(strategy, disks);

        auto t0 = std::chrono::steady_clock::now();
        std::string note;
        std::int64_t result_count = -1;
        try {
            Value result = interp.eval(script);
            if (result.is_list())
                result_count = static_cast<std::int64_t>(result.as_list().size());
        } catch (const ScriptError& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            note = "  (budget exceeded)";
        }
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();

        std::uint64_t work = strategy == "vanilla" ? interp.stats().rows_evaluated
                                                   : interp.stats().expansions;
        std::cout << std::left << std::setw(10) << strategy << std::right << std::setw(12)
                  << std::fixed << std::setprecision(3) << secs << std::setw(14) << work
                  << std::setw(10);
        if (result_count >= 0)
            std::cout << result_count;
        else
            std::cout << "-";
        std::cout << note << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hquery -- SQL-like query language with hierarchical search strategies"};
    app.require_subcommand(1);

    std::string script_path;
    std::string world_spec = "none";
    bool show_time = false;
    std::int64_t max_nodes = 0;
    std::string state_keys;

    CLI::App* run = app.add_subcommand("run", "run a script file");
    run->add_option("file", script_path, "script file (.sss)")->required();
    run->add_option("--world", world_spec, "world backend: none | hanoi | gridworld:<map> | particles:<seed>,<n>");
    run->add_flag("--time", show_time, "print evaluation time to stderr");
    run->add_option("--max-nodes", max_nodes, "node budget for hierarchical queries");
    run->add_option("--state-keys", state_keys,
                    "comma-separated variables forming the recursion state key");

    CLI::App* repl = app.add_subcommand("repl", "interactive session");
    repl->add_option("--world", world_spec, "world backend to attach");

    std::string bench_problem;
    int disks = 3;
    std::string strategies;
    CLI::App* bench = app.add_subcommand("bench", "strategy comparison benchmark");
    bench->add_option("problem", bench_problem, "benchmark problem (hanoi)")->required();
    bench->add_option("--disks", disks, "number of disks (2..6)")
        ->check(CLI::Range(2, 6));
    bench->add_option("--strategies", strategies,
                      "comma-separated: vanilla,default,nocycle,unique,memorize");
    bench->add_option("--max-nodes", max_nodes, "node budget for hierarchical queries");

    CLI11_PARSE(app, argc, argv);

    try {
        std::uint64_t budget =
            max_nodes >= 1 ? static_cast<std::uint64_t>(max_nodes) : default_budget();
        if (run->parsed())
            return cmd_run(script_path, parse_world_spec(world_spec), show_time, budget,
                           split_commas(state_keys));
        if (repl->parsed()) return cmd_repl(parse_world_spec(world_spec));
        if (bench->parsed()) {
            if (bench_problem != "hanoi") {
                std::cerr << "error: unknown benchmark '" << bench_problem << "'\n";
                return 1;
            }
            return cmd_bench(disks, split_commas(strategies), budget);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hquery::ScriptError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_static() ? 1 : 2;
    }
    return 0;
}
