#ifndef HQUERY_VALUE_HPP
#define HQUERY_VALUE_HPP

#include "errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace hquery {

class Value;

using List = std::vector<Value>;
using Dict = std::map<std::string, Value>;

// Opaque handle issued by a world backend. Handle -1 denotes the world root
// (the enumerable "table" of all entities).
struct Entity {
    std::string world;
    std::int64_t handle = 0;
};

inline constexpr std::int64_t kWorldRootHandle = -1;

// The universal runtime datum. Immutable by convention: evaluation always
// builds fresh values instead of mutating in place.
class Value {
public:
    using Storage = std::variant<std::monostate, bool, std::int64_t, double,
                                 std::string, List, Dict, Entity>;

    Value() : data_(std::monostate{}) {}
    Value(bool b) : data_(b) {}
    Value(std::int64_t i) : data_(i) {}
    Value(int i) : data_(static_cast<std::int64_t>(i)) {}
    Value(double d) : data_(d) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(List l) : data_(std::move(l)) {}
    Value(Dict d) : data_(std::move(d)) {}
    Value(Entity e) : data_(std::move(e)) {}

    bool is_none() const { return std::holds_alternative<std::monostate>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_float() const { return std::holds_alternative<double>(data_); }
    bool is_number() const { return is_int() || is_float(); }
    bool is_str() const { return std::holds_alternative<std::string>(data_); }
    bool is_list() const { return std::holds_alternative<List>(data_); }
    bool is_dict() const { return std::holds_alternative<Dict>(data_); }
    bool is_entity() const { return std::holds_alternative<Entity>(data_); }

    bool as_bool() const { return std::get<bool>(data_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_float() const { return std::get<double>(data_); }
    const std::string& as_str() const { return std::get<std::string>(data_); }
    const List& as_list() const { return std::get<List>(data_); }
    const Dict& as_dict() const { return std::get<Dict>(data_); }
    const Entity& as_entity() const { return std::get<Entity>(data_); }

    // Numeric payload widened to double; only valid if is_number().
    double number() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }

    const Storage& storage() const { return data_; }

    const char* type_name() const {
        switch (data_.index()) {
            case 0: return "none";
            case 1: return "bool";
            case 2: return "int";
            case 3: return "float";
            case 4: return "string";
            case 5: return "list";
            case 6: return "dict";
            case 7: return "entity";
        }
        return "?";
    }

private:
    Storage data_;
};

inline bool truthy(const Value& v) {
    if (v.is_none()) return false;
    if (v.is_bool()) return v.as_bool();
    if (v.is_int()) return v.as_int() != 0;
    if (v.is_float()) return v.as_float() != 0.0;
    if (v.is_str()) return !v.as_str().empty();
    if (v.is_list()) return !v.as_list().empty();
    if (v.is_dict()) return !v.as_dict().empty();
    return true; // entity
}

// Structural equality with Int/Float coercion. NaN equals nothing.
inline bool deep_eq(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number()) {
        return a.number() == b.number();
    }
    if (a.storage().index() != b.storage().index()) return false;
    if (a.is_none()) return true;
    if (a.is_bool()) return a.as_bool() == b.as_bool();
    if (a.is_str()) return a.as_str() == b.as_str();
    if (a.is_list()) {
        const List& la = a.as_list();
        const List& lb = b.as_list();
        if (la.size() != lb.size()) return false;
        for (std::size_t i = 0; i < la.size(); ++i)
            if (!deep_eq(la[i], lb[i])) return false;
        return true;
    }
    if (a.is_dict()) {
        const Dict& da = a.as_dict();
        const Dict& db = b.as_dict();
        if (da.size() != db.size()) return false;
        auto ia = da.begin();
        auto ib = db.begin();
        for (; ia != da.end(); ++ia, ++ib) {
            if (ia->first != ib->first || !deep_eq(ia->second, ib->second)) return false;
        }
        return true;
    }
    // entity: same world-id and handle
    return a.as_entity().world == b.as_entity().world &&
           a.as_entity().handle == b.as_entity().handle;
}

namespace detail {

inline int type_rank(const Value& v) {
    // none < bool < numbers < string < list < dict < entity
    switch (v.storage().index()) {
        case 0: return 0;
        case 1: return 1;
        case 2: return 2;
        case 3: return 2;
        case 4: return 3;
        case 5: return 4;
        case 6: return 5;
        case 7: return 6;
    }
    return 7;
}

inline bool all_numeric(const List& l) {
    for (const Value& v : l)
        if (!v.is_number()) return false;
    return true;
}

} // namespace detail

// -1 / 0 / +1 total order: type rank first, then natural order within a type.
inline int compare(const Value& a, const Value& b) {
    int ra = detail::type_rank(a);
    int rb = detail::type_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (ra) {
        case 0: return 0;
        case 1: {
            int ia = a.as_bool() ? 1 : 0;
            int ib = b.as_bool() ? 1 : 0;
            return ia == ib ? 0 : (ia < ib ? -1 : 1);
        }
        case 2: {
            if (a.is_int() && b.is_int()) {
                std::int64_t x = a.as_int(), y = b.as_int();
                return x == y ? 0 : (x < y ? -1 : 1);
            }
            double x = a.number(), y = b.number();
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        case 3: {
            int c = a.as_str().compare(b.as_str());
            return c == 0 ? 0 : (c < 0 ? -1 : 1);
        }
        case 4: {
            const List& la = a.as_list();
            const List& lb = b.as_list();
            std::size_t n = std::min(la.size(), lb.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = compare(la[i], lb[i]);
                if (c != 0) return c;
            }
            return la.size() == lb.size() ? 0 : (la.size() < lb.size() ? -1 : 1);
        }
        case 5: {
            const Dict& da = a.as_dict();
            const Dict& db = b.as_dict();
            auto ia = da.begin();
            auto ib = db.begin();
            for (; ia != da.end() && ib != db.end(); ++ia, ++ib) {
                int c = ia->first.compare(ib->first);
                if (c != 0) return c < 0 ? -1 : 1;
                c = compare(ia->second, ib->second);
                if (c != 0) return c;
            }
            return da.size() == db.size() ? 0 : (da.size() < db.size() ? -1 : 1);
        }
        default: {
            const Entity& ea = a.as_entity();
            const Entity& eb = b.as_entity();
            int c = ea.world.compare(eb.world);
            if (c != 0) return c < 0 ? -1 : 1;
            return ea.handle == eb.handle ? 0 : (ea.handle < eb.handle ? -1 : 1);
        }
    }
}

inline bool value_less(const Value& a, const Value& b) { return compare(a, b) < 0; }

inline Value add(const Value& a, const Value& b) {
    if (a.is_entity() || b.is_entity())
        throw ScriptError(ErrorKind::TypeMismatch, "cannot add entities");
    if (a.is_int() && b.is_int()) return Value(a.as_int() + b.as_int());
    if (a.is_number() && b.is_number()) return Value(a.number() + b.number());
    if (a.is_str() && b.is_str()) return Value(a.as_str() + b.as_str());
    if (a.is_list() && b.is_list()) {
        const List& la = a.as_list();
        const List& lb = b.as_list();
        if (la.size() == lb.size() && detail::all_numeric(la) && detail::all_numeric(lb)) {
            List out;
            out.reserve(la.size());
            for (std::size_t i = 0; i < la.size(); ++i) out.push_back(add(la[i], lb[i]));
            return Value(std::move(out));
        }
        List out = la;
        out.insert(out.end(), lb.begin(), lb.end());
        return Value(std::move(out));
    }
    throw ScriptError(ErrorKind::TypeMismatch,
                      std::string("cannot add ") + a.type_name() + " and " + b.type_name());
}

inline Value subtract(const Value& a, const Value& b) {
    if (a.is_int() && b.is_int()) return Value(a.as_int() - b.as_int());
    if (a.is_number() && b.is_number()) return Value(a.number() - b.number());
    if (a.is_list() && b.is_list()) {
        const List& la = a.as_list();
        const List& lb = b.as_list();
        if (la.size() == lb.size() && detail::all_numeric(la) && detail::all_numeric(lb)) {
            List out;
            out.reserve(la.size());
            for (std::size_t i = 0; i < la.size(); ++i) out.push_back(subtract(la[i], lb[i]));
            return Value(std::move(out));
        }
    }
    throw ScriptError(ErrorKind::TypeMismatch,
                      std::string("cannot subtract ") + b.type_name() + " from " + a.type_name());
}

inline Value multiply(const Value& a, const Value& b) {
    if (a.is_int() && b.is_int()) return Value(a.as_int() * b.as_int());
    if (a.is_number() && b.is_number()) return Value(a.number() * b.number());
    throw ScriptError(ErrorKind::TypeMismatch,
                      std::string("cannot multiply ") + a.type_name() + " and " + b.type_name());
}

// Division is float division even for Int/Int operands.
inline Value divide(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number()) {
        double d = b.number();
        if (d == 0.0) throw ScriptError(ErrorKind::Runtime, "division by zero");
        return Value(a.number() / d);
    }
    throw ScriptError(ErrorKind::TypeMismatch,
                      std::string("cannot divide ") + a.type_name() + " by " + b.type_name());
}

inline Value negate(const Value& a) {
    if (a.is_int()) return Value(-a.as_int());
    if (a.is_float()) return Value(-a.as_float());
    throw ScriptError(ErrorKind::TypeMismatch,
                      std::string("cannot negate ") + a.type_name());
}

namespace detail {

inline void serialize_float(double d, std::string& out) {
    if (std::isnan(d)) { out += "nan"; return; }
    if (std::isinf(d)) { out += d < 0 ? "-inf" : "inf"; return; }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    std::string s(buf, res.ptr);
    // keep floats visually distinct from ints
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
    out += s;
}

inline void serialize_string(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

inline void serialize_into(const Value& v, std::string& out) {
    if (v.is_none()) { out += "none"; return; }
    if (v.is_bool()) { out += v.as_bool() ? "true" : "false"; return; }
    if (v.is_int()) { out += std::to_string(v.as_int()); return; }
    if (v.is_float()) { serialize_float(v.as_float(), out); return; }
    if (v.is_str()) { serialize_string(v.as_str(), out); return; }
    if (v.is_list()) {
        out += '[';
        bool first = true;
        for (const Value& e : v.as_list()) {
            if (!first) out += ", ";
            first = false;
            serialize_into(e, out);
        }
        out += ']';
        return;
    }
    if (v.is_dict()) {
        out += '{';
        bool first = true;
        for (const auto& [k, e] : v.as_dict()) {
            if (!first) out += ", ";
            first = false;
            serialize_string(k, out);
            out += ": ";
            serialize_into(e, out);
        }
        out += '}';
        return;
    }
    out += '@';
    out += v.as_entity().world;
    out += ':';
    out += std::to_string(v.as_entity().handle);
}

} // namespace detail

// Canonical textual rendering. Injective on the Value domain: used both as
// CLI output and as the recursion engine's state key.
inline std::string serialize(const Value& v) {
    std::string out;
    detail::serialize_into(v, out);
    return out;
}

// Identity (stronger than deep_eq: 2 and 2.0 differ here).
inline bool identical(const Value& a, const Value& b) {
    return serialize(a) == serialize(b);
}

} // namespace hquery

#endif
