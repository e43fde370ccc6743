#include "json_util.hpp"

#include "statstok/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace statstok::detail {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_into(const Json& value, int indent, int depth, std::string& out) {
    const auto newline = [&](int level) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * level), ' ');
    };
    switch (value.type()) {
    case Json::value_t::object: {
        if (value.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            dump_into(it.value(), indent, depth + 1, out);
        }
        newline(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (value.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::none_of(value.begin(), value.end(),
                                       [](const Json& e) { return e.is_structured(); });
        out += '[';
        bool first = true;
        for (const auto& e : value) {
            if (!first) out += flat ? (indent < 0 ? "," : ", ") : ",";
            first = false;
            if (!flat) newline(depth + 1);
            dump_into(e, indent, depth + 1, out);
        }
        if (!flat) newline(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float:
        out += format_double(value.get<double>());
        return;
    default:
        out += value.dump();
        return;
    }
}

} // namespace

std::string dump_json(const Json& value, int indent) {
    std::string out;
    dump_into(value, indent, 0, out);
    return out;
}

const Json& require(const Json& object, const char* name) {
    if (!object.is_object() || !object.contains(name)) {
        throw Error(ErrorCode::SchemaError, std::string("missing field '") + name + "'");
    }
    return object.at(name);
}

} // namespace statstok::detail
