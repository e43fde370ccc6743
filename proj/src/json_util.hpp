#pragma once

#include <json.hpp>

#include <string>

namespace statstok::detail {

using Json = nlohmann::ordered_json;

/// Compact-with-newlines dump where every floating value is printed with
/// %.17g so it reads back bit-identically. Non-finite values become null.
std::string dump_json(const Json& value, int indent = 2);

std::string format_double(double v);

/// Field access that raises SchemaError("missing field 'name'").
const Json& require(const Json& object, const char* name);

} // namespace statstok::detail
