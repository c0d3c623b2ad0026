#pragma once

// Internal JSON helpers shared by the core sources. Not installed.

#include <string>
#include <string_view>

#include <json.hpp>

#include "cctm/extraction.h"

namespace cctm::detail {

using Json = nlohmann::ordered_json;

// Compact, key order preserved, invalid UTF-8 replaced.
inline std::string Dump(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

inline std::string DumpPretty(const Json& value) {
  return value.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

// Parses JSON text; failures become cctm::Error of the given kind/class.
Json ParseJson(std::string_view text, bool config_error, const std::string& kind,
               const std::string& context);

Json CommentToJson(const ClassComment& comment);

// Reads the extraction fields of a record. Throws std::invalid_argument
// describing the first bad field.
ClassComment CommentFromJson(const Json& record);

// Throws std::invalid_argument unless every key of `object` is in `allowed`.
void RequireKnownKeys(const Json& object,
                      std::initializer_list<std::string_view> allowed,
                      const std::string& path);

}  // namespace cctm::detail
