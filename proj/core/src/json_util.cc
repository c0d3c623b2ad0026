#include "json_util.h"

#include <algorithm>
#include <stdexcept>

#include "cctm/error.h"

namespace cctm::detail {

Json ParseJson(std::string_view text, bool config_error, const std::string& kind,
               const std::string& context) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::string message = context + ": " + e.what();
    throw config_error ? ConfigError(kind, message) : DataError(kind, message);
  }
}

Json CommentToJson(const ClassComment& comment) {
  Json out = Json::object();
  out["id"] = comment.id;
  out["language"] = LanguageName(comment.language);
  out["class_name"] = comment.class_name;
  out["raw_text"] = comment.raw_text;
  out["start_line"] = comment.start_line;
  out["end_line"] = comment.end_line;
  out["declaration_line"] = comment.declaration_line;
  out["path"] = comment.path;
  return out;
}

namespace {

const Json& Field(const Json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end()) {
    throw std::invalid_argument(std::string("missing field \"") + name + "\"");
  }
  return *it;
}

std::string StringField(const Json& record, const char* name) {
  const Json& value = Field(record, name);
  if (!value.is_string()) {
    throw std::invalid_argument(std::string("field \"") + name + "\" must be a string");
  }
  return value.get<std::string>();
}

int LineField(const Json& record, const char* name) {
  const Json& value = Field(record, name);
  if (!value.is_number_integer() || value.get<long long>() < 1 ||
      value.get<long long>() > INT32_MAX) {
    throw std::invalid_argument(std::string("field \"") + name +
                                "\" must be a positive integer");
  }
  return value.get<int>();
}

}  // namespace

ClassComment CommentFromJson(const Json& record) {
  if (!record.is_object()) throw std::invalid_argument("record is not an object");
  ClassComment comment;
  comment.id = StringField(record, "id");
  const std::string language = StringField(record, "language");
  const auto parsed = ParseLanguage(language);
  if (!parsed) throw std::invalid_argument("unknown language \"" + language + "\"");
  comment.language = *parsed;
  comment.class_name = StringField(record, "class_name");
  comment.raw_text = StringField(record, "raw_text");
  comment.start_line = LineField(record, "start_line");
  comment.end_line = LineField(record, "end_line");
  comment.declaration_line = LineField(record, "declaration_line");
  comment.path = StringField(record, "path");
  if (comment.id.empty()) throw std::invalid_argument("empty id");
  if (comment.start_line > comment.end_line) {
    throw std::invalid_argument("start_line exceeds end_line");
  }
  return comment;
}

void RequireKnownKeys(const Json& object,
                      std::initializer_list<std::string_view> allowed,
                      const std::string& path) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw std::invalid_argument(path + ": unknown field \"" + it.key() + "\"");
    }
  }
}

}  // namespace cctm::detail
