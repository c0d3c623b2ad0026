#include "cctm/taxonomy.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cctm/error.h"
#include "embedded_default_taxonomy.h"
#include "json_util.h"

namespace cctm {
namespace {

using detail::Json;

bool IsValidCategoryName(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

[[noreturn]] void Schema(const std::string& path, const std::string& what) {
  throw ConfigError("SchemaError", path + ": " + what);
}

std::string ReadText(const std::filesystem::path& path, bool config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    const std::string message = "cannot read " + path.string();
    throw config ? ConfigError("IoError", message) : DataError("IoError", message);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

bool Category::AppliesTo(Language language) const {
  return std::find(languages.begin(), languages.end(), language) != languages.end();
}

Taxonomy::Taxonomy(std::string version, std::vector<Category> categories)
    : version_(std::move(version)), categories_(std::move(categories)) {}

const Category* Taxonomy::Find(std::string_view name) const {
  const int index = IndexOf(name);
  return index < 0 ? nullptr : &categories_[index];
}

int Taxonomy::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> Taxonomy::NamesFor(Language language) const {
  std::vector<std::string> names;
  for (const Category& c : categories_) {
    if (c.AppliesTo(language)) names.push_back(c.name);
  }
  return names;
}

Taxonomy ParseTaxonomy(std::string_view json_text) {
  const Json doc = detail::ParseJson(json_text, true, "SchemaError", "taxonomy");
  if (!doc.is_object()) Schema("$", "taxonomy must be an object");
  try {
    detail::RequireKnownKeys(doc, {"version", "categories"}, "$");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("SchemaError", e.what());
  }
  if (!doc.contains("version") || !doc["version"].is_string() ||
      doc["version"].get<std::string>().empty()) {
    Schema("$.version", "must be a non-empty string");
  }
  if (!doc.contains("categories") || !doc["categories"].is_array() ||
      doc["categories"].empty()) {
    Schema("$.categories", "must be a non-empty array");
  }

  std::vector<Category> categories;
  std::set<std::string> seen;
  const Json& list = doc["categories"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "$.categories[" + std::to_string(i) + "]";
    const Json& entry = list[i];
    if (!entry.is_object()) Schema(path, "must be an object");
    try {
      detail::RequireKnownKeys(
          entry, {"name", "description", "languages", "guideline_required"}, path);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("SchemaError", e.what());
    }
    Category category;
    if (!entry.contains("name") || !entry["name"].is_string()) {
      Schema(path + ".name", "must be a string");
    }
    category.name = entry["name"].get<std::string>();
    if (!IsValidCategoryName(category.name)) {
      Schema(path + ".name", "\"" + category.name + "\" is not a valid identifier");
    }
    if (!seen.insert(category.name).second) {
      Schema(path + ".name", "duplicate category \"" + category.name + "\"");
    }
    if (entry.contains("description")) {
      if (!entry["description"].is_string()) Schema(path + ".description", "must be a string");
      category.description = entry["description"].get<std::string>();
    }
    if (!entry.contains("languages") || !entry["languages"].is_array() ||
        entry["languages"].empty()) {
      Schema(path + ".languages", "must be a non-empty array");
    }
    for (std::size_t j = 0; j < entry["languages"].size(); ++j) {
      const Json& lang = entry["languages"][j];
      const auto parsed = lang.is_string() ? ParseLanguage(lang.get<std::string>())
                                           : std::nullopt;
      if (!parsed) {
        Schema(path + ".languages[" + std::to_string(j) + "]",
               "expected one of java, python, smalltalk");
      }
      category.languages.push_back(*parsed);
    }
    std::sort(category.languages.begin(), category.languages.end());
    category.languages.erase(
        std::unique(category.languages.begin(), category.languages.end()),
        category.languages.end());
    if (entry.contains("guideline_required")) {
      if (!entry["guideline_required"].is_boolean()) {
        Schema(path + ".guideline_required", "must be a boolean");
      }
      category.guideline_required = entry["guideline_required"].get<bool>();
    }
    categories.push_back(std::move(category));
  }
  return Taxonomy(doc["version"].get<std::string>(), std::move(categories));
}

Taxonomy LoadTaxonomy(const std::filesystem::path& path) {
  return ParseTaxonomy(ReadText(path, true));
}

const Taxonomy& DefaultTaxonomy() {
  static const Taxonomy taxonomy = ParseTaxonomy(embedded::default_taxonomy);
  return taxonomy;
}

std::string TaxonomyToJson(const Taxonomy& taxonomy) {
  Json doc = Json::object();
  doc["version"] = taxonomy.version();
  Json list = Json::array();
  for (const Category& c : taxonomy.categories()) {
    Json entry = Json::object();
    entry["name"] = c.name;
    entry["description"] = c.description;
    Json langs = Json::array();
    for (Language l : c.languages) langs.push_back(LanguageName(l));
    entry["languages"] = std::move(langs);
    entry["guideline_required"] = c.guideline_required;
    list.push_back(std::move(entry));
  }
  doc["categories"] = std::move(list);
  return detail::DumpPretty(doc);
}

bool LabeledComment::HasLabel(std::string_view name) const {
  return std::find(labels.begin(), labels.end(), name) != labels.end();
}

std::vector<LabeledComment> ParseLabeledDataset(std::string_view text,
                                                const Taxonomy& taxonomy) {
  std::vector<LabeledComment> out;
  std::size_t begin = 0;
  int line_number = 0;
  while (begin < text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(line_number);
    Json record;
    try {
      record = Json::parse(line.begin(), line.end());
    } catch (const Json::parse_error& e) {
      throw DataError("MalformedRecord", where + ": " + e.what());
    }
    LabeledComment labeled;
    try {
      labeled.comment = detail::CommentFromJson(record);
    } catch (const std::invalid_argument& e) {
      throw DataError("MalformedRecord", where + ": " + e.what());
    }
    if (!record.contains("labels") || !record["labels"].is_array()) {
      throw DataError("MalformedRecord", where + ": \"labels\" must be an array");
    }
    std::vector<int> indices;
    for (const Json& label : record["labels"]) {
      if (!label.is_string()) {
        throw DataError("MalformedRecord", where + ": labels must be strings");
      }
      const std::string name = label.get<std::string>();
      const int index = taxonomy.IndexOf(name);
      if (index < 0) {
        throw DataError("UnknownLabel", "record " + labeled.comment.id + ": \"" +
                                            name + "\" is not in taxonomy " +
                                            taxonomy.version());
      }
      if (!taxonomy.categories()[index].AppliesTo(labeled.comment.language)) {
        throw DataError("UnknownLabel",
                        "record " + labeled.comment.id + ": \"" + name +
                            "\" does not apply to " +
                            std::string(LanguageName(labeled.comment.language)));
      }
      indices.push_back(index);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (int index : indices) labeled.labels.push_back(taxonomy.categories()[index].name);
    out.push_back(std::move(labeled));
  }
  return out;
}

std::vector<LabeledComment> LoadLabeledDataset(const std::filesystem::path& path,
                                               const Taxonomy& taxonomy) {
  return ParseLabeledDataset(ReadText(path, false), taxonomy);
}

std::string ToJsonLine(const LabeledComment& labeled) {
  Json record = detail::CommentToJson(labeled.comment);
  record["labels"] = labeled.labels;
  return detail::Dump(record);
}

std::string SerializeLabeledDataset(const std::vector<LabeledComment>& data) {
  std::string out;
  for (const LabeledComment& labeled : data) {
    out += ToJsonLine(labeled);
    out.push_back('\n');
  }
  return out;
}

}  // namespace cctm
