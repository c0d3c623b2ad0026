#include "cctm/adherence.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cctm/error.h"
#include "cctm/extraction.h"
#include "embedded_guideline_java.h"
#include "embedded_guideline_python.h"
#include "embedded_guideline_smalltalk.h"
#include "json_util.h"

namespace cctm {
namespace {

using detail::Json;

[[noreturn]] void Schema(const std::string& path, const std::string& what) {
  throw ConfigError("SchemaError", path + ": " + what);
}

double Fraction(int num, int den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

}  // namespace

GuidelineSpec ParseGuidelineSpec(std::string_view json_text, const Taxonomy& taxonomy) {
  const Json doc = detail::ParseJson(json_text, true, "SchemaError", "guideline");
  if (!doc.is_object()) Schema("$", "guideline must be an object");
  try {
    detail::RequireKnownKeys(
        doc, {"name", "language", "required_categories", "require_comment_presence"}, "$");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("SchemaError", e.what());
  }
  GuidelineSpec spec;
  if (!doc.contains("name") || !doc["name"].is_string()) Schema("$.name", "must be a string");
  spec.name = doc["name"].get<std::string>();
  const auto language = doc.contains("language") && doc["language"].is_string()
                            ? ParseLanguage(doc["language"].get<std::string>())
                            : std::nullopt;
  if (!language) Schema("$.language", "expected one of java, python, smalltalk");
  spec.language = *language;
  if (!doc.contains("required_categories") || !doc["required_categories"].is_array()) {
    Schema("$.required_categories", "must be an array");
  }
  const Json& required = doc["required_categories"];
  for (std::size_t i = 0; i < required.size(); ++i) {
    const std::string path = "$.required_categories[" + std::to_string(i) + "]";
    if (!required[i].is_string()) Schema(path, "must be a string");
    const std::string name = required[i].get<std::string>();
    const Category* category = taxonomy.Find(name);
    if (category == nullptr) {
      Schema(path, "\"" + name + "\" is not in taxonomy " + taxonomy.version());
    }
    if (!category->AppliesTo(spec.language)) {
      Schema(path, "\"" + name + "\" does not apply to " +
                       std::string(LanguageName(spec.language)));
    }
    if (std::find(spec.required_categories.begin(), spec.required_categories.end(), name) !=
        spec.required_categories.end()) {
      Schema(path, "duplicate category \"" + name + "\"");
    }
    spec.required_categories.push_back(name);
  }
  if (doc.contains("require_comment_presence")) {
    if (!doc["require_comment_presence"].is_boolean()) {
      Schema("$.require_comment_presence", "must be a boolean");
    }
    spec.require_comment_presence = doc["require_comment_presence"].get<bool>();
  }
  return spec;
}

GuidelineSpec LoadGuidelineSpec(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("IoError", "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseGuidelineSpec(buffer.str(), taxonomy);
}

GuidelineSpec DefaultGuidelineSpec(Language language, const Taxonomy& taxonomy) {
  switch (language) {
    case Language::kJava:
      return ParseGuidelineSpec(embedded::guideline_java, taxonomy);
    case Language::kPython:
      return ParseGuidelineSpec(embedded::guideline_python, taxonomy);
    case Language::kSmalltalk:
      return ParseGuidelineSpec(embedded::guideline_smalltalk, taxonomy);
    case Language::kUnknown:
      break;
  }
  throw ConfigError("InvalidArgument", "no default guideline for an unknown language");
}

AdherenceReport CheckAdherence(std::span<const SourceFile> files, const MultiLabelModel& model,
                               const PatternLibrary& patterns, const Taxonomy& taxonomy,
                               const GuidelineSpec& spec) {
  if (model.taxonomy_version != taxonomy.version()) {
    throw ConfigError("TaxonomyVersionMismatch", "model uses taxonomy " +
                                                     model.taxonomy_version + ", got " +
                                                     taxonomy.version());
  }
  if (!model.Covers(spec.language)) {
    throw ConfigError("LanguageMismatch", "model does not cover " +
                                              std::string(LanguageName(spec.language)));
  }

  AdherenceReport report;
  report.guideline = spec.name;
  report.language = spec.language;
  std::map<std::string, int> hits;
  for (const SourceFile& file : files) {
    if (file.language != spec.language) {
      report.diagnostics.push_back(file.path + ": skipped, " +
                                   std::string(LanguageName(file.language)) +
                                   " is outside guideline " + spec.name);
      continue;
    }
    ExtractionResult extracted;
    try {
      extracted = Extract(file);
    } catch (const Error& e) {
      report.diagnostics.push_back(file.path + ": " + e.what());
      continue;
    }
    std::map<std::string, const ClassComment*> by_id;
    for (const ClassComment& c : extracted.comments) by_id.emplace(c.id, &c);
    for (const ClassDeclaration& decl : extracted.declarations) {
      ClassAdherence entry;
      entry.id = decl.id;
      entry.path = file.path;
      entry.class_name = decl.class_name;
      entry.declaration_line = decl.declaration_line;
      entry.has_comment = decl.has_comment;
      ++report.n_classes;
      if (decl.has_comment) {
        ++report.n_commented;
        entry.predicted = Classify(model, patterns, *by_id.at(decl.id)).categories;
      } else if (spec.require_comment_presence) {
        report.violations.push_back(decl.id);
      }
      for (const std::string& required : spec.required_categories) {
        const bool present = std::find(entry.predicted.begin(), entry.predicted.end(),
                                       required) != entry.predicted.end();
        (present ? entry.satisfied : entry.missing).push_back(required);
        if (present) ++hits[required];
      }
      report.per_class.push_back(std::move(entry));
    }
  }
  for (const std::string& required : spec.required_categories) {
    report.aggregate.emplace_back(required, Fraction(hits[required], report.n_commented));
  }
  report.comment_coverage = Fraction(report.n_commented, report.n_classes);
  return report;
}

std::string AdherenceToJson(const AdherenceReport& report) {
  Json doc = Json::object();
  doc["guideline"] = report.guideline;
  doc["language"] = LanguageName(report.language);
  doc["n_classes"] = report.n_classes;
  doc["n_commented"] = report.n_commented;
  doc["comment_coverage"] = report.comment_coverage;
  Json aggregate = Json::object();
  for (const auto& [name, fraction] : report.aggregate) aggregate[name] = fraction;
  doc["aggregate"] = std::move(aggregate);
  doc["violations"] = report.violations;
  Json classes = Json::array();
  for (const ClassAdherence& c : report.per_class) {
    classes.push_back(Json{{"id", c.id},
                           {"path", c.path},
                           {"class_name", c.class_name},
                           {"declaration_line", c.declaration_line},
                           {"has_comment", c.has_comment},
                           {"predicted", c.predicted},
                           {"satisfied", c.satisfied},
                           {"missing", c.missing}});
  }
  doc["per_class"] = std::move(classes);
  doc["diagnostics"] = report.diagnostics;
  return detail::DumpPretty(doc);
}

std::string AdherenceToText(const AdherenceReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "guideline " << report.guideline << " (" << LanguageName(report.language) << ")\n";
  out << "classes " << report.n_classes << ", commented " << report.n_commented
      << ", coverage " << report.comment_coverage << "\n";
  for (const auto& [name, fraction] : report.aggregate) {
    out << "  " << name << ": " << fraction << " of commented classes\n";
  }
  for (const ClassAdherence& c : report.per_class) {
    if (!c.has_comment) continue;
    if (c.missing.empty()) continue;
    out << "missing";
    for (const std::string& m : c.missing) out << " " << m;
    out << ": " << c.id << "\n";
  }
  for (const std::string& id : report.violations) out << "uncommented: " << id << "\n";
  for (const std::string& d : report.diagnostics) out << "note: " << d << "\n";
  out << (report.has_violations() ? "FAIL" : "OK") << ": " << report.violations.size()
      << " comment-presence violation(s)\n";
  return out.str();
}

}  // namespace cctm
