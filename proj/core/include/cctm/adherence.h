#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cctm/features.h"
#include "cctm/multilabel.h"
#include "cctm/source_file.h"
#include "cctm/taxonomy.h"

namespace cctm {

struct GuidelineSpec {
  std::string name;
  Language language = Language::kUnknown;
  std::vector<std::string> required_categories;
  bool require_comment_presence = true;
};

// Throws SchemaError for malformed documents and for required categories
// missing from the taxonomy or not applicable to the language.
GuidelineSpec ParseGuidelineSpec(std::string_view json_text,
                                 const Taxonomy& taxonomy);
GuidelineSpec LoadGuidelineSpec(const std::filesystem::path& path,
                                const Taxonomy& taxonomy);
// Shipped defaults: {Summary} for Java and Python, {Summary, Usage, Example}
// for Smalltalk.
GuidelineSpec DefaultGuidelineSpec(Language language, const Taxonomy& taxonomy);

struct ClassAdherence {
  std::string id;
  std::string path;
  std::string class_name;
  int declaration_line = 0;
  bool has_comment = false;
  std::vector<std::string> predicted;
  std::vector<std::string> satisfied;
  std::vector<std::string> missing;
};

struct AdherenceReport {
  std::string guideline;
  Language language = Language::kUnknown;
  std::vector<ClassAdherence> per_class;
  // Per required category: fraction of commented classes predicted to
  // contain it.
  std::vector<std::pair<std::string, double>> aggregate;
  double comment_coverage = 0.0;
  int n_classes = 0;
  int n_commented = 0;
  // Ids of uncommented classes when comment presence is required.
  std::vector<std::string> violations;
  std::vector<std::string> diagnostics;

  bool has_violations() const { return !violations.empty(); }
};

// Classes come from extraction and commented ones are classified with the
// model, so the numbers inherit classifier error. Files in other languages
// are skipped; files failing extraction become diagnostics. Throws
// TaxonomyVersionMismatch and LanguageMismatch.
AdherenceReport CheckAdherence(std::span<const SourceFile> files,
                               const MultiLabelModel& model,
                               const PatternLibrary& patterns,
                               const Taxonomy& taxonomy,
                               const GuidelineSpec& spec);

std::string AdherenceToJson(const AdherenceReport& report);
std::string AdherenceToText(const AdherenceReport& report);

}  // namespace cctm
