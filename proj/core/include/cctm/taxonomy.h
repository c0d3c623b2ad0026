#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cctm/extraction.h"
#include "cctm/language.h"

namespace cctm {

struct Category {
  std::string name;
  std::string description;
  std::vector<Language> languages;  // sorted, unique, non-empty
  bool guideline_required = false;

  bool AppliesTo(Language language) const;
};

class Taxonomy {
 public:
  Taxonomy() = default;
  Taxonomy(std::string version, std::vector<Category> categories);

  const std::string& version() const { return version_; }
  // Canonical order used by reports and model files.
  const std::vector<Category>& categories() const { return categories_; }

  const Category* Find(std::string_view name) const;
  // Position in the canonical order, or -1.
  int IndexOf(std::string_view name) const;
  std::vector<std::string> NamesFor(Language language) const;

 private:
  std::string version_;
  std::vector<Category> categories_;
};

// Parses and validates a taxonomy document. Throws cctm::Error (SchemaError)
// naming the offending JSON path.
Taxonomy ParseTaxonomy(std::string_view json_text);
Taxonomy LoadTaxonomy(const std::filesystem::path& path);
// The shipped 17-category stand-in taxonomy.
const Taxonomy& DefaultTaxonomy();
std::string TaxonomyToJson(const Taxonomy& taxonomy);

struct LabeledComment {
  ClassComment comment;
  // Canonical taxonomy order; may be empty.
  std::vector<std::string> labels;

  bool HasLabel(std::string_view name) const;
  bool operator==(const LabeledComment&) const = default;
};

// Parses a labeled JSON-Lines dataset. Blank lines are skipped. Errors:
// MalformedRecord (with line number) and UnknownLabel (record id, label),
// the latter also for labels not applicable to the record's language.
std::vector<LabeledComment> ParseLabeledDataset(std::string_view text,
                                                const Taxonomy& taxonomy);
std::vector<LabeledComment> LoadLabeledDataset(
    const std::filesystem::path& path, const Taxonomy& taxonomy);

std::string ToJsonLine(const LabeledComment& labeled);
// Records joined by '\n', each terminated by '\n'.
std::string SerializeLabeledDataset(const std::vector<LabeledComment>& data);

}  // namespace cctm
