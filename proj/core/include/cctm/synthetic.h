#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cctm/taxonomy.h"

namespace cctm {

// Labeled corpus generator used by the acceptance benchmark.
//
// Every comment holds four filler sentences of the form "The <noun> <verb>s
// the <noun>." (the first always uses the verb "use"). A positive for a
// category additionally carries that category's signature sentence built
// from three signature words, and one filler sentence is rewritten into the
// category's trigger form. Trigger rewrites only add stopwords, punctuation
// or reorder words, so they are invisible to TF-IDF and visible only to the
// pattern features. A `noise_rate` fraction of comments lose their
// signature sentences.
struct SyntheticOptions {
  int n_per_category = 200;
  double noise_rate = 0.1;
  std::uint64_t seed = 7;
  double multi_label_rate = 0.2;
};

struct SyntheticCategory {
  std::string_view name;
  std::array<std::string_view, 3> signature;
  std::string_view trigger_pattern;
};

// The six generated categories, in taxonomy order.
const std::vector<SyntheticCategory>& SyntheticCategories();

// Throws ConfigError (InvalidArgument) when n_per_category < 10 or
// noise_rate is outside [0, 0.5), and SchemaError when the taxonomy lacks
// a generated category.
std::vector<LabeledComment> GenerateSynthetic(
    const SyntheticOptions& options, const Taxonomy& taxonomy = DefaultTaxonomy());

// Filler sentence and its trigger rewrite for category `category`
// (index into SyntheticCategories()).
std::string FillerSentence(std::string_view subject, std::string_view verb,
                           std::string_view object);
std::string TriggerSentence(std::size_t category, std::string_view subject,
                            std::string_view verb, std::string_view object);
std::string SignatureSentence(std::size_t category);

}  // namespace cctm
