#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cctm/regex_lite.h"
#include "cctm/textproc.h"

namespace cctm {

// Sparse feature map. Ids are namespaced "tfidf:<term>" or "pat:<id>".
// Zero weights are never stored.
class FeatureVector {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  FeatureVector() = default;
  explicit FeatureVector(Map entries);

  void Set(std::string id, double weight);
  double Get(std::string_view id) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const Map& entries() const { return entries_; }

  bool operator==(const FeatureVector&) const = default;

 private:
  Map entries_;
};

inline constexpr std::string_view kTfidfPrefix = "tfidf:";
inline constexpr std::string_view kPatternPrefix = "pat:";

struct Vocabulary {
  std::vector<std::string> terms;  // sorted, unique
  std::vector<int> doc_freq;       // parallel to terms
  int n_docs = 0;
  int min_df = 2;

  // Index of `term` in `terms`, or -1.
  int Find(std::string_view term) const;
  bool operator==(const Vocabulary&) const = default;
};

// Throws cctm::Error (EmptyCorpus) for an empty corpus.
Vocabulary BuildVocabulary(std::span<const TokenStream> corpus, int min_df = 2);

// weight(t) = count(t) * (ln((1 + N) / (1 + df(t))) + 1), then the block is
// L2-normalised. Out-of-vocabulary tokens are ignored.
FeatureVector TfidfVector(const TokenStream& doc, const Vocabulary& vocab);

enum class MatcherKind { kKeywordSet, kPrefix, kTemplate, kRegexLite };

struct Pattern {
  std::string id;
  MatcherKind kind = MatcherKind::kKeywordSet;
  std::vector<std::string> spec;
  std::string description;
};

class PatternLibrary {
 public:
  PatternLibrary() = default;
  // Throws cctm::Error (SchemaError) on duplicate ids or bad regex-lite
  // expressions.
  PatternLibrary(std::string version, std::vector<Pattern> patterns);

  const std::string& version() const { return version_; }
  const std::vector<Pattern>& patterns() const { return patterns_; }

  // True iff pattern `index` matches the sentence.
  bool Matches(std::size_t index, std::string_view sentence,
               const TokenStream& raw_tokens) const;

 private:
  std::string version_;
  std::vector<Pattern> patterns_;
  // Per pattern: tokenised phrases (keyword/prefix/template kinds) or
  // compiled expressions (regex-lite kind).
  std::vector<std::vector<TokenStream>> phrases_;
  std::vector<std::vector<RegexLite>> expressions_;
};

// Throws cctm::Error (UnknownMatcherKind, SchemaError).
PatternLibrary ParsePatternLibrary(std::string_view json_text);
PatternLibrary LoadPatternLibrary(const std::filesystem::path& path);
// The shipped 14-pattern library.
const PatternLibrary& DefaultPatternLibrary();
std::string PatternLibraryToJson(const PatternLibrary& library);

// "pat:<id>" = 1 for every pattern matched by at least one sentence.
FeatureVector PatternFeatures(std::span<const Sentence> sentences,
                              const PatternLibrary& library);

// Disjoint union. Throws cctm::Error (NamespaceCollision) on a shared id.
FeatureVector Combine(const FeatureVector& tfidf, const FeatureVector& patterns);

enum class FeatureMode { kTfidfOnly, kNlpPlusTfidf };

// "tfidf" / "nlp+tfidf".
std::string_view FeatureModeName(FeatureMode mode);
FeatureMode ParseFeatureMode(std::string_view name);

// Per-comment work that does not depend on corpus statistics.
struct PreparedText {
  TokenStream terms;
  FeatureVector patterns;
};

PreparedText PrepareText(std::string_view text, const PatternLibrary& library);

FeatureVector Featurize(const PreparedText& prepared, const Vocabulary& vocab,
                        FeatureMode mode);

}  // namespace cctm
