#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cctm/extraction.h"
#include "cctm/features.h"
#include "cctm/naive_bayes.h"
#include "cctm/random_forest.h"
#include "cctm/taxonomy.h"

namespace cctm {

enum class Algorithm { kNaiveBayes, kTree, kForest };

// "nb" / "tree" / "forest".
std::string_view AlgorithmName(Algorithm algorithm);
Algorithm ParseAlgorithm(std::string_view name);

using BinaryClassifier =
    std::variant<NaiveBayesModel, DecisionTreeModel, RandomForestModel>;

// Probability-like score of the positive class in [0, 1].
double Score(const BinaryClassifier& classifier, const FeatureVector& features);

// True when no feature of the input is known to the classifier, so its
// score reflects class priors alone.
bool PriorsOnly(const BinaryClassifier& classifier, const FeatureVector& features);

// Inclusive threshold test. A score of exactly 0.5 that comes from priors
// alone (no known feature in the input) is negative.
bool DecidePositive(double score, double threshold, bool priors_only);

struct TrainOptions {
  Algorithm algorithm = Algorithm::kForest;
  FeatureMode feature_mode = FeatureMode::kNlpPlusTfidf;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  double nb_alpha = 1.0;
  int min_df = 2;
  TreeParams tree;
  ForestParams forest;
  unsigned num_threads = 0;  // 0 = hardware concurrency
};

// Trains one binary classifier on already balanced data.
BinaryClassifier TrainBinary(std::span<const Example> data,
                             const TrainOptions& options, std::uint64_t seed);

struct SkippedCategory {
  std::string name;
  std::string reason;

  bool operator==(const SkippedCategory&) const = default;
};

struct MultiLabelModel {
  int format_version = 1;
  Algorithm algorithm = Algorithm::kForest;
  FeatureMode feature_mode = FeatureMode::kNlpPlusTfidf;
  std::string taxonomy_version;
  std::string pattern_library_version;
  std::string preprocessing_chain;
  std::vector<Language> languages;  // model scope, sorted
  Vocabulary vocabulary;
  double threshold = 0.5;
  std::uint64_t train_seed = 42;
  int n_training_comments = 0;
  std::vector<SkippedCategory> skipped_categories;
  // Canonical taxonomy order.
  std::vector<std::pair<std::string, BinaryClassifier>> per_category;

  bool Covers(Language language) const;
  bool operator==(const MultiLabelModel&) const = default;
};

// Binary relevance: per applicable category, positives are the comments
// carrying the label and negatives the rest; each problem is balanced with
// seed + category index and trained with the same seed. Categories without
// both classes are recorded in skipped_categories. Throws EmptyDataset for
// fewer than two comments.
MultiLabelModel TrainMultiLabel(std::span<const LabeledComment> labeled,
                                const Taxonomy& taxonomy,
                                const PatternLibrary& patterns,
                                const TrainOptions& options);

struct CategoryScore {
  std::string category;
  double score = 0.0;
  bool included = false;
};

struct Classification {
  std::string comment_id;
  std::vector<CategoryScore> scores;  // every trained category
  std::vector<std::string> categories;  // included ones, canonical order
};

// Throws LanguageMismatch when the comment's language is outside the model
// scope and PatternLibraryMismatch when `patterns` differs from training.
Classification Classify(const MultiLabelModel& model,
                        const PatternLibrary& patterns,
                        const ClassComment& comment);

std::string ClassificationToJsonLine(const Classification& result);

// Byte-stable JSON; numbers use shortest round-trip formatting.
std::string SerializeModel(const MultiLabelModel& model);
// Throws cctm::Error (MalformedModel).
MultiLabelModel ParseModel(std::string_view json_text);

}  // namespace cctm
