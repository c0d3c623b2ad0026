#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cctm/features.h"
#include "cctm/multilabel.h"
#include "cctm/taxonomy.h"

namespace cctm {

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold;  // per instance, in [0, k)
};

// Positives and negatives are shuffled separately and dealt round-robin,
// negatives continuing where positives stopped, so fold sizes and per-fold
// positive counts each differ by at most one. Throws TooFewInstances when
// k < 2 or there are fewer than k instances.
FoldAssignment StratifiedKFold(const std::vector<bool>& labels, int k,
                               std::uint64_t seed);

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& other);
  bool operator==(const ConfusionCounts&) const = default;
};

// 0/0 is defined as 0; check the *Undefined helpers to flag it.
double Precision(const ConfusionCounts& c);
double Recall(const ConfusionCounts& c);
double F1(const ConfusionCounts& c);
bool PrecisionUndefined(const ConfusionCounts& c);
bool RecallUndefined(const ConfusionCounts& c);

struct ConfigFingerprint {
  std::string algorithm;
  std::string feature_mode;
  int k = 10;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  std::string taxonomy_version;
  std::string pattern_library_version;
  std::string preprocessing_chain;
  std::string dataset_hash;
  int n_comments = 0;

  bool operator==(const ConfigFingerprint&) const = default;
};

struct CategoryReport {
  std::string name;
  bool evaluated = false;
  std::string reason;  // why not evaluated
  ConfusionCounts confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  int folds_evaluated = 0;
  int support = 0;  // positives in the dataset
  std::vector<double> fold_f1;
  double fold_f1_variance = 0.0;

  bool operator==(const CategoryReport&) const = default;
};

struct MetricTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const MetricTriple&) const = default;
};

struct EvalReport {
  ConfigFingerprint fingerprint;
  std::vector<CategoryReport> per_category;  // canonical order
  MetricTriple macro;     // mean over evaluated categories
  MetricTriple weighted;  // weighted by support

  bool operator==(const EvalReport&) const = default;
};

// FNV-1a 64 over the serialized dataset, as 16 hex digits.
std::string DatasetHash(std::span<const LabeledComment> labeled);

// Training side of one fold: the vocabulary of the training comments and
// the balanced training rows (indices into `prepared`). Nothing outside
// `train` is read.
struct FoldTraining {
  Vocabulary vocabulary;
  std::vector<std::size_t> rows;
};

FoldTraining PrepareFoldTraining(std::span<const PreparedText> prepared,
                                 const std::vector<bool>& labels,
                                 std::span<const std::size_t> train, int min_df,
                                 std::uint64_t seed);

// Per category: independent stratified folds (seed + category index); per
// fold the vocabulary and balancing use the training split only; confusion
// counts are pooled across folds. Categories with fewer than k positives or
// negatives are reported unevaluated. Throws TooFewInstances when the
// dataset is smaller than k.
EvalReport CrossValidate(std::span<const LabeledComment> labeled,
                         const Taxonomy& taxonomy,
                         const PatternLibrary& patterns,
                         const TrainOptions& options, int k = 10);

std::string ReportToJson(const EvalReport& report);
EvalReport ParseReport(std::string_view json_text);
std::string ReportToTable(const EvalReport& report);

struct MetricDelta {
  std::string name;  // category, or "macro"
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ModeComparison {
  std::string label_a;
  std::string label_b;
  std::vector<MetricDelta> per_category;  // b - a, categories evaluated in both
  MetricDelta macro;
};

// Throws FingerprintMismatch unless dataset, seed, k, and versions agree.
ModeComparison CompareModes(const EvalReport& a, const EvalReport& b);
std::string ComparisonToTable(const ModeComparison& comparison);

}  // namespace cctm
