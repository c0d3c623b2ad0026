#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cctm/error.h"
#include "cctm/evaluation.h"
#include "cctm/synthetic.h"
#include "test_support.h"

namespace cctm {
namespace {

std::vector<bool> Labels(std::size_t pos, std::size_t neg) {
  std::vector<bool> labels(pos, true);
  labels.resize(pos + neg, false);
  return labels;
}

TEST(StratifiedKFold, Examples) {
  const auto labels = Labels(20, 80);
  const FoldAssignment folds = StratifiedKFold(labels, 10, 42);
  ASSERT_EQ(folds.fold.size(), 100u);
  for (int f = 0; f < 10; ++f) {
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (folds.fold[i] != f) continue;
      (labels[i] ? pos : neg) += 1;
    }
    EXPECT_EQ(pos, 2);
    EXPECT_EQ(neg, 8);
  }

  const FoldAssignment singletons = StratifiedKFold(Labels(3, 7), 10, 1);
  EXPECT_EQ(std::set<int>(singletons.fold.begin(), singletons.fold.end()).size(), 10u);

  try {
    StratifiedKFold(Labels(2, 3), 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "TooFewInstances");
  }
  EXPECT_THROW(StratifiedKFold(Labels(2, 3), 1, 1), Error);
}

// Sizes and positive counts per fold each differ by at most one.
bool Stratified(const std::vector<bool>& labels, const FoldAssignment& folds) {
  std::vector<int> size(folds.k), pos(folds.k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (folds.fold[i] < 0 || folds.fold[i] >= folds.k) return false;
    ++size[folds.fold[i]];
    pos[folds.fold[i]] += labels[i] ? 1 : 0;
  }
  auto spread = [](const std::vector<int>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  return spread(size) <= 1 && spread(pos) <= 1;
}

TEST(StratifiedKFold, BalancedForRandomInputs) {
  Rng rng(2025);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.Below(11));
    std::vector<bool> labels(k + rng.Below(200));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = rng.Below(4) == 0;
    const FoldAssignment folds = StratifiedKFold(labels, k, rng.Next());
    EXPECT_TRUE(Stratified(labels, folds)) << trial;
  }
}

TEST(StratifiedKFold, DeterministicPerSeed) {
  const auto labels = Labels(17, 53);
  EXPECT_EQ(StratifiedKFold(labels, 5, 9).fold, StratifiedKFold(labels, 5, 9).fold);
  EXPECT_NE(StratifiedKFold(labels, 5, 9).fold, StratifiedKFold(labels, 5, 10).fold);
}

struct MetricCase {
  ConfusionCounts counts;
  double precision, recall, f1;
  bool precision_undefined, recall_undefined;
};

TEST(Metrics, FixedConfusionMatrices) {
  const std::vector<MetricCase> cases = {
      {{8, 2, 2, 0}, 0.8, 0.8, 0.8, false, false},
      {{0, 0, 5, 3}, 0.0, 0.0, 0.0, true, false},
      {{0, 4, 0, 6}, 0.0, 0.0, 0.0, false, true},
      {{0, 0, 0, 9}, 0.0, 0.0, 0.0, true, true},
      {{10, 0, 0, 0}, 1.0, 1.0, 1.0, false, false},
      {{1, 3, 0, 0}, 0.25, 1.0, 0.4, false, false},
      {{3, 1, 5, 2}, 0.75, 0.375, 0.5, false, false},
      {{6, 2, 2, 90}, 0.75, 0.75, 0.75, false, false},
      {{1, 1, 3, 0}, 0.5, 0.25, 1.0 / 3.0, false, false},
      {{9, 3, 1, 4}, 0.75, 0.9, 18.0 / 22.0, false, false},
  };
  for (const MetricCase& c : cases) {
    EXPECT_EQ(Precision(c.counts), c.precision);
    EXPECT_EQ(Recall(c.counts), c.recall);
    EXPECT_EQ(F1(c.counts), c.f1);
    EXPECT_EQ(PrecisionUndefined(c.counts), c.precision_undefined);
    EXPECT_EQ(RecallUndefined(c.counts), c.recall_undefined);
  }
}

const std::vector<LabeledComment>& SmallCorpus() {
  static const auto corpus =
      GenerateSynthetic({.n_per_category = 30, .noise_rate = 0.1, .seed = 11});
  return corpus;
}

TrainOptions FastForest() {
  TrainOptions options;
  options.forest.n_trees = 10;
  return options;
}

const EvalReport& SmallReport() {
  static const EvalReport report =
      CrossValidate(SmallCorpus(), DefaultTaxonomy(), DefaultPatternLibrary(), FastForest(), 5);
  return report;
}

TEST(CrossValidate, ReportInvariants) {
  const EvalReport& report = SmallReport();
  ASSERT_EQ(report.per_category.size(), DefaultTaxonomy().categories().size());
  double min_f1 = 1.0, max_f1 = 0.0, macro_f1 = 0.0;
  int evaluated = 0;
  for (const CategoryReport& c : report.per_category) {
    if (!c.evaluated) {
      EXPECT_FALSE(c.reason.empty()) << c.name;
      EXPECT_EQ(c.folds_evaluated, 0);
      continue;
    }
    ++evaluated;
    // Pooled confusion reproduces the reported numbers exactly.
    EXPECT_EQ(c.precision, Precision(c.confusion));
    EXPECT_EQ(c.recall, Recall(c.confusion));
    EXPECT_EQ(c.f1, F1(c.confusion));
    EXPECT_EQ(c.confusion.total(), static_cast<long>(SmallCorpus().size()));
    EXPECT_EQ(c.confusion.tp + c.confusion.fn, c.support);
    EXPECT_EQ(c.folds_evaluated, 5);
    EXPECT_EQ(c.fold_f1.size(), 5u);
    for (double m : {c.precision, c.recall, c.f1}) {
      EXPECT_GE(m, 0.0);
      EXPECT_LE(m, 1.0);
    }
    min_f1 = std::min(min_f1, c.f1);
    max_f1 = std::max(max_f1, c.f1);
    macro_f1 += c.f1;
  }
  EXPECT_EQ(evaluated, 6);
  EXPECT_NEAR(report.macro.f1, macro_f1 / evaluated, 1e-15);
  EXPECT_GE(report.weighted.f1, min_f1 - 1e-15);
  EXPECT_LE(report.weighted.f1, max_f1 + 1e-15);
  EXPECT_EQ(report.fingerprint.n_comments, 180);
  EXPECT_EQ(report.fingerprint.dataset_hash, DatasetHash(SmallCorpus()));
}

TEST(CrossValidate, DeterministicReportBytes) {
  const EvalReport again =
      CrossValidate(SmallCorpus(), DefaultTaxonomy(), DefaultPatternLibrary(), FastForest(), 5);
  EXPECT_EQ(ReportToJson(again), ReportToJson(SmallReport()));
  EXPECT_EQ(ParseReport(ReportToJson(again)), again);
}

TEST(CrossValidate, CategoryWithTooFewPositivesIsUnevaluated) {
  std::vector<LabeledComment> data = SmallCorpus();
  int kept = 0;
  for (LabeledComment& lc : data) {
    auto it = std::find(lc.labels.begin(), lc.labels.end(), "Warning");
    if (it != lc.labels.end() && ++kept > 3) lc.labels.erase(it);
  }
  TrainOptions options = FastForest();
  options.algorithm = Algorithm::kNaiveBayes;
  const EvalReport report =
      CrossValidate(data, DefaultTaxonomy(), DefaultPatternLibrary(), options, 10);
  const CategoryReport& warning =
      report.per_category[DefaultTaxonomy().IndexOf("Warning")];
  EXPECT_FALSE(warning.evaluated);
  EXPECT_EQ(warning.support, 3);
  EXPECT_NE(warning.reason.find("too few"), std::string::npos);
  EXPECT_TRUE(report.per_category[DefaultTaxonomy().IndexOf("Summary")].evaluated);
}

TEST(CrossValidate, DatasetSmallerThanK) {
  const auto& corpus = SmallCorpus();
  try {
    CrossValidate(std::span(corpus).first(4), DefaultTaxonomy(), DefaultPatternLibrary(),
                  FastForest(), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "TooFewInstances");
  }
}

TEST(CrossValidate, NoLeakageFromTestFold) {
  const auto& corpus = SmallCorpus();
  std::vector<PreparedText> prepared;
  std::vector<bool> labels;
  for (const LabeledComment& lc : corpus) {
    prepared.push_back(PrepareText(lc.comment.raw_text, DefaultPatternLibrary()));
    labels.push_back(lc.HasLabel("Usage"));
  }
  const FoldAssignment folds = StratifiedKFold(labels, 5, 42);
  for (int f = 0; f < 5; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < corpus.size(); ++i) (folds.fold[i] == f ? test : train).push_back(i);
    const FoldTraining base = PrepareFoldTraining(prepared, labels, train, 2, 7);
    // Rewriting and relabelling every test comment changes nothing.
    auto altered_text = prepared;
    auto altered_labels = labels;
    for (std::size_t i : test) {
      altered_text[i] = PrepareText("Zebra quantum overview TODO: leak?", DefaultPatternLibrary());
      altered_labels[i] = !altered_labels[i];
    }
    const FoldTraining again = PrepareFoldTraining(altered_text, altered_labels, train, 2, 7);
    EXPECT_EQ(again.vocabulary, base.vocabulary);
    EXPECT_EQ(again.rows, base.rows);
    for (std::size_t row : base.rows) {
      EXPECT_NE(folds.fold[row], f);
    }
  }
}

TEST(CompareModes, ZeroDeltasAndFingerprintChecks) {
  const EvalReport& a = SmallReport();
  const ModeComparison same = CompareModes(a, a);
  EXPECT_EQ(same.macro.f1, 0.0);
  EXPECT_EQ(same.per_category.size(), 6u);
  for (const MetricDelta& d : same.per_category) {
    EXPECT_EQ(d.precision, 0.0);
    EXPECT_EQ(d.recall, 0.0);
    EXPECT_EQ(d.f1, 0.0);
  }
  EvalReport other = a;
  other.fingerprint.seed = 43;
  try {
    CompareModes(a, other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "FingerprintMismatch");
  }
  other = a;
  other.fingerprint.dataset_hash = "0000000000000000";
  EXPECT_THROW(CompareModes(a, other), Error);

  other = a;
  other.fingerprint.feature_mode = "tfidf";
  other.macro.f1 = a.macro.f1 - 0.25;
  const ModeComparison delta = CompareModes(other, a);
  EXPECT_NEAR(delta.macro.f1, 0.25, 1e-15);
  EXPECT_FALSE(ComparisonToTable(delta).empty());
}

TEST(ParseReport, RejectsMalformed) {
  try {
    ParseReport("{\"fingerprint\": 3}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "MalformedReport");
  }
}

}  // namespace
}  // namespace cctm
