#include <gtest/gtest.h>

#include "cctm/error.h"
#include "cctm/multilabel.h"
#include "cctm/synthetic.h"
#include "test_support.h"

namespace cctm {

void PrintTo(Algorithm algorithm, std::ostream* os) { *os << AlgorithmName(algorithm); }

namespace {

LabeledComment Labeled(int n, Language language, std::string text,
                       std::vector<std::string> labels) {
  LabeledComment lc;
  lc.comment.class_name = "C" + std::to_string(n);
  lc.comment.language = language;
  lc.comment.path = "p/C" + std::to_string(n);
  lc.comment.id = lc.comment.path + "#" + lc.comment.class_name + "#0";
  lc.comment.raw_text = std::move(text);
  lc.labels = std::move(labels);
  return lc;
}

// Todo comments mention "todo", warnings "must not"; both categories have
// both classes. Nothing is labeled Summary.
std::vector<LabeledComment> TwoCategoryData() {
  std::vector<LabeledComment> data;
  for (int i = 0; i < 6; ++i) {
    data.push_back(Labeled(i, Language::kJava, "TODO: rework the cache layer.", {"Todo"}));
    data.push_back(Labeled(10 + i, Language::kJava, "Callers must not share the buffer.",
                           {"Warning"}));
    data.push_back(Labeled(20 + i, Language::kJava, "The buffer holds the cache.", {}));
  }
  return data;
}

Taxonomy TwoCategoryTaxonomy() {
  return ParseTaxonomy(R"({"version":"t2","categories":[
    {"name":"Todo","description":"d","languages":["java"]},
    {"name":"Warning","description":"d","languages":["java"]},
    {"name":"Summary","description":"d","languages":["java"]},
    {"name":"Pharo_Only","description":"d","languages":["smalltalk"]}]})");
}

TEST(TrainMultiLabel, TrainsLearnableAndSkipsDegenerate) {
  TrainOptions options;
  options.algorithm = Algorithm::kNaiveBayes;
  options.min_df = 1;
  const MultiLabelModel model =
      TrainMultiLabel(TwoCategoryData(), TwoCategoryTaxonomy(), DefaultPatternLibrary(), options);
  ASSERT_EQ(model.per_category.size(), 2u);
  EXPECT_EQ(model.per_category[0].first, "Todo");
  EXPECT_EQ(model.per_category[1].first, "Warning");
  ASSERT_EQ(model.skipped_categories.size(), 1u);
  EXPECT_EQ(model.skipped_categories[0].name, "Summary");
  EXPECT_NE(model.skipped_categories[0].reason.find("no positive"), std::string::npos);
  EXPECT_EQ(model.languages, std::vector<Language>{Language::kJava});
  EXPECT_TRUE(model.Covers(Language::kJava));
  EXPECT_FALSE(model.Covers(Language::kPython));
  EXPECT_EQ(model.n_training_comments, 18);
}

TEST(TrainMultiLabel, EmptyDataset) {
  const auto data = TwoCategoryData();
  try {
    TrainMultiLabel(std::span(data).first(1), TwoCategoryTaxonomy(), DefaultPatternLibrary(), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "EmptyDataset");
  }
}

class SyntheticModels : public ::testing::TestWithParam<Algorithm> {
 protected:
  static const std::vector<LabeledComment>& Corpus() {
    static const auto corpus = GenerateSynthetic({.n_per_category = 40, .noise_rate = 0.1, .seed = 3});
    return corpus;
  }
  MultiLabelModel Train(std::uint64_t seed) const {
    TrainOptions options;
    options.algorithm = GetParam();
    options.seed = seed;
    options.forest.n_trees = 15;
    return TrainMultiLabel(Corpus(), DefaultTaxonomy(), DefaultPatternLibrary(), options);
  }
};

TEST_P(SyntheticModels, ByteIdenticalAndRoundTrips) {
  const MultiLabelModel model = Train(42);
  const std::string bytes = SerializeModel(model);
  EXPECT_EQ(bytes, SerializeModel(Train(42)));
  const MultiLabelModel parsed = ParseModel(bytes);
  EXPECT_EQ(parsed, model);
  EXPECT_EQ(SerializeModel(parsed), bytes);
  EXPECT_EQ(model.per_category.size(), 6u);
  EXPECT_EQ(model.skipped_categories.size(), 11u);
}

TEST_P(SyntheticModels, SummarySignatureIsRecognised) {
  const MultiLabelModel model = Train(42);
  ClassComment comment;
  comment.id = "x.java#X#0";
  comment.language = Language::kJava;
  comment.raw_text =
      "I am the parser that reads the token. The overview and essence of the abstraction.";
  const Classification result = Classify(model, DefaultPatternLibrary(), comment);
  EXPECT_NE(std::find(result.categories.begin(), result.categories.end(), "Summary"),
            result.categories.end());
  EXPECT_EQ(result.scores.size(), 6u);
}

TEST_P(SyntheticModels, EmptyCommentHasNoCategories) {
  const MultiLabelModel model = Train(42);
  ClassComment comment;
  comment.language = Language::kPython;
  const Classification result = Classify(model, DefaultPatternLibrary(), comment);
  EXPECT_TRUE(result.categories.empty());
  EXPECT_EQ(result.scores.size(), 6u);
}

INSTANTIATE_TEST_SUITE_P(Algorithms, SyntheticModels,
                         ::testing::Values(Algorithm::kNaiveBayes, Algorithm::kTree,
                                           Algorithm::kForest),
                         [](const auto& info) { return std::string(AlgorithmName(info.param)); });

TEST(Classify, LanguageMismatch) {
  TrainOptions options;
  options.algorithm = Algorithm::kNaiveBayes;
  options.min_df = 1;
  const MultiLabelModel model =
      TrainMultiLabel(TwoCategoryData(), TwoCategoryTaxonomy(), DefaultPatternLibrary(), options);
  ClassComment comment;
  comment.language = Language::kSmalltalk;
  comment.raw_text = "TODO";
  try {
    Classify(model, DefaultPatternLibrary(), comment);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "LanguageMismatch");
    EXPECT_EQ(e.error_class(), ErrorClass::kData);
  }
}

TEST(Classify, ThresholdIsInclusive) {
  EXPECT_TRUE(DecidePositive(0.7, 0.7, false));
  EXPECT_FALSE(DecidePositive(0.7 - 1e-12, 0.7, false));
  EXPECT_TRUE(DecidePositive(0.5, 0.5, false));
  EXPECT_FALSE(DecidePositive(0.5, 0.5, true));
  EXPECT_TRUE(DecidePositive(0.6, 0.5, true));

  // A model whose single tree is one leaf scores exactly pos_fraction.
  MultiLabelModel model;
  model.threshold = 0.75;
  model.languages = {Language::kJava};
  model.pattern_library_version = DefaultPatternLibrary().version();
  model.feature_mode = FeatureMode::kTfidfOnly;
  DecisionTreeModel leaf;
  leaf.nodes.push_back(TreeNode{.positive = true, .pos_fraction = 0.75});
  model.per_category.emplace_back("Todo", leaf);
  ClassComment comment;
  comment.language = Language::kJava;
  comment.raw_text = "anything at all";
  const Classification result = Classify(model, DefaultPatternLibrary(), comment);
  EXPECT_EQ(result.scores[0].score, 0.75);
  EXPECT_EQ(result.categories, std::vector<std::string>{"Todo"});
}

TEST(ParseModel, RejectsMalformed) {
  for (const char* text : {"", "{}", "[1]", R"({"format_version":1})"}) {
    try {
      ParseModel(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), "MalformedModel") << text;
    }
  }
}

}  // namespace
}  // namespace cctm
