#include <gtest/gtest.h>

#include <algorithm>

#include "cctm/adherence.h"
#include "cctm/error.h"
#include "cctm/extraction.h"
#include "cctm/synthetic.h"
#include "test_support.h"

namespace cctm {
namespace {

std::filesystem::path FixtureDir() { return testing::DataDir() / "fixtures" / "adherence"; }

std::vector<SourceFile> ReadFixture(const std::vector<std::string>& subdirs) {
  std::vector<std::filesystem::path> inputs;
  for (const std::string& d : subdirs) inputs.push_back(FixtureDir() / d);
  std::vector<std::string> diagnostics;
  std::vector<SourceFile> files;
  for (const SourceEntry& e : CollectSourceFiles(inputs, std::nullopt, &diagnostics)) {
    files.push_back(ReadSourceFile(e.path, std::nullopt, e.display_path));
  }
  EXPECT_TRUE(diagnostics.empty());
  return files;
}

const MultiLabelModel& SyntheticModel() {
  static const MultiLabelModel model = [] {
    const auto corpus = GenerateSynthetic({.n_per_category = 200, .noise_rate = 0.1, .seed = 7});
    return TrainMultiLabel(corpus, DefaultTaxonomy(), DefaultPatternLibrary(), TrainOptions{});
  }();
  return model;
}

GuidelineSpec Guideline(const std::string& name) {
  return LoadGuidelineSpec(FixtureDir() / name, DefaultTaxonomy());
}

bool Has(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// The fixture is built so that seven comments carry Summary content and
// three carry Warning content. Verify the classifier agrees per class
// before trusting any aggregate.
TEST(AdherenceFixture, ClassifierAgreesWithConstruction) {
  const std::vector<std::string> summary = {"Ledger", "Archive", "Journal", "Socket",
                                            "Socket.Frame", "Parser", "Table"};
  int n = 0;
  for (const SourceFile& file : ReadFixture({"commented"})) {
    for (const ClassComment& c : ExtractClassComments(file)) {
      ++n;
      const Classification result = Classify(SyntheticModel(), DefaultPatternLibrary(), c);
      const bool is_summary = Has(summary, c.class_name);
      EXPECT_EQ(Has(result.categories, "Summary"), is_summary) << c.id;
      EXPECT_EQ(Has(result.categories, "Warning"), !is_summary) << c.id;
    }
  }
  EXPECT_EQ(n, 10);
}

TEST(CheckAdherence, SummaryFractionOnTenClassFixture) {
  const auto files = ReadFixture({"commented"});
  const AdherenceReport report = CheckAdherence(files, SyntheticModel(), DefaultPatternLibrary(),
                                                DefaultTaxonomy(), Guideline("summary_only.json"));
  EXPECT_EQ(report.n_classes, 10);
  EXPECT_EQ(report.n_commented, 10);
  EXPECT_EQ(report.comment_coverage, 1.0);
  ASSERT_EQ(report.aggregate.size(), 1u);
  EXPECT_EQ(report.aggregate[0].first, "Summary");
  EXPECT_EQ(report.aggregate[0].second, 0.7);
  EXPECT_FALSE(report.has_violations());
  EXPECT_NE(AdherenceToText(report).find("OK"), std::string::npos);
}

TEST(CheckAdherence, UncommentedClassesAreViolations) {
  const auto files = ReadFixture({"commented", "uncommented"});
  const AdherenceReport report = CheckAdherence(files, SyntheticModel(), DefaultPatternLibrary(),
                                                DefaultTaxonomy(), Guideline("summary_only.json"));
  EXPECT_EQ(report.n_classes, 12);
  EXPECT_EQ(report.n_commented, 10);
  EXPECT_EQ(report.comment_coverage, 10.0 / 12.0);
  EXPECT_EQ(report.aggregate[0].second, 0.7);
  const std::string bare = (FixtureDir() / "uncommented" / "Bare.java").generic_string();
  EXPECT_EQ(report.violations,
            (std::vector<std::string>{bare + "#Bare#0", bare + "#Helper#0"}));
  EXPECT_NE(AdherenceToText(report).find("FAIL"), std::string::npos);

  // Report completeness: each extracted class appears exactly once, and
  // satisfied plus missing always covers the required list.
  std::set<std::string> ids;
  for (const ClassAdherence& c : report.per_class) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    std::vector<std::string> all = c.satisfied;
    all.insert(all.end(), c.missing.begin(), c.missing.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, std::vector<std::string>{"Summary"}) << c.id;
    if (!c.has_comment) EXPECT_TRUE(c.satisfied.empty());
  }
  EXPECT_EQ(ids.size(), 12u);
}

TEST(CheckAdherence, PresenceOptionalHasNoViolations) {
  const auto files = ReadFixture({"commented", "uncommented"});
  const AdherenceReport report = CheckAdherence(files, SyntheticModel(), DefaultPatternLibrary(),
                                                DefaultTaxonomy(),
                                                Guideline("presence_optional.json"));
  EXPECT_FALSE(report.has_violations());
  ASSERT_EQ(report.aggregate.size(), 2u);
  EXPECT_EQ(report.aggregate[0].second, 0.7);
  EXPECT_EQ(report.aggregate[1].first, "Warning");
  EXPECT_EQ(report.aggregate[1].second, 0.3);
}

TEST(CheckAdherence, TwoClassExamples) {
  const std::string both =
      "/** I am the parser that reads the token. The overview and essence of the abstraction. */\n"
      "class A {}\n"
      "/** I am the table that stores the vector. The overview and essence of the abstraction. */\n"
      "class B {}\n";
  const std::vector<SourceFile> full{MakeSourceFile("Two.java", both)};
  const AdherenceReport all = CheckAdherence(full, SyntheticModel(), DefaultPatternLibrary(),
                                             DefaultTaxonomy(), Guideline("summary_only.json"));
  EXPECT_EQ(all.aggregate[0].second, 1.0);
  EXPECT_EQ(all.comment_coverage, 1.0);

  const std::vector<SourceFile> half{MakeSourceFile(
      "Half.java",
      "/** I am the parser that reads the token. The overview of the abstraction. */\n"
      "class A {}\nclass B {}\n")};
  EXPECT_EQ(CheckAdherence(half, SyntheticModel(), DefaultPatternLibrary(), DefaultTaxonomy(),
                           Guideline("summary_only.json"))
                .comment_coverage,
            0.5);
}

TEST(CheckAdherence, ConfigErrors) {
  const auto files = ReadFixture({"commented"});
  MultiLabelModel stale = SyntheticModel();
  stale.taxonomy_version = "old";
  try {
    CheckAdherence(files, stale, DefaultPatternLibrary(), DefaultTaxonomy(),
                   Guideline("summary_only.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "TaxonomyVersionMismatch");
  }
  MultiLabelModel python_only = SyntheticModel();
  python_only.languages = {Language::kPython};
  try {
    CheckAdherence(files, python_only, DefaultPatternLibrary(), DefaultTaxonomy(),
                   Guideline("summary_only.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "LanguageMismatch");
  }
}

TEST(CheckAdherence, MonotoneInPredictions) {
  // Lowering the threshold can only add predicted categories.
  const auto files = ReadFixture({"commented", "uncommented"});
  MultiLabelModel loose = SyntheticModel();
  const GuidelineSpec spec = Guideline("presence_optional.json");
  const AdherenceReport base =
      CheckAdherence(files, loose, DefaultPatternLibrary(), DefaultTaxonomy(), spec);
  loose.threshold = 0.01;
  const AdherenceReport more =
      CheckAdherence(files, loose, DefaultPatternLibrary(), DefaultTaxonomy(), spec);
  for (std::size_t i = 0; i < base.aggregate.size(); ++i) {
    EXPECT_GE(more.aggregate[i].second, base.aggregate[i].second);
  }
}

TEST(GuidelineSpec, ValidationAndDefaults) {
  EXPECT_THROW(ParseGuidelineSpec(R"({"name":"x","language":"java","required_categories":["Nope"],
                                      "require_comment_presence":true})",
                                  DefaultTaxonomy()),
               Error);
  EXPECT_THROW(ParseGuidelineSpec(R"({"name":"x","language":"java"})", DefaultTaxonomy()), Error);
  EXPECT_EQ(DefaultGuidelineSpec(Language::kJava, DefaultTaxonomy()).required_categories,
            std::vector<std::string>{"Summary"});
  EXPECT_EQ(DefaultGuidelineSpec(Language::kSmalltalk, DefaultTaxonomy()).required_categories,
            (std::vector<std::string>{"Summary", "Usage", "Example"}));
}

}  // namespace
}  // namespace cctm
