#include <gtest/gtest.h>

#include "cctm/error.h"
#include "cctm/synthetic.h"
#include "cctm/taxonomy.h"
#include "test_support.h"

namespace cctm {
namespace {

std::string ErrorKind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

TEST(Taxonomy, DefaultHasSeventeenCategories) {
  const Taxonomy& t = DefaultTaxonomy();
  ASSERT_EQ(t.categories().size(), 17u);
  EXPECT_EQ(t.categories().front().name, "Summary");
  EXPECT_EQ(t.categories().back().name, "Pointer_To_Code");
  for (const char* name : {"Warning", "Observation", "Recommendation", "Deprecation"}) {
    EXPECT_NE(t.Find(name), nullptr) << name;
  }
  for (Language l : {Language::kJava, Language::kPython, Language::kSmalltalk}) {
    EXPECT_FALSE(t.NamesFor(l).empty());
  }
}

TEST(Taxonomy, DuplicateNameIsSchemaError) {
  const char* doc = R"({"version":"v","categories":[
    {"name":"A","languages":["java"]},{"name":"A","languages":["python"]}]})";
  EXPECT_EQ(ErrorKind([&] { ParseTaxonomy(doc); }), "SchemaError");
}

TEST(Taxonomy, SingleCategory) {
  const Taxonomy t = ParseTaxonomy(R"({"version":"v","categories":[
    {"name":"Only","languages":["java"]}]})");
  EXPECT_EQ(t.categories().size(), 1u);
  EXPECT_FALSE(t.categories()[0].guideline_required);
}

TEST(Taxonomy, SchemaErrorsNameThePath) {
  try {
    ParseTaxonomy(R"({"version":"v","categories":[{"name":"A","languages":[]}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "SchemaError");
    EXPECT_NE(std::string(e.what()).find("$.categories[0].languages"), std::string::npos);
  }
  EXPECT_EQ(ErrorKind([] {
              ParseTaxonomy(R"({"version":"v","categories":[{"name":"A","languages":["java"],"x":1}]})");
            }),
            "SchemaError");
  EXPECT_EQ(ErrorKind([] {
              ParseTaxonomy(R"({"version":"v","categories":[{"name":"9A","languages":["java"]}]})");
            }),
            "SchemaError");
  EXPECT_EQ(ErrorKind([] { ParseTaxonomy("{not json"); }), "SchemaError");
}

TEST(Taxonomy, JsonRoundTrip) {
  const Taxonomy& t = DefaultTaxonomy();
  const Taxonomy again = ParseTaxonomy(TaxonomyToJson(t));
  EXPECT_EQ(again.version(), t.version());
  ASSERT_EQ(again.categories().size(), t.categories().size());
  for (std::size_t i = 0; i < t.categories().size(); ++i) {
    EXPECT_EQ(again.categories()[i].name, t.categories()[i].name);
    EXPECT_EQ(again.categories()[i].languages, t.categories()[i].languages);
  }
}

constexpr const char* kRecord =
    R"({"id":"a.py#A#0","language":"python","class_name":"A","raw_text":"Doc.",)"
    R"("start_line":2,"end_line":2,"declaration_line":1,"path":"a.py","labels":[%s]})";

std::string Record(const std::string& labels) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, kRecord, labels.c_str());
  return buffer;
}

TEST(LabeledDataset, ThreeValidRecords) {
  const std::string text = Record(R"("Summary")") + "\n" + Record(R"("Usage","Summary")") +
                           "\n" + Record("") + "\n";
  const auto data = ParseLabeledDataset(text, DefaultTaxonomy());
  ASSERT_EQ(data.size(), 3u);
  // Canonical order regardless of input order.
  EXPECT_EQ(data[1].labels, (std::vector<std::string>{"Summary", "Usage"}));
  EXPECT_TRUE(data[2].labels.empty());
}

TEST(LabeledDataset, TypoIsUnknownLabel) {
  try {
    ParseLabeledDataset(Record(R"("Sumary")"), DefaultTaxonomy());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "UnknownLabel");
    EXPECT_NE(std::string(e.what()).find("a.py#A#0"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("Sumary"), std::string::npos);
  }
}

TEST(LabeledDataset, InapplicableLabelIsUnknownLabel) {
  const Taxonomy t = ParseTaxonomy(R"({"version":"v","categories":[
    {"name":"JavaOnly","languages":["java"]}]})");
  EXPECT_EQ(ErrorKind([&] { ParseLabeledDataset(Record(R"("JavaOnly")"), t); }),
            "UnknownLabel");
}

TEST(LabeledDataset, MalformedRecordReportsLine) {
  try {
    ParseLabeledDataset(Record("") + "\n\n{\"id\":3}\n", DefaultTaxonomy());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "MalformedRecord");
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LabeledDataset, SaveLoadRoundTrip) {
  SyntheticOptions options;
  options.n_per_category = 10;
  const auto data = GenerateSynthetic(options);
  const std::string text = SerializeLabeledDataset(data);
  const auto again = ParseLabeledDataset(text, DefaultTaxonomy());
  ASSERT_EQ(again.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(again[i].comment, data[i].comment);
    EXPECT_EQ(again[i].labels, data[i].labels);
  }
  EXPECT_EQ(SerializeLabeledDataset(again), text);
}

}  // namespace
}  // namespace cctm
