#include <gtest/gtest.h>

#include <sstream>

#include "cli.h"
#include "test_support.h"

namespace cctm {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "cctm");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t CountLines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(RunCli({"gen-synthetic", "--n", "20", "--seed", "5", "--out", Path("syn.jsonl")}).code,
              0);
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  std::string Fixture(const std::string& rel) const {
    return (testing::DataDir() / "fixtures" / rel).string();
  }
  testing::TempDir dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli({}).code, 2);
  EXPECT_EQ(RunCli({"frobnicate"}).code, 2);
  EXPECT_EQ(RunCli({"train", Path("syn.jsonl"), "--algo", "svm"}).code, 2);
  EXPECT_EQ(RunCli({"train", Path("syn.jsonl"), "--taxonomy", Path("missing.json")}).code, 2);
  EXPECT_EQ(RunCli({"gen-synthetic", "--n", "3"}).code, 2);
}

TEST_F(CliTest, ExtractFixtureTree) {
  const Result r = RunCli({"extract", Fixture("extraction")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(CountLines(r.out), 17u);

  std::filesystem::create_directories(dir_ / "empty");
  const Result empty = RunCli({"extract", Path("empty")});
  EXPECT_EQ(empty.code, 0);
  EXPECT_TRUE(empty.out.empty());

  const Result missing = RunCli({"extract", Path("nowhere"), Fixture("extraction/java")});
  EXPECT_EQ(missing.code, 0);
  EXPECT_FALSE(missing.err.empty());
  EXPECT_GT(CountLines(missing.out), 0u);
}

TEST_F(CliTest, TrainIsByteStable) {
  const std::vector<std::string> common = {"train", Path("syn.jsonl"), "--trees", "5"};
  auto a = common, b = common;
  a.insert(a.end(), {"--out", Path("a.json")});
  b.insert(b.end(), {"--out", Path("b.json")});
  ASSERT_EQ(RunCli(a).code, 0);
  ASSERT_EQ(RunCli(b).code, 0);
  EXPECT_EQ(testing::ReadText(Path("a.json")), testing::ReadText(Path("b.json")));
  // Atomic write leaves no temporaries behind.
  for (const auto& entry : std::filesystem::directory_iterator(dir_.path())) {
    EXPECT_EQ(entry.path().string().find(".tmp"), std::string::npos);
  }
}

TEST_F(CliTest, TrainDataErrorsExitThree) {
  testing::WriteText(dir_ / "bad.jsonl",
                     R"({"id":"a#A#0","language":"java","class_name":"A","raw_text":"x",)"
                     R"("start_line":1,"end_line":1,"declaration_line":2,"path":"a",)"
                     R"("labels":["Nonsense"]})"
                     "\n");
  EXPECT_EQ(RunCli({"train", Path("bad.jsonl")}).code, 3);
  testing::WriteText(dir_ / "empty.jsonl", "");
  EXPECT_EQ(RunCli({"train", Path("empty.jsonl")}).code, 3);
}

TEST_F(CliTest, EvaluateAndCompare) {
  const std::vector<std::string> base = {"evaluate", Path("syn.jsonl"), "--algo", "nb", "--k", "5"};
  auto a = base, b = base, c = base;
  a.insert(a.end(), {"--out", Path("a.json"), "--features", "tfidf"});
  b.insert(b.end(), {"--out", Path("b.json")});
  c.insert(c.end(), {"--out", Path("c.json")});
  ASSERT_EQ(RunCli(a).code, 0);
  ASSERT_EQ(RunCli(b).code, 0);
  ASSERT_EQ(RunCli(c).code, 0);
  EXPECT_EQ(testing::ReadText(Path("b.json")), testing::ReadText(Path("c.json")));

  const Result table = RunCli(base);
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("Summary"), std::string::npos);

  const Result cmp = RunCli({"compare", Path("a.json"), Path("b.json")});
  EXPECT_EQ(cmp.code, 0);
  EXPECT_NE(cmp.out.find("macro"), std::string::npos);

  auto d = base;
  d.insert(d.end(), {"--seed", "1", "--out", Path("d.json")});
  ASSERT_EQ(RunCli(d).code, 0);
  EXPECT_NE(RunCli({"compare", Path("a.json"), Path("d.json")}).code, 0);

  EXPECT_EQ(RunCli({"evaluate", Path("syn.jsonl"), "--k", "2000"}).code, 3);
}

TEST_F(CliTest, ClassifyAndCheck) {
  ASSERT_EQ(RunCli({"gen-synthetic", "--n", "60", "--seed", "7", "--noise", "0.1", "--out",
                    Path("big.jsonl")})
                .code,
            0);
  ASSERT_EQ(RunCli({"train", Path("big.jsonl"), "--out", Path("m.json"), "--trees", "25"}).code, 0);

  const Result classified =
      RunCli({"classify", Fixture("adherence/commented"), "--model", Path("m.json")});
  EXPECT_EQ(classified.code, 0);
  EXPECT_EQ(CountLines(classified.out), 10u);

  std::filesystem::create_directories(dir_ / "none");
  const Result nothing = RunCli({"classify", Path("none"), "--model", Path("m.json")});
  EXPECT_EQ(nothing.code, 0);
  EXPECT_TRUE(nothing.out.empty());

  const std::string guideline = Fixture("adherence/summary_only.json");
  const Result ok = RunCli({"check", Fixture("adherence/commented"), "--model", Path("m.json"),
                            "--guideline", guideline, "--out", Path("adh.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(std::filesystem::exists(Path("adh.json")));

  const Result violation =
      RunCli({"check", Fixture("adherence"), "--model", Path("m.json"), "--guideline", guideline});
  EXPECT_EQ(violation.code, 1);
  EXPECT_NE(violation.out.find("Bare.java"), std::string::npos);

  // Model files are data artifacts; guideline files are configuration.
  EXPECT_EQ(RunCli({"check", Fixture("adherence"), "--model", Path("missing.json"),
                    "--guideline", guideline})
                .code,
            3);
  EXPECT_EQ(RunCli({"check", Fixture("adherence"), "--model", Path("m.json"), "--guideline",
                    Path("missing.json")})
                .code,
            2);
}

TEST_F(CliTest, ClassifyLanguageMismatch) {
  testing::WriteText(dir_ / "java.jsonl", [] {
    std::string text;
    for (int i = 0; i < 4; ++i) {
      text += R"({"id":"a#A)" + std::to_string(i) +
              R"(#0","language":"java","class_name":"A","raw_text":")" +
              (i % 2 ? "TODO later" : "plain words") +
              R"(","start_line":1,"end_line":1,"declaration_line":2,"path":"a","labels":)" +
              (i % 2 ? R"(["Todo"])" : "[]") + "}\n";
    }
    return text;
  }());
  ASSERT_EQ(RunCli({"train", Path("java.jsonl"), "--algo", "nb", "--min-df", "1", "--out",
                    Path("java.json")})
                .code,
            0);
  EXPECT_EQ(RunCli({"classify", Fixture("extraction/python"), "--model", Path("java.json")}).code,
            3);
}

}  // namespace
}  // namespace cctm
