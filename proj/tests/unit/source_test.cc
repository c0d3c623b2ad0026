#include <gtest/gtest.h>

#include "cctm/error.h"
#include "cctm/language.h"
#include "cctm/source_file.h"
#include "test_support.h"

namespace cctm {
namespace {

TEST(DetectLanguage, MapsKnownExtensions) {
  EXPECT_EQ(DetectLanguage("src/Foo.java"), Language::kJava);
  EXPECT_EQ(DetectLanguage("pkg/mod.py"), Language::kPython);
  EXPECT_EQ(DetectLanguage("Point.class.st"), Language::kSmalltalk);
  EXPECT_EQ(DetectLanguage("README.md"), Language::kUnknown);
  EXPECT_EQ(DetectLanguage("Makefile"), Language::kUnknown);
}

TEST(LanguageName, RoundTrips) {
  for (Language l : {Language::kJava, Language::kPython, Language::kSmalltalk}) {
    EXPECT_EQ(ParseLanguage(LanguageName(l)), l);
  }
  EXPECT_FALSE(ParseLanguage("cobol").has_value());
  EXPECT_FALSE(ParseLanguage("unknown").has_value());
}

TEST(SanitizeUtf8, ReplacesInvalidBytes) {
  std::size_t replaced = 0;
  EXPECT_EQ(SanitizeUtf8("caf\xc3\xa9", &replaced), "caf\xc3\xa9");
  EXPECT_EQ(replaced, 0u);
  EXPECT_EQ(SanitizeUtf8("a\xff" "b\xc3", &replaced), "a\xef\xbf\xbd" "b\xef\xbf\xbd");
  EXPECT_EQ(replaced, 2u);
  // Overlong encoding of '/'.
  EXPECT_EQ(SanitizeUtf8("\xc0\xaf", &replaced), "\xef\xbf\xbd\xef\xbf\xbd");
  EXPECT_EQ(replaced, 2u);
}

TEST(MakeSourceFile, OverrideWinsOverExtension) {
  const SourceFile f = MakeSourceFile("notes.txt", "class A: pass", Language::kPython);
  EXPECT_EQ(f.language, Language::kPython);
  EXPECT_EQ(MakeSourceFile("A.java", "").language, Language::kJava);
}

TEST(CollectSourceFiles, WalksDirectoriesInSortedOrder) {
  testing::TempDir dir;
  testing::WriteText(dir / "b/Z.java", "class Z {}");
  testing::WriteText(dir / "a/y.py", "");
  testing::WriteText(dir / "a/notes.txt", "");
  std::vector<std::string> diagnostics;
  const auto entries =
      CollectSourceFiles({dir.path(), dir / "missing"}, std::nullopt, &diagnostics);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_LT(entries[0].display_path, entries[1].display_path);
  EXPECT_NE(entries[0].display_path.find("a/y.py"), std::string::npos);
  EXPECT_EQ(diagnostics.size(), 1u);
}

TEST(ReadSourceFile, MissingFileIsIoError) {
  try {
    ReadSourceFile("/nonexistent/X.java");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "IoError");
  }
}

}  // namespace
}  // namespace cctm
