#include "cctm/language.h"

#include <filesystem>

namespace cctm {

Language DetectLanguage(std::string_view path) {
  const std::string extension = std::filesystem::path(path).extension().string();
  if (extension == ".java") return Language::kJava;
  if (extension == ".py") return Language::kPython;
  if (extension == ".st") return Language::kSmalltalk;
  return Language::kUnknown;
}

std::string_view LanguageName(Language language) {
  switch (language) {
    case Language::kJava:
      return "java";
    case Language::kPython:
      return "python";
    case Language::kSmalltalk:
      return "smalltalk";
    case Language::kUnknown:
      break;
  }
  return "unknown";
}

std::optional<Language> ParseLanguage(std::string_view name) {
  if (name == "java") return Language::kJava;
  if (name == "python") return Language::kPython;
  if (name == "smalltalk") return Language::kSmalltalk;
  return std::nullopt;
}

}  // namespace cctm
