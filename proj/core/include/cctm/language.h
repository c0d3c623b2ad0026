#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cctm {

enum class Language { kJava, kPython, kSmalltalk, kUnknown };

// Maps .java, .py and .st; anything else is kUnknown.
Language DetectLanguage(std::string_view path);

// Lowercase wire name: "java", "python", "smalltalk", "unknown".
std::string_view LanguageName(Language language);

// Inverse of LanguageName for the three supported languages.
std::optional<Language> ParseLanguage(std::string_view name);

}  // namespace cctm
