#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cctm/language.h"

namespace cctm {

struct SourceFile {
  std::string path;
  Language language = Language::kUnknown;
  // Valid UTF-8. Invalid input bytes were replaced by U+FFFD.
  std::string content;
  std::size_t replaced_bytes = 0;
};

// Replaces every byte that is not part of a well-formed UTF-8 sequence with
// U+FFFD. Returns the number of replacements through `replaced`.
std::string SanitizeUtf8(std::string_view bytes, std::size_t* replaced);

// Builds a SourceFile from in-memory text. The language is taken from
// `language_override` when given, otherwise from the path extension.
SourceFile MakeSourceFile(std::string path, std::string_view bytes,
                          std::optional<Language> language_override = {});

// Reads a file from disk. Throws cctm::Error (IoError) when unreadable.
SourceFile ReadSourceFile(const std::filesystem::path& path,
                          std::optional<Language> language_override = {},
                          std::string display_path = {});

struct SourceEntry {
  std::filesystem::path path;
  // Path used in emitted records. Files found by walking a single directory
  // are relative to it; with several inputs the input is kept as a prefix.
  // Files named directly keep the argument as given.
  std::string display_path;
};

// Expands files and directories (recursively) into a sorted list of source
// files. Directory walks keep only files whose extension maps to a language
// unless `language_override` is set. Missing paths are reported through
// `diagnostics` and skipped.
std::vector<SourceEntry> CollectSourceFiles(
    const std::vector<std::filesystem::path>& inputs,
    std::optional<Language> language_override,
    std::vector<std::string>* diagnostics);

}  // namespace cctm
