#pragma once

#include <string>
#include <vector>

#include "cctm/language.h"
#include "cctm/source_file.h"

namespace cctm {

// One class-level comment. `raw_text` has all comment delimiters, `*`
// gutters and common indentation removed, with `\n` line endings.
struct ClassComment {
  std::string id;
  Language language = Language::kUnknown;
  std::string class_name;
  std::string raw_text;
  int start_line = 0;  // 1-based, inclusive
  int end_line = 0;
  int declaration_line = 0;
  std::string path;

  bool operator==(const ClassComment&) const = default;
};

struct ClassDeclaration {
  std::string class_name;  // nested classes are "Outer.Inner"
  int declaration_line = 0;
  bool has_comment = false;
  // Same id scheme as ClassComment::id.
  std::string id;

  bool operator==(const ClassDeclaration&) const = default;
};

// Extraction yields every class declaration and, where one qualifies, its
// comment. Comments whose cleaned text is empty do not qualify.
struct ExtractionResult {
  std::vector<ClassDeclaration> declarations;
  std::vector<ClassComment> comments;
};

// Both throw cctm::Error (UnbalancedDelimiter) for unterminated comments or
// string literals, and (PreconditionViolation) for kUnknown files. Results
// are ordered by declaration line.
ExtractionResult Extract(const SourceFile& file);
std::vector<ClassComment> ExtractClassComments(const SourceFile& file);
std::vector<ClassDeclaration> ExtractClassDeclarations(const SourceFile& file);

// "<path>#<class_name>#<ordinal>" where ordinal counts earlier declarations
// of the same name in the file.
std::string MakeCommentId(const std::string& path,
                          const std::string& class_name, int ordinal);

// JSON-Lines record: {id, language, class_name, raw_text, start_line,
// end_line, declaration_line, path}, keys in that order, no trailing newline.
std::string ToJsonLine(const ClassComment& comment);

}  // namespace cctm
