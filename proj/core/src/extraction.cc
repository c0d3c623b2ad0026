#include "cctm/extraction.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <string_view>

#include "cctm/error.h"
#include "json_util.h"

namespace cctm {
namespace {

bool IsIdentStart(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

bool IsIdentChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

// Maps byte offsets to 1-based line numbers.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') starts_.push_back(i + 1);
    }
  }

  int LineAt(std::size_t offset) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
    return static_cast<int>(it - starts_.begin());
  }

 private:
  std::vector<std::size_t> starts_;
};

[[noreturn]] void Unbalanced(const SourceFile& file, int line,
                             std::string_view what) {
  throw DataError("UnbalancedDelimiter", file.path + ":" +
                                             std::to_string(line) + ": " +
                                             std::string(what));
}

std::vector<std::string> SplitLines(std::string_view body) {
  std::vector<std::string> lines;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = body.find('\n', begin);
    std::string line(body.substr(begin, end == std::string_view::npos
                                            ? std::string_view::npos
                                            : end - begin));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return lines;
}

std::string ExpandTabs(std::string_view line) {
  std::string out;
  for (char c : line) {
    if (c == '\t') {
      out.append(8 - out.size() % 8, ' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Docstring-style cleanup shared by all languages: the first line is
// left-trimmed, the remaining lines lose their common indentation, trailing
// whitespace and surrounding blank lines are dropped.
std::string CleanCommentLines(std::vector<std::string> lines) {
  for (auto& line : lines) {
    line = ExpandTabs(line);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
  }
  std::size_t indent = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    indent = std::min(indent, lines[i].find_first_not_of(' '));
  }
  if (!lines.empty()) {
    const std::size_t first = lines[0].find_first_not_of(' ');
    lines[0] = first == std::string::npos ? "" : lines[0].substr(first);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    lines[i] = IsBlank(lines[i]) ? "" : lines[i].substr(indent);
  }
  std::size_t begin = 0;
  std::size_t end = lines.size();
  while (begin < end && lines[begin].empty()) ++begin;
  while (end > begin && lines[end - 1].empty()) --end;
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

struct CommentBlock {
  std::size_t begin = 0;  // offset of the opening delimiter
  std::size_t end = 0;    // offset one past the closing delimiter
  std::string text;       // cleaned
};

struct RawDeclaration {
  std::string name;
  std::size_t offset = 0;
  std::optional<CommentBlock> comment;
};

// ---------------------------------------------------------------- Java

std::string CleanJavadoc(std::string_view body) {
  std::vector<std::string> lines = SplitLines(body);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string& line = lines[i];
    const std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '*') {
      const std::size_t text = line.find_first_not_of('*', first);
      line = text == std::string::npos ? "" : line.substr(text);
    }
  }
  return CleanCommentLines(std::move(lines));
}

bool IsJavaModifier(std::string_view word) {
  static constexpr std::string_view kModifiers[] = {
      "public", "protected", "private",  "static", "final",
      "abstract", "sealed",  "strictfp", "non"};
  return std::find(std::begin(kModifiers), std::end(kModifiers), word) !=
         std::end(kModifiers);
}

std::vector<RawDeclaration> ScanJava(const SourceFile& file,
                                     const LineIndex& lines) {
  const std::string_view s = file.content;
  const std::size_t n = s.size();
  std::vector<RawDeclaration> out;

  struct Frame {
    std::string name;
    int depth;
  };
  std::vector<Frame> frames;
  int depth = 0;
  std::optional<CommentBlock> pending;
  std::optional<std::string> awaiting_body;
  char last_significant = '\0';

  auto skip_string = [&](std::size_t i, char quote) {
    // i points at the opening quote; returns offset after the closing one.
    const int line = lines.LineAt(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s[j] == '\\') {
        ++j;
      } else if (s[j] == quote) {
        return j + 1;
      } else if (s[j] == '\n') {
        break;
      }
    }
    Unbalanced(file, line, quote == '"' ? "unterminated string literal"
                                        : "unterminated character literal");
  };

  std::size_t i = 0;
  while (i < n) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '/') {
      const std::size_t eol = s.find('\n', i);
      i = eol == std::string_view::npos ? n : eol + 1;
      pending.reset();
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      const std::size_t close = s.find("*/", i + 2);
      if (close == std::string_view::npos) {
        Unbalanced(file, lines.LineAt(i), "unterminated block comment");
      }
      const bool doc = i + 2 < n && s[i + 2] == '*' && close != i + 2;
      if (doc) {
        pending = CommentBlock{i, close + 2,
                               CleanJavadoc(s.substr(i + 3, close - (i + 3)))};
      } else {
        pending.reset();
      }
      i = close + 2;
      continue;
    }
    if (c == '"') {
      if (s.substr(i, 3) == "\"\"\"") {
        std::size_t j = i + 3;
        bool closed = false;
        while (j < n) {
          if (s[j] == '\\') {
            j += 2;
          } else if (s.substr(j, 3) == "\"\"\"") {
            j += 3;
            closed = true;
            break;
          } else {
            ++j;
          }
        }
        if (!closed) Unbalanced(file, lines.LineAt(i), "unterminated text block");
        i = j;
      } else {
        i = skip_string(i, '"');
      }
      pending.reset();
      last_significant = '"';
      continue;
    }
    if (c == '\'') {
      i = skip_string(i, '\'');
      pending.reset();
      last_significant = '\'';
      continue;
    }
    if (c == '@') {
      std::size_t j = i + 1;
      while (j < n && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (s.substr(j, 9) == "interface" && (j + 9 >= n || !IsIdentChar(s[j + 9]))) {
        // Annotation type declaration: handled as the `interface` keyword.
        i = j;
        continue;
      }
      while (j < n && (IsIdentChar(s[j]) || s[j] == '.')) ++j;
      std::size_t k = j;
      while (k < n && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
      if (k < n && s[k] == '(') {
        int parens = 0;
        while (k < n) {
          if (s[k] == '"' || s[k] == '\'') {
            k = skip_string(k, s[k]);
            continue;
          }
          if (s[k] == '(') ++parens;
          if (s[k] == ')' && --parens == 0) {
            ++k;
            break;
          }
          ++k;
        }
        if (parens != 0) Unbalanced(file, lines.LineAt(i), "unbalanced annotation arguments");
        j = k;
      }
      i = j;
      last_significant = ')';
      continue;
    }
    if (IsIdentStart(c)) {
      std::size_t j = i;
      while (j < n && IsIdentChar(s[j])) ++j;
      const std::string_view word = s.substr(i, j - i);
      const bool keyword = word == "class" || word == "interface" || word == "enum";
      if (keyword && last_significant != '.') {
        std::size_t k = j;
        while (k < n && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        std::size_t name_end = k;
        while (name_end < n && IsIdentChar(s[name_end])) ++name_end;
        if (name_end > k) {
          std::string name(s.substr(k, name_end - k));
          if (!frames.empty()) name = frames.back().name + "." + name;
          out.push_back({name, i, pending});
          awaiting_body = std::move(name);
          pending.reset();
          i = name_end;
          last_significant = 'a';
          continue;
        }
      }
      if (!IsJavaModifier(word)) pending.reset();
      if (word == "non" && s.substr(j, 7) == "-sealed") j += 7;
      i = j;
      last_significant = 'a';
      continue;
    }
    if (c == '{') {
      ++depth;
      if (awaiting_body) {
        frames.push_back({*awaiting_body, depth});
        awaiting_body.reset();
      }
    } else if (c == '}') {
      if (!frames.empty() && frames.back().depth == depth) frames.pop_back();
      --depth;
    }
    pending.reset();
    last_significant = c;
    ++i;
  }
  return out;
}

// -------------------------------------------------------------- Python

struct PyToken {
  enum class Kind { kName, kString, kNumber, kOp };
  Kind kind;
  std::size_t begin;
  std::size_t end;
  std::string_view text;
  // Strings only.
  std::string_view prefix;
  std::string_view body;
};

struct PyLogicalLine {
  int indent = 0;
  std::vector<PyToken> tokens;
};

bool IsStringPrefix(std::string_view word) {
  if (word.size() > 2) return false;
  for (char c : word) {
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l != 'r' && l != 'u' && l != 'b' && l != 'f') return false;
  }
  return true;
}

std::vector<PyLogicalLine> TokenizePython(const SourceFile& file,
                                          const LineIndex& lines) {
  const std::string_view s = file.content;
  const std::size_t n = s.size();
  std::vector<PyLogicalLine> out;
  PyLogicalLine current;
  bool at_line_start = true;
  int brackets = 0;

  auto finish_line = [&] {
    if (!current.tokens.empty()) out.push_back(std::move(current));
    current = PyLogicalLine{};
    at_line_start = true;
  };

  auto read_string = [&](std::size_t quote_pos, std::size_t prefix_begin) {
    const char q = s[quote_pos];
    const bool triple = s.substr(quote_pos, 3) == std::string(3, q);
    const std::size_t open_len = triple ? 3 : 1;
    std::size_t j = quote_pos + open_len;
    while (j < n) {
      if (s[j] == '\\') {
        j += 2;
        continue;
      }
      if (triple ? s.substr(j, 3) == std::string(3, q) : s[j] == q) {
        PyToken token{PyToken::Kind::kString, prefix_begin, j + open_len,
                      s.substr(prefix_begin, j + open_len - prefix_begin),
                      s.substr(prefix_begin, quote_pos - prefix_begin),
                      s.substr(quote_pos + open_len, j - quote_pos - open_len)};
        current.tokens.push_back(token);
        return j + open_len;
      }
      if (!triple && s[j] == '\n') break;
      ++j;
    }
    Unbalanced(file, lines.LineAt(quote_pos), "unterminated string literal");
  };

  std::size_t i = 0;
  while (i < n) {
    if (at_line_start && brackets == 0) {
      int indent = 0;
      std::size_t j = i;
      while (j < n && (s[j] == ' ' || s[j] == '\t' || s[j] == '\f')) {
        indent = s[j] == '\t' ? (indent / 8 + 1) * 8 : indent + 1;
        ++j;
      }
      if (j >= n) break;
      if (s[j] == '\n' || s[j] == '\r' || s[j] == '#') {
        const std::size_t eol = s.find('\n', j);
        i = eol == std::string_view::npos ? n : eol + 1;
        continue;
      }
      current.indent = indent;
      at_line_start = false;
      i = j;
      continue;
    }
    const char c = s[i];
    if (c == '\n') {
      if (brackets == 0) finish_line();
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '#') {
      const std::size_t eol = s.find('\n', i);
      i = eol == std::string_view::npos ? n : eol;
      continue;
    }
    if (c == '\\' && i + 1 < n && (s[i + 1] == '\n' || s[i + 1] == '\r')) {
      i = s.find('\n', i);
      i = i == std::string_view::npos ? n : i + 1;
      continue;
    }
    if (c == '"' || c == '\'') {
      i = read_string(i, i);
      continue;
    }
    if (IsIdentStart(c) && c != '$') {
      std::size_t j = i;
      while (j < n && IsIdentChar(s[j]) && s[j] != '$') ++j;
      const std::string_view word = s.substr(i, j - i);
      if (j < n && (s[j] == '"' || s[j] == '\'') && IsStringPrefix(word)) {
        i = read_string(j, i);
        continue;
      }
      current.tokens.push_back({PyToken::Kind::kName, i, j, word, {}, {}});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && (IsIdentChar(s[j]) || s[j] == '.')) ++j;
      current.tokens.push_back({PyToken::Kind::kNumber, i, j, s.substr(i, j - i), {}, {}});
      i = j;
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++brackets;
    if ((c == ')' || c == ']' || c == '}') && brackets > 0) --brackets;
    current.tokens.push_back({PyToken::Kind::kOp, i, i + 1, s.substr(i, 1), {}, {}});
    ++i;
  }
  finish_line();
  return out;
}

// Tokens of the first statement in [begin, end): up to a top-level ';'.
std::vector<PyToken> FirstStatement(const std::vector<PyToken>& tokens,
                                    std::size_t begin) {
  std::vector<PyToken> out;
  int nesting = 0;
  for (std::size_t i = begin; i < tokens.size(); ++i) {
    const PyToken& t = tokens[i];
    if (t.kind == PyToken::Kind::kOp) {
      if (t.text == "(" || t.text == "[" || t.text == "{") ++nesting;
      if (t.text == ")" || t.text == "]" || t.text == "}") --nesting;
      if (t.text == ";" && nesting == 0) break;
    }
    out.push_back(t);
  }
  return out;
}

std::optional<CommentBlock> DocstringOf(const std::vector<PyToken>& statement) {
  if (statement.size() != 1 || statement[0].kind != PyToken::Kind::kString) {
    return std::nullopt;
  }
  const PyToken& t = statement[0];
  for (char c : t.prefix) {
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l == 'f' || l == 'b') return std::nullopt;
  }
  return CommentBlock{t.begin, t.end, CleanCommentLines(SplitLines(t.body))};
}

std::vector<RawDeclaration> ScanPython(const SourceFile& file,
                                       const LineIndex& lines) {
  const std::vector<PyLogicalLine> logical = TokenizePython(file, lines);
  std::vector<RawDeclaration> out;
  struct Frame {
    int indent;
    std::string name;
  };
  std::vector<Frame> frames;
  for (std::size_t li = 0; li < logical.size(); ++li) {
    const PyLogicalLine& line = logical[li];
    while (!frames.empty() && line.indent <= frames.back().indent) frames.pop_back();
    const auto& tokens = line.tokens;
    if (tokens.size() < 2 || tokens[0].kind != PyToken::Kind::kName ||
        tokens[0].text != "class" || tokens[1].kind != PyToken::Kind::kName) {
      continue;
    }
    std::string name(tokens[1].text);
    if (!frames.empty()) name = frames.back().name + "." + name;

    // Header colon at bracket depth zero.
    std::size_t colon = tokens.size();
    int nesting = 0;
    for (std::size_t t = 2; t < tokens.size(); ++t) {
      const std::string_view text = tokens[t].text;
      if (tokens[t].kind != PyToken::Kind::kOp) continue;
      if (text == "(" || text == "[" || text == "{") ++nesting;
      if (text == ")" || text == "]" || text == "}") --nesting;
      if (text == ":" && nesting == 0) {
        colon = t;
        break;
      }
    }
    std::optional<CommentBlock> doc;
    if (colon + 1 < tokens.size()) {
      doc = DocstringOf(FirstStatement(tokens, colon + 1));
    } else if (li + 1 < logical.size() && logical[li + 1].indent > line.indent) {
      doc = DocstringOf(FirstStatement(logical[li + 1].tokens, 0));
    }
    out.push_back({name, tokens[0].begin, std::move(doc)});
    frames.push_back({line.indent, std::move(name)});
  }
  return out;
}

// ----------------------------------------------------------- Smalltalk

// Reads the class name from the STON map of a Tonel `Class { ... }`
// definition starting at `open` (the '{'). Returns the offset after the
// matching '}' through `end`.
std::string TonelClassName(const SourceFile& file, const LineIndex& lines,
                           std::size_t open, std::size_t* end) {
  const std::string_view s = file.content;
  const std::size_t n = s.size();
  int depth = 0;
  std::string name;
  std::size_t i = open;
  while (i < n) {
    const char c = s[i];
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < n && !(s[j] == '\'' && (j + 1 >= n || s[j + 1] != '\''))) {
        j += s[j] == '\'' ? 2 : 1;
      }
      if (j >= n) Unbalanced(file, lines.LineAt(i), "unterminated string literal");
      i = j + 1;
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < n && !(s[j] == '"' && (j + 1 >= n || s[j + 1] != '"'))) {
        j += s[j] == '"' ? 2 : 1;
      }
      if (j >= n) Unbalanced(file, lines.LineAt(i), "unterminated comment");
      i = j + 1;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) {
      *end = i + 1;
      return name.empty() ? "Unnamed" : name;
    }
    if (depth == 1 && name.empty() && s.substr(i, 5) == "#name" &&
        (i + 5 >= n || !IsIdentChar(s[i + 5]))) {
      std::size_t j = i + 5;
      while (j < n && (std::isspace(static_cast<unsigned char>(s[j])) || s[j] == ':')) ++j;
      if (j < n && s[j] == '#') {
        ++j;
        if (j < n && s[j] == '\'') {
          const std::size_t close = s.find('\'', j + 1);
          if (close != std::string_view::npos) name = s.substr(j + 1, close - j - 1);
        } else {
          std::size_t k = j;
          while (k < n && (IsIdentChar(s[k]) || s[k] == ':')) ++k;
          name = s.substr(j, k - j);
        }
      } else if (j < n && s[j] == '\'') {
        const std::size_t close = s.find('\'', j + 1);
        if (close != std::string_view::npos) name = s.substr(j + 1, close - j - 1);
      }
      i = j;
      continue;
    }
    ++i;
  }
  Unbalanced(file, lines.LineAt(open), "unterminated class definition");
}

std::vector<RawDeclaration> ScanTonel(const SourceFile& file,
                                      const LineIndex& lines) {
  const std::string_view s = file.content;
  const std::size_t n = s.size();
  std::vector<RawDeclaration> out;
  std::optional<CommentBlock> pending;
  int depth = 0;
  std::size_t i = 0;
  while (i < n) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '"') {
      std::string decoded;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        if (s[j] == '"') {
          if (j + 1 < n && s[j + 1] == '"') {
            decoded.push_back('"');
            j += 2;
            continue;
          }
          closed = true;
          break;
        }
        decoded.push_back(s[j]);
        ++j;
      }
      if (!closed) Unbalanced(file, lines.LineAt(i), "unterminated comment");
      pending = CommentBlock{i, j + 1, CleanCommentLines(SplitLines(decoded))};
      i = j + 1;
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        if (s[j] == '\'') {
          if (j + 1 < n && s[j + 1] == '\'') {
            j += 2;
            continue;
          }
          closed = true;
          break;
        }
        ++j;
      }
      if (!closed) Unbalanced(file, lines.LineAt(i), "unterminated string literal");
      pending.reset();
      i = j + 1;
      continue;
    }
    if (c == '$') {
      // Character literal; skip one UTF-8 encoded character.
      std::size_t j = i + 1;
      if (j < n) {
        ++j;
        while (j < n && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
      }
      pending.reset();
      i = j;
      continue;
    }
    if (IsIdentStart(c) && c != '$') {
      std::size_t j = i;
      while (j < n && IsIdentChar(s[j]) && s[j] != '$') ++j;
      if (depth == 0 && s.substr(i, j - i) == "Class") {
        std::size_t k = j;
        while (k < n && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        if (k < n && s[k] == '{') {
          std::size_t end = k;
          std::string name = TonelClassName(file, lines, k, &end);
          out.push_back({std::move(name), i, pending});
          pending.reset();
          i = end;
          continue;
        }
      }
      pending.reset();
      i = j;
      continue;
    }
    if (c == '[' || c == '(' || c == '{') ++depth;
    if ((c == ']' || c == ')' || c == '}') && depth > 0) --depth;
    pending.reset();
    ++i;
  }
  return out;
}

}  // namespace

std::string MakeCommentId(const std::string& path, const std::string& class_name,
                          int ordinal) {
  return path + "#" + class_name + "#" + std::to_string(ordinal);
}

ExtractionResult Extract(const SourceFile& file) {
  const LineIndex lines(file.content);
  std::vector<RawDeclaration> raw;
  switch (file.language) {
    case Language::kJava:
      raw = ScanJava(file, lines);
      break;
    case Language::kPython:
      raw = ScanPython(file, lines);
      break;
    case Language::kSmalltalk:
      raw = ScanTonel(file, lines);
      break;
    case Language::kUnknown:
      throw ConfigError("PreconditionViolation",
                        "cannot extract from " + file.path + ": unknown language");
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawDeclaration& a, const RawDeclaration& b) {
                     return a.offset < b.offset;
                   });

  ExtractionResult result;
  std::map<std::string, int> ordinals;
  for (const RawDeclaration& decl : raw) {
    const int ordinal = ordinals[decl.name]++;
    ClassDeclaration out;
    out.class_name = decl.name;
    out.declaration_line = lines.LineAt(decl.offset);
    out.id = MakeCommentId(file.path, decl.name, ordinal);
    out.has_comment = decl.comment.has_value() && !decl.comment->text.empty();
    if (out.has_comment) {
      ClassComment comment;
      comment.id = out.id;
      comment.language = file.language;
      comment.class_name = decl.name;
      comment.raw_text = decl.comment->text;
      comment.start_line = lines.LineAt(decl.comment->begin);
      comment.end_line = lines.LineAt(decl.comment->end - 1);
      comment.declaration_line = out.declaration_line;
      comment.path = file.path;
      result.comments.push_back(std::move(comment));
    }
    result.declarations.push_back(std::move(out));
  }
  return result;
}

std::vector<ClassComment> ExtractClassComments(const SourceFile& file) {
  return Extract(file).comments;
}

std::vector<ClassDeclaration> ExtractClassDeclarations(const SourceFile& file) {
  return Extract(file).declarations;
}

std::string ToJsonLine(const ClassComment& comment) {
  return detail::Dump(detail::CommentToJson(comment));
}

}  // namespace cctm
