#include "cctm/regex_lite.h"

#include <cctype>

#include "cctm/error.h"

namespace cctm {
namespace {

void AddClass(bool* set, char escape) {
  for (int c = 0; c < 256; ++c) {
    const bool digit = std::isdigit(c);
    const bool word = std::isalnum(c) || c == '_';
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    bool in = false;
    switch (escape) {
      case 'd': in = digit; break;
      case 'D': in = !digit; break;
      case 'w': in = word; break;
      case 'W': in = !word; break;
      case 's': in = space; break;
      case 'S': in = !space; break;
      default: in = c == static_cast<unsigned char>(escape); break;
    }
    if (in) set[c] = true;
  }
}

[[noreturn]] void Malformed(std::string_view expression, const std::string& what) {
  throw ConfigError("SchemaError",
                    "regex-lite \"" + std::string(expression) + "\": " + what);
}

}  // namespace

RegexLite::RegexLite(std::string_view expression) : expression_(expression) {
  std::size_t i = 0;
  const std::size_t n = expression.size();
  if (i < n && expression[i] == '^') {
    anchored_start_ = true;
    ++i;
  }
  while (i < n) {
    const char c = expression[i];
    if (c == '$' && i + 1 == n) {
      anchored_end_ = true;
      break;
    }
    if (c == '*' || c == '+' || c == '?') Malformed(expression, "quantifier without atom");
    Atom atom;
    if (c == '.') {
      for (int b = 0; b < 256; ++b) atom.set[b] = b != '\n';
      ++i;
    } else if (c == '\\') {
      if (i + 1 >= n) Malformed(expression, "trailing backslash");
      AddClass(atom.set, expression[i + 1]);
      i += 2;
    } else if (c == '[') {
      ++i;
      bool negate = false;
      if (i < n && expression[i] == '^') {
        negate = true;
        ++i;
      }
      bool first = true;
      while (i < n && (expression[i] != ']' || first)) {
        first = false;
        char lo = expression[i];
        if (lo == '\\') {
          if (i + 1 >= n) Malformed(expression, "trailing backslash");
          AddClass(atom.set, expression[i + 1]);
          i += 2;
          continue;
        }
        if (i + 2 < n && expression[i + 1] == '-' && expression[i + 2] != ']') {
          const char hi = expression[i + 2];
          if (static_cast<unsigned char>(hi) < static_cast<unsigned char>(lo)) {
            Malformed(expression, "reversed range");
          }
          for (int b = static_cast<unsigned char>(lo); b <= static_cast<unsigned char>(hi); ++b) {
            atom.set[b] = true;
          }
          i += 3;
          continue;
        }
        atom.set[static_cast<unsigned char>(lo)] = true;
        ++i;
      }
      if (i >= n) Malformed(expression, "unterminated bracket class");
      ++i;
      if (negate) {
        for (bool& b : atom.set) b = !b;
      }
    } else {
      atom.set[static_cast<unsigned char>(c)] = true;
      ++i;
    }
    if (i < n && (expression[i] == '*' || expression[i] == '+' || expression[i] == '?')) {
      atom.quantifier = expression[i];
      ++i;
    }
    atoms_.push_back(atom);
  }
}

bool RegexLite::MatchHere(std::size_t index, std::string_view text,
                          std::size_t pos) const {
  if (index == atoms_.size()) return !anchored_end_ || pos == text.size();
  const Atom& atom = atoms_[index];
  auto accepts = [&](std::size_t p) {
    return p < text.size() && atom.set[static_cast<unsigned char>(text[p])];
  };
  switch (atom.quantifier) {
    case 0:
      return accepts(pos) && MatchHere(index + 1, text, pos + 1);
    case '?':
      return (accepts(pos) && MatchHere(index + 1, text, pos + 1)) ||
             MatchHere(index + 1, text, pos);
    default: {
      std::size_t run = 0;
      while (accepts(pos + run)) ++run;
      const std::size_t min = atom.quantifier == '+' ? 1 : 0;
      for (std::size_t take = run + 1; take-- > min;) {
        if (MatchHere(index + 1, text, pos + take)) return true;
      }
      return false;
    }
  }
}

bool RegexLite::Search(std::string_view text) const {
  if (anchored_start_) return MatchHere(0, text, 0);
  for (std::size_t start = 0; start <= text.size(); ++start) {
    if (MatchHere(0, text, start)) return true;
  }
  return false;
}

}  // namespace cctm
