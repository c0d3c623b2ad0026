#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cctm {

// A small byte-oriented matcher for URL / identifier / punctuation shapes.
// Supported syntax: literals, '.', escapes \d \D \w \W \s \S and escaped
// punctuation, bracket classes with ranges and '^' negation, the
// quantifiers '*', '+' and '?', and the anchors '^' and '$'. No groups or
// alternation. Search is unanchored unless '^' is used.
class RegexLite {
 public:
  // Throws cctm::Error (SchemaError) on malformed expressions.
  explicit RegexLite(std::string_view expression);

  bool Search(std::string_view text) const;
  const std::string& expression() const { return expression_; }

 private:
  struct Atom {
    bool set[256] = {};
    char quantifier = 0;  // 0, '*', '+', '?'
  };

  bool MatchHere(std::size_t atom, std::string_view text,
                 std::size_t pos) const;

  std::string expression_;
  std::vector<Atom> atoms_;
  bool anchored_start_ = false;
  bool anchored_end_ = false;
};

}  // namespace cctm
