#include "cctm/textproc.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "embedded_stopwords.h"

namespace cctm {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

char Lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string_view Trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && IsSpace(s[begin])) ++begin;
  while (end > begin && IsSpace(s[end - 1])) --end;
  return s.substr(begin, end - begin);
}

// A period ending this word does not end the sentence. A single letter
// only counts when the next word is not capitalised, so "Parses X. Returns"
// still splits.
bool IsAbbreviation(std::string_view word, char next) {
  while (!word.empty() && !IsWordByte(word.front())) word.remove_prefix(1);
  if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) {
    return !std::isupper(static_cast<unsigned char>(next));
  }
  std::string lower(word);
  std::transform(lower.begin(), lower.end(), lower.begin(), Lower);
  return lower == "e.g" || lower == "i.e" || lower == "etc";
}

const std::unordered_set<std::string_view>& StopwordSet() {
  static const std::unordered_set<std::string_view> set = [] {
    std::unordered_set<std::string_view> out;
    for (const std::string& w : Stopwords()) out.insert(w);
    return out;
  }();
  return set;
}

}  // namespace

std::vector<Sentence> SplitSentences(std::string_view text) {
  std::vector<Sentence> out;
  auto flush = [&](std::size_t begin, std::size_t end) {
    const std::string_view piece = Trim(text.substr(begin, end - begin));
    if (!piece.empty()) {
      out.push_back({std::string(piece), static_cast<int>(out.size())});
    }
  };

  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < n && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < n && text[j] == '\n') {
        flush(start, i);
        while (j < n && IsSpace(text[j])) ++j;
        start = i = j;
        continue;
      }
      ++i;
      continue;
    }
    if (IsTerminator(c)) {
      std::size_t last = i;
      while (last + 1 < n && IsTerminator(text[last + 1])) ++last;
      const bool at_boundary = last + 1 == n || IsSpace(text[last + 1]);
      bool split = at_boundary;
      if (split && c == '.' && last == i) {
        std::size_t word_begin = i;
        while (word_begin > start && !IsSpace(text[word_begin - 1])) --word_begin;
        std::size_t next = last + 1;
        while (next < n && IsSpace(text[next])) ++next;
        const char following = next < n ? text[next] : '\0';
        if (IsAbbreviation(text.substr(word_begin, i - word_begin), following)) split = false;
      }
      if (split) {
        flush(start, last + 1);
        start = last + 1;
      }
      i = last + 1;
      continue;
    }
    ++i;
  }
  flush(start, n);
  return out;
}

TokenStream Tokenize(std::string_view text) {
  TokenStream tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c == '@' && i + 1 < n && std::isalpha(static_cast<unsigned char>(text[i + 1])) &&
        (i == 0 || !IsWordByte(text[i - 1]))) {
      std::size_t j = i + 1;
      while (j < n && IsWordByte(text[j])) ++j;
      std::string token = "ann_";
      for (std::size_t k = i + 1; k < j; ++k) token.push_back(Lower(text[k]));
      tokens.push_back(std::move(token));
      i = j;
      continue;
    }
    if (!IsWordByte(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool all_digits = true;
    while (j < n && IsWordByte(text[j])) {
      all_digits = all_digits && std::isdigit(static_cast<unsigned char>(text[j]));
      ++j;
    }
    if (!(all_digits && j - i > 6)) {
      std::string token;
      token.reserve(j - i);
      for (std::size_t k = i; k < j; ++k) token.push_back(Lower(text[k]));
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

const std::vector<std::string>& Stopwords() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> out;
    std::string_view data = embedded::stopwords;
    while (!data.empty()) {
      const std::size_t eol = data.find('\n');
      const std::string_view word = Trim(data.substr(0, eol));
      if (!word.empty()) out.emplace_back(word);
      if (eol == std::string_view::npos) break;
      data.remove_prefix(eol + 1);
    }
    return out;
  }();
  return words;
}

bool IsStopword(std::string_view token) { return StopwordSet().contains(token); }

TokenStream RemoveStopwords(const TokenStream& tokens) {
  TokenStream out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (token.starts_with("ann_") || !IsStopword(token)) out.push_back(token);
  }
  return out;
}

TokenStream Preprocess(std::string_view text) {
  TokenStream tokens = RemoveStopwords(Tokenize(text));
  for (std::string& token : tokens) {
    if (!token.starts_with("ann_")) token = PorterStem(token);
  }
  return tokens;
}

}  // namespace cctm
