#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cctm {

struct Sentence {
  std::string text;
  int index = 0;

  bool operator==(const Sentence&) const = default;
};

// Ordered lowercase tokens; never empty strings, never whitespace.
using TokenStream = std::vector<std::string>;

// Splits on '.', '!' or '?' followed by whitespace or end of text, and on
// blank lines. A period after a single letter or after "e.g", "i.e", "etc"
// does not end a sentence.
std::vector<Sentence> SplitSentences(std::string_view text);

// Lowercases and splits on non-alphanumeric characters. `@word` becomes
// "ann_word". Pure digit runs longer than six characters are dropped.
TokenStream Tokenize(std::string_view text);

// Drops tokens from the frozen 127-word English stopword list. Annotation
// tokens ("ann_*") are kept.
TokenStream RemoveStopwords(const TokenStream& tokens);
bool IsStopword(std::string_view token);
// The stopword list in file order.
const std::vector<std::string>& Stopwords();

// Original Porter (1980) stemmer, following the reference C implementation.
// Words of length <= 2 and tokens with non-ASCII bytes are returned as is.
std::string PorterStem(std::string_view word);

// tokenize -> remove stopwords -> stem (annotation tokens are not stemmed).
TokenStream Preprocess(std::string_view text);

// Identifies the Preprocess chain in model files.
inline constexpr std::string_view kPreprocessingChain =
    "tokenize-v1|stopwords-en127-v1|porter-original";

}  // namespace cctm
