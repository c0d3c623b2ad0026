#include "cctm/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cctm/error.h"
#include "embedded_default_patterns.h"
#include "json_util.h"

namespace cctm {
namespace {

using detail::Json;

TokenStream SplitPhrase(std::string_view phrase) {
  TokenStream out;
  std::string current;
  for (char c : phrase) {
    if (c == ' ' || c == '\t') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool ContainsRun(const TokenStream& tokens, const TokenStream& phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return false;
  return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) !=
         tokens.end();
}

bool StartsWith(const TokenStream& tokens, const TokenStream& phrase) {
  return !phrase.empty() && phrase.size() <= tokens.size() &&
         std::equal(phrase.begin(), phrase.end(), tokens.begin());
}

// "*" matches any (possibly empty) run of tokens.
bool TemplateAt(const TokenStream& tokens, std::size_t ti,
                const TokenStream& elements, std::size_t pi) {
  if (pi == elements.size()) return true;
  if (elements[pi] == "*") {
    for (std::size_t t = ti; t <= tokens.size(); ++t) {
      if (TemplateAt(tokens, t, elements, pi + 1)) return true;
    }
    return false;
  }
  return ti < tokens.size() && tokens[ti] == elements[pi] &&
         TemplateAt(tokens, ti + 1, elements, pi + 1);
}

bool MatchesTemplate(const TokenStream& tokens, const TokenStream& elements) {
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    if (TemplateAt(tokens, start, elements, 0)) return true;
  }
  return false;
}

std::string_view MatcherKindName(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::kKeywordSet: return "keyword_set";
    case MatcherKind::kPrefix: return "prefix";
    case MatcherKind::kTemplate: return "template";
    case MatcherKind::kRegexLite: return "regex_lite";
  }
  return "keyword_set";
}

}  // namespace

// ------------------------------------------------------------ FeatureVector

FeatureVector::FeatureVector(Map entries) {
  for (auto& [id, weight] : entries) {
    if (weight != 0.0) entries_.emplace(id, weight);
  }
}

void FeatureVector::Set(std::string id, double weight) {
  if (weight == 0.0) {
    auto it = entries_.find(id);
    if (it != entries_.end()) entries_.erase(it);
    return;
  }
  entries_[std::move(id)] = weight;
}

double FeatureVector::Get(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? 0.0 : it->second;
}

// --------------------------------------------------------------- TF-IDF

int Vocabulary::Find(std::string_view term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return -1;
  return static_cast<int>(it - terms.begin());
}

Vocabulary BuildVocabulary(std::span<const TokenStream> corpus, int min_df) {
  if (corpus.empty()) throw DataError("EmptyCorpus", "cannot build a vocabulary from no documents");
  if (min_df < 1) throw ConfigError("InvalidArgument", "min_df must be at least 1");
  std::map<std::string, int, std::less<>> df;
  for (const TokenStream& doc : corpus) {
    const std::set<std::string_view> unique(doc.begin(), doc.end());
    for (std::string_view term : unique) {
      auto it = df.find(term);
      if (it == df.end()) {
        df.emplace(std::string(term), 1);
      } else {
        ++it->second;
      }
    }
  }
  Vocabulary vocab;
  vocab.n_docs = static_cast<int>(corpus.size());
  vocab.min_df = min_df;
  for (const auto& [term, count] : df) {
    if (count < min_df) continue;
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(count);
  }
  return vocab;
}

FeatureVector TfidfVector(const TokenStream& doc, const Vocabulary& vocab) {
  std::map<int, int> counts;
  for (const std::string& token : doc) {
    const int index = vocab.Find(token);
    if (index >= 0) ++counts[index];
  }
  std::vector<std::pair<int, double>> raw;
  raw.reserve(counts.size());
  double norm_sq = 0.0;
  for (const auto& [index, count] : counts) {
    const double idf = std::log((1.0 + vocab.n_docs) / (1.0 + vocab.doc_freq[index])) + 1.0;
    const double weight = count * idf;
    raw.emplace_back(index, weight);
    norm_sq += weight * weight;
  }
  FeatureVector out;
  if (raw.empty()) return out;
  const double norm = std::sqrt(norm_sq);
  for (const auto& [index, weight] : raw) {
    out.Set(std::string(kTfidfPrefix) + vocab.terms[index], weight / norm);
  }
  return out;
}

// ------------------------------------------------------------- Patterns

PatternLibrary::PatternLibrary(std::string version, std::vector<Pattern> patterns)
    : version_(std::move(version)), patterns_(std::move(patterns)) {
  std::set<std::string> ids;
  for (const Pattern& p : patterns_) {
    if (p.id.empty()) throw ConfigError("SchemaError", "pattern with empty id");
    if (!ids.insert(p.id).second) {
      throw ConfigError("SchemaError", "duplicate pattern id \"" + p.id + "\"");
    }
    if (p.spec.empty()) {
      throw ConfigError("SchemaError", "pattern \"" + p.id + "\" has an empty spec");
    }
    std::vector<TokenStream> phrases;
    std::vector<RegexLite> expressions;
    for (const std::string& entry : p.spec) {
      if (p.kind == MatcherKind::kRegexLite) {
        expressions.emplace_back(entry);
      } else {
        TokenStream phrase = SplitPhrase(entry);
        if (phrase.empty()) {
          throw ConfigError("SchemaError", "pattern \"" + p.id + "\" has a blank phrase");
        }
        phrases.push_back(std::move(phrase));
      }
    }
    phrases_.push_back(std::move(phrases));
    expressions_.push_back(std::move(expressions));
  }
}

bool PatternLibrary::Matches(std::size_t index, std::string_view sentence,
                             const TokenStream& raw_tokens) const {
  const Pattern& pattern = patterns_[index];
  switch (pattern.kind) {
    case MatcherKind::kKeywordSet:
      return std::any_of(phrases_[index].begin(), phrases_[index].end(),
                         [&](const TokenStream& p) { return ContainsRun(raw_tokens, p); });
    case MatcherKind::kPrefix:
      return std::any_of(phrases_[index].begin(), phrases_[index].end(),
                         [&](const TokenStream& p) { return StartsWith(raw_tokens, p); });
    case MatcherKind::kTemplate:
      return std::any_of(phrases_[index].begin(), phrases_[index].end(),
                         [&](const TokenStream& p) { return MatchesTemplate(raw_tokens, p); });
    case MatcherKind::kRegexLite:
      return std::any_of(expressions_[index].begin(), expressions_[index].end(),
                         [&](const RegexLite& r) { return r.Search(sentence); });
  }
  return false;
}

PatternLibrary ParsePatternLibrary(std::string_view json_text) {
  const Json doc = detail::ParseJson(json_text, true, "SchemaError", "pattern library");
  auto schema = [](const std::string& message) {
    return ConfigError("SchemaError", message);
  };
  if (!doc.is_object()) throw schema("$: pattern library must be an object");
  try {
    detail::RequireKnownKeys(doc, {"version", "patterns"}, "$");
  } catch (const std::invalid_argument& e) {
    throw schema(e.what());
  }
  if (!doc.contains("version") || !doc["version"].is_string() ||
      doc["version"].get<std::string>().empty()) {
    throw schema("$.version: must be a non-empty string");
  }
  if (!doc.contains("patterns") || !doc["patterns"].is_array()) {
    throw schema("$.patterns: must be an array");
  }
  std::vector<Pattern> patterns;
  for (std::size_t i = 0; i < doc["patterns"].size(); ++i) {
    const Json& entry = doc["patterns"][i];
    const std::string path = "$.patterns[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw schema(path + ": must be an object");
    try {
      detail::RequireKnownKeys(entry, {"id", "kind", "spec", "description"}, path);
    } catch (const std::invalid_argument& e) {
      throw schema(e.what());
    }
    Pattern p;
    if (!entry.contains("id") || !entry["id"].is_string()) throw schema(path + ".id: must be a string");
    p.id = entry["id"].get<std::string>();
    if (!entry.contains("kind") || !entry["kind"].is_string()) {
      throw schema(path + ".kind: must be a string");
    }
    const std::string kind = entry["kind"].get<std::string>();
    if (kind == "keyword_set") {
      p.kind = MatcherKind::kKeywordSet;
    } else if (kind == "prefix") {
      p.kind = MatcherKind::kPrefix;
    } else if (kind == "template") {
      p.kind = MatcherKind::kTemplate;
    } else if (kind == "regex_lite") {
      p.kind = MatcherKind::kRegexLite;
    } else {
      throw ConfigError("UnknownMatcherKind", path + ".kind: \"" + kind + "\"");
    }
    if (!entry.contains("spec")) throw schema(path + ".spec: missing");
    const Json& spec = entry["spec"];
    if (spec.is_string()) {
      p.spec.push_back(spec.get<std::string>());
    } else if (spec.is_array()) {
      for (const Json& s : spec) {
        if (!s.is_string()) throw schema(path + ".spec: entries must be strings");
        p.spec.push_back(s.get<std::string>());
      }
    } else {
      throw schema(path + ".spec: must be a string or an array of strings");
    }
    if (entry.contains("description")) {
      if (!entry["description"].is_string()) throw schema(path + ".description: must be a string");
      p.description = entry["description"].get<std::string>();
    }
    patterns.push_back(std::move(p));
  }
  return PatternLibrary(doc["version"].get<std::string>(), std::move(patterns));
}

PatternLibrary LoadPatternLibrary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("IoError", "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePatternLibrary(buffer.str());
}

const PatternLibrary& DefaultPatternLibrary() {
  static const PatternLibrary library = ParsePatternLibrary(embedded::default_patterns);
  return library;
}

std::string PatternLibraryToJson(const PatternLibrary& library) {
  Json doc = Json::object();
  doc["version"] = library.version();
  Json list = Json::array();
  for (const Pattern& p : library.patterns()) {
    Json entry = Json::object();
    entry["id"] = p.id;
    entry["kind"] = MatcherKindName(p.kind);
    entry["spec"] = p.spec;
    entry["description"] = p.description;
    list.push_back(std::move(entry));
  }
  doc["patterns"] = std::move(list);
  return detail::DumpPretty(doc);
}

FeatureVector PatternFeatures(std::span<const Sentence> sentences,
                              const PatternLibrary& library) {
  FeatureVector out;
  std::vector<TokenStream> tokens;
  tokens.reserve(sentences.size());
  for (const Sentence& s : sentences) tokens.push_back(Tokenize(s.text));
  for (std::size_t p = 0; p < library.patterns().size(); ++p) {
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      if (library.Matches(p, sentences[s].text, tokens[s])) {
        out.Set(std::string(kPatternPrefix) + library.patterns()[p].id, 1.0);
        break;
      }
    }
  }
  return out;
}

FeatureVector Combine(const FeatureVector& tfidf, const FeatureVector& patterns) {
  FeatureVector::Map merged = tfidf.entries();
  for (const auto& [id, weight] : patterns.entries()) {
    if (!merged.emplace(id, weight).second) {
      throw DataError("NamespaceCollision", "feature \"" + id + "\" present in both vectors");
    }
  }
  return FeatureVector(std::move(merged));
}

std::string_view FeatureModeName(FeatureMode mode) {
  return mode == FeatureMode::kTfidfOnly ? "tfidf" : "nlp+tfidf";
}

FeatureMode ParseFeatureMode(std::string_view name) {
  if (name == "tfidf") return FeatureMode::kTfidfOnly;
  if (name == "nlp+tfidf") return FeatureMode::kNlpPlusTfidf;
  throw ConfigError("InvalidArgument", "unknown feature mode \"" + std::string(name) +
                                           "\" (expected tfidf or nlp+tfidf)");
}

PreparedText PrepareText(std::string_view text, const PatternLibrary& library) {
  PreparedText out;
  out.terms = Preprocess(text);
  const std::vector<Sentence> sentences = SplitSentences(text);
  out.patterns = PatternFeatures(sentences, library);
  return out;
}

FeatureVector Featurize(const PreparedText& prepared, const Vocabulary& vocab,
                        FeatureMode mode) {
  FeatureVector tfidf = TfidfVector(prepared.terms, vocab);
  if (mode == FeatureMode::kTfidfOnly) return tfidf;
  return Combine(tfidf, prepared.patterns);
}

}  // namespace cctm
