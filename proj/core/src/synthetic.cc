#include "cctm/synthetic.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "cctm/error.h"
#include "cctm/extraction.h"
#include "cctm/random.h"

namespace cctm {
namespace {

constexpr std::array<std::string_view, 10> kVerbs = {
    "use", "call", "create", "store", "load", "update", "read", "write", "hold", "track"};

constexpr std::array<std::string_view, 30> kNouns = {
    "buffer",  "cache",   "record",  "stream",  "token",   "parser",  "node",    "table",
    "socket",  "channel", "queue",   "session", "widget",  "handler", "registry", "schema",
    "cursor",  "packet",  "frame",   "ledger",  "vector",  "matrix",  "bundle",  "profile",
    "archive", "journal", "signal",  "window",  "account", "message"};

constexpr int kFillers = 4;
constexpr std::size_t kRecommendation = 5;

std::string Capitalized(std::string_view word) {
  std::string out(word);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

struct Filler {
  std::string_view subject;
  std::string_view verb;
  std::string_view object;
};

}  // namespace

const std::vector<SyntheticCategory>& SyntheticCategories() {
  static const std::vector<SyntheticCategory> categories = {
      {"Summary", {"overview", "essence", "abstraction"}, "first_person_summary"},
      {"Usage", {"workflow", "invocation", "lifecycle"}, "imperative_start"},
      {"Example", {"sample", "illustration", "snippet"}, "code_reference"},
      {"Warning", {"hazard", "caveat", "pitfall"}, "warning_modal"},
      {"Rationale", {"motive", "tradeoff", "justification"}, "question_form"},
      {"Recommendation", {"guidance", "advice", "preference"}, "conditional_usage"},
  };
  return categories;
}

std::string FillerSentence(std::string_view subject, std::string_view verb,
                           std::string_view object) {
  return "The " + std::string(subject) + " " + std::string(verb) + "s the " +
         std::string(object) + ".";
}

std::string TriggerSentence(std::size_t category, std::string_view subject,
                            std::string_view verb, std::string_view object) {
  const std::string n1(subject);
  const std::string v(verb);
  const std::string n2(object);
  switch (category) {
    case 0:
      return "I am the " + n1 + " that " + v + "s the " + n2 + ".";
    case 1:
      return Capitalized(v) + " the " + n2 + " with the " + n1 + ".";
    case 2:
      return "The " + n1 + "() " + v + "s the " + n2 + ".";
    case 3:
      return "The " + n1 + " should not " + v + " the " + n2 + ".";
    case 4:
      return "Why does the " + n1 + " " + v + " the " + n2 + "?";
    case kRecommendation:
      // Only valid for the verb "use"; the generator guarantees that.
      return "If so, use the " + n2 + " with the " + n1 + ".";
    default:
      throw ConfigError("InvalidArgument", "no synthetic category " + std::to_string(category));
  }
}

std::string SignatureSentence(std::size_t category) {
  const auto& words = SyntheticCategories().at(category).signature;
  return "The " + std::string(words[0]) + " and " + std::string(words[1]) + " of the " +
         std::string(words[2]) + ".";
}

std::vector<LabeledComment> GenerateSynthetic(const SyntheticOptions& options,
                                              const Taxonomy& taxonomy) {
  if (options.n_per_category < 10) {
    throw ConfigError("InvalidArgument", "n_per_category must be at least 10");
  }
  if (!(options.noise_rate >= 0.0 && options.noise_rate < 0.5)) {
    throw ConfigError("InvalidArgument", "noise_rate must lie in [0, 0.5)");
  }
  if (!(options.multi_label_rate >= 0.0 && options.multi_label_rate <= 1.0)) {
    throw ConfigError("InvalidArgument", "multi_label_rate must lie in [0, 1]");
  }
  const auto& categories = SyntheticCategories();
  const std::size_t n_categories = categories.size();
  std::vector<int> taxonomy_index;
  for (const SyntheticCategory& c : categories) {
    const Category* found = taxonomy.Find(c.name);
    if (found == nullptr || found->languages.size() != 3) {
      throw ConfigError("SchemaError", "taxonomy " + taxonomy.version() +
                                           " lacks category " + std::string(c.name) +
                                           " for all three languages");
    }
    taxonomy_index.push_back(taxonomy.IndexOf(c.name));
  }

  Rng rng(options.seed);
  const std::size_t n = static_cast<std::size_t>(options.n_per_category);
  const std::size_t total = n * n_categories;

  // labels[i] holds synthetic category indices; the first is the primary.
  std::vector<std::vector<std::size_t>> labels(total);
  for (std::size_t i = 0; i < total; ++i) labels[i].push_back(i / n);
  const auto n_multi = static_cast<std::size_t>(std::lround(options.multi_label_rate * n));
  for (std::size_t c = 0; c < n_categories; ++c) {
    std::vector<std::size_t> block(n);
    for (std::size_t j = 0; j < n; ++j) block[j] = c * n + j;
    rng.Shuffle(block);
    for (std::size_t j = 0; j < n_multi; ++j) {
      labels[block[j]].push_back((c + 1 + rng.Below(n_categories - 1)) % n_categories);
    }
  }
  std::vector<bool> noisy(total, false);
  {
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    rng.Shuffle(order);
    const auto n_noisy = static_cast<std::size_t>(std::lround(options.noise_rate * total));
    for (std::size_t j = 0; j < n_noisy; ++j) noisy[order[j]] = true;
  }

  std::vector<std::string> texts(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::array<Filler, kFillers> fillers;
    for (int s = 0; s < kFillers; ++s) {
      const std::size_t a = rng.Below(kNouns.size());
      std::size_t b = rng.Below(kNouns.size() - 1);
      if (b >= a) ++b;
      fillers[s] = {kNouns[a], s == 0 ? kVerbs[0] : kVerbs[rng.Below(kVerbs.size())], kNouns[b]};
    }
    std::array<int, kFillers> trigger_of{-1, -1, -1, -1};
    std::vector<std::size_t> ordered = labels[i];
    // The recommendation trigger needs slot 0, whose verb is always "use".
    std::stable_partition(ordered.begin(), ordered.end(),
                          [](std::size_t c) { return c == kRecommendation; });
    for (std::size_t c : ordered) {
      if (c == kRecommendation) {
        trigger_of[0] = static_cast<int>(c);
        continue;
      }
      std::vector<int> free;
      for (int s = 0; s < kFillers; ++s) {
        if (trigger_of[s] < 0) free.push_back(s);
      }
      trigger_of[free[rng.Below(free.size())]] = static_cast<int>(c);
    }
    std::vector<std::string> sentences;
    for (int s = 0; s < kFillers; ++s) {
      const Filler& f = fillers[s];
      sentences.push_back(trigger_of[s] < 0
                              ? FillerSentence(f.subject, f.verb, f.object)
                              : TriggerSentence(static_cast<std::size_t>(trigger_of[s]),
                                                f.subject, f.verb, f.object));
    }
    if (!noisy[i]) {
      for (std::size_t c : labels[i]) sentences.push_back(SignatureSentence(c));
    }
    rng.Shuffle(sentences);
    std::string text;
    for (const std::string& s : sentences) {
      if (!text.empty()) text.push_back(' ');
      text += s;
    }
    texts[i] = std::move(text);
  }

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  rng.Shuffle(order);

  static constexpr std::array<Language, 3> kLanguages = {Language::kJava, Language::kPython,
                                                         Language::kSmalltalk};
  static constexpr std::array<std::string_view, 3> kExtensions = {".java", ".py", ".st"};
  std::vector<LabeledComment> out;
  out.reserve(total);
  for (std::size_t rank = 0; rank < total; ++rank) {
    const std::size_t i = order[rank];
    char name[32];
    std::snprintf(name, sizeof name, "Synth%04zu", rank + 1);
    const std::size_t lang = rank % kLanguages.size();
    LabeledComment lc;
    ClassComment& c = lc.comment;
    c.language = kLanguages[lang];
    c.class_name = name;
    c.path = "synthetic/" + std::string(LanguageName(c.language)) + "/" + name +
             std::string(kExtensions[lang]);
    c.id = MakeCommentId(c.path, c.class_name, 0);
    c.raw_text = std::move(texts[i]);
    c.start_line = 1;
    c.end_line = 1;
    c.declaration_line = 2;
    std::vector<int> indices;
    for (std::size_t label : labels[i]) indices.push_back(taxonomy_index[label]);
    std::sort(indices.begin(), indices.end());
    for (int index : indices) lc.labels.push_back(taxonomy.categories()[index].name);
    out.push_back(std::move(lc));
  }
  return out;
}

}  // namespace cctm
