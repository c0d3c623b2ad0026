#pragma once

// Naive reference computations written directly from the formulas, with
// no code shared with the library.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cctm/binary_dataset.h"
#include "cctm/random.h"

namespace cctm::testing {

// weight(t) = count(t) * (ln((1 + N) / (1 + df(t))) + 1), L2-normalised.
// Vocabulary = terms with df >= min_df over `corpus`.
inline std::map<std::string, double> TfidfOracle(const std::vector<std::vector<std::string>>& corpus,
                                                 const std::vector<std::string>& doc, int min_df) {
  const double n = static_cast<double>(corpus.size());
  std::map<std::string, double> raw;
  for (const std::string& term : doc) {
    int df = 0;
    for (const auto& d : corpus) {
      bool present = false;
      for (const std::string& t : d) present = present || t == term;
      df += present ? 1 : 0;
    }
    if (df < min_df) continue;
    raw[term] += 1.0 * (std::log((1.0 + n) / (1.0 + df)) + 1.0);
  }
  double sum = 0.0;
  for (const auto& [t, w] : raw) sum += w * w;
  for (auto& [t, w] : raw) w /= std::sqrt(sum);
  return raw;
}

// Posterior P(pos | x) by direct products of the smoothed likelihoods
// (weights act as exponents), normalised over the two classes.
inline double NaiveBayesOracle(const std::vector<Example>& data, const FeatureVector& x,
                               double alpha) {
  std::set<std::string> vocabulary;
  for (const Example& e : data) {
    for (const auto& [id, w] : e.features.entries()) vocabulary.insert(id);
  }
  double joint[2];
  for (int c = 0; c < 2; ++c) {
    double docs = 0.0;
    double total = 0.0;
    for (const Example& e : data) {
      if (e.positive != (c == 1)) continue;
      docs += 1.0;
      for (const auto& [id, w] : e.features.entries()) total += w;
    }
    double p = docs / static_cast<double>(data.size());
    for (const auto& [id, w] : x.entries()) {
      if (!vocabulary.count(id)) continue;
      double count = 0.0;
      for (const Example& e : data) {
        if (e.positive == (c == 1)) count += e.features.Get(id);
      }
      p *= std::pow((count + alpha) / (total + alpha * vocabulary.size()), w);
    }
    joint[c] = p;
  }
  return joint[1] / (joint[0] + joint[1]);
}

// Random corpus of at most `max_docs` documents over at most `max_terms`
// distinct terms.
inline std::vector<std::vector<std::string>> RandomCorpus(Rng& rng, std::size_t max_docs,
                                                          std::size_t max_terms) {
  const std::size_t docs = 1 + rng.Below(max_docs);
  const std::size_t terms = 1 + rng.Below(max_terms);
  std::vector<std::vector<std::string>> corpus(docs);
  for (auto& doc : corpus) {
    const std::size_t len = rng.Below(8);
    for (std::size_t i = 0; i < len; ++i) doc.push_back("t" + std::to_string(rng.Below(terms)));
  }
  return corpus;
}

}  // namespace cctm::testing
