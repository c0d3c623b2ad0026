#include "cctm/naive_bayes.h"

#include <algorithm>
#include <cmath>

#include "cctm/error.h"

namespace cctm {

NaiveBayesModel TrainNaiveBayes(std::span<const Example> data, double alpha) {
  RequireBothClasses(data);
  if (!(alpha > 0.0)) throw ConfigError("InvalidArgument", "smoothing alpha must be positive");

  std::map<std::string, std::array<double, 2>, std::less<>> counts;
  std::array<double, 2> totals{};
  std::array<double, 2> docs{};
  for (const Example& example : data) {
    const int c = example.positive ? 1 : 0;
    docs[c] += 1.0;
    for (const auto& [id, weight] : example.features.entries()) {
      counts[id][c] += weight;
      totals[c] += weight;
    }
  }

  NaiveBayesModel model;
  model.smoothing_alpha = alpha;
  model.vocab_size_at_train = static_cast<int>(counts.size());
  const double n = docs[0] + docs[1];
  model.class_log_prior = {std::log(docs[0] / n), std::log(docs[1] / n)};
  const double v = static_cast<double>(counts.size());
  for (const auto& [id, per_class] : counts) {
    std::array<double, 2> ll{};
    for (int c = 0; c < 2; ++c) {
      ll[c] = std::log((per_class[c] + alpha) / (totals[c] + alpha * v));
    }
    model.feature_log_likelihood.emplace(id, ll);
  }
  return model;
}

namespace {

// A positive number kept as mantissa * 2^exponent so long products of small
// likelihoods neither underflow nor lose their ratio.
struct ScaledProduct {
  double mantissa = 1.0;
  long exponent = 0;

  // Multiplies by exp(log_factor).
  void Times(double log_factor) {
    // exp underflows below about -745; peel off powers of two first.
    constexpr double kSafe = -700.0;
    if (log_factor < kSafe) {
      const double halvings = std::floor(log_factor / std::log(2.0));
      exponent += static_cast<long>(halvings);
      log_factor -= halvings * std::log(2.0);
    }
    mantissa *= std::exp(log_factor);
    int e = 0;
    mantissa = std::frexp(mantissa, &e);
    exponent += e;
  }
};

}  // namespace

double PredictProbaNb(const NaiveBayesModel& model, const FeatureVector& features) {
  ScaledProduct neg;
  ScaledProduct pos;
  neg.Times(model.class_log_prior[0]);
  pos.Times(model.class_log_prior[1]);
  for (const auto& [id, weight] : features.entries()) {
    auto it = model.feature_log_likelihood.find(id);
    if (it == model.feature_log_likelihood.end()) continue;
    neg.Times(weight * it->second[0]);
    pos.Times(weight * it->second[1]);
  }
  // Same normalisation as log-sum-exp: scale both by the larger exponent.
  const long top = std::max(neg.exponent, pos.exponent);
  const double e_neg = std::ldexp(neg.mantissa, static_cast<int>(std::max(neg.exponent - top, -2000L)));
  const double e_pos = std::ldexp(pos.mantissa, static_cast<int>(std::max(pos.exponent - top, -2000L)));
  return e_pos / (e_neg + e_pos);
}

}  // namespace cctm
