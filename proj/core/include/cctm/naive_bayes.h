#pragma once

#include <array>
#include <map>
#include <span>
#include <string>

#include "cctm/binary_dataset.h"

namespace cctm {

// Multinomial naive Bayes with Laplace smoothing over sparse real-valued
// features (weights act as fractional counts). Index 0 is the negative
// class, index 1 the positive class.
struct NaiveBayesModel {
  std::array<double, 2> class_log_prior{};
  std::map<std::string, std::array<double, 2>, std::less<>>
      feature_log_likelihood;
  double smoothing_alpha = 1.0;
  int vocab_size_at_train = 0;

  bool operator==(const NaiveBayesModel&) const = default;
};

// log P(f|c) = ln((count(f,c) + alpha) / (total(c) + alpha * V)), V the
// number of distinct features seen in training. Throws DegenerateLabel.
NaiveBayesModel TrainNaiveBayes(std::span<const Example> data,
                                double alpha = 1.0);

// P(positive | features). Class scores are accumulated as scaled products
// (mantissa and binary exponent), which is as underflow-safe as log-sum-exp
// and exact whenever the stored likelihoods round-trip through exp. Unseen
// features are ignored.
double PredictProbaNb(const NaiveBayesModel& model,
                      const FeatureVector& features);

}  // namespace cctm
