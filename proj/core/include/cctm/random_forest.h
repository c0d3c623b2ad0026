#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cctm/decision_tree.h"

namespace cctm {

enum class FeatureSubsample { kSqrt, kAll };

struct ForestParams {
  int n_trees = 100;
  FeatureSubsample feature_subsample = FeatureSubsample::kSqrt;
  bool bootstrap = true;
  TreeParams tree;
  // Worker threads for tree growth; 0 = hardware concurrency. Not part of
  // the model.
  unsigned num_threads = 0;
};

struct RandomForestModel {
  std::vector<DecisionTreeModel> trees;
  int n_trees = 0;
  FeatureSubsample feature_subsample = FeatureSubsample::kSqrt;
  bool bootstrap = true;
  std::uint64_t bootstrap_seed = 0;

  // Mean of the trees' leaf pos_fractions.
  double PredictProba(const FeatureVector& features) const;
  // PredictProba > 0.5.
  bool Predict(const FeatureVector& features) const;

  bool operator==(const RandomForestModel&) const = default;
};

// Tree i sees a bootstrap sample drawn with seed + i and samples
// ceil(sqrt(d)) candidate features per node. Throws DegenerateLabel.
RandomForestModel TrainForest(std::span<const Example> data,
                              const ForestParams& params, std::uint64_t seed);

}  // namespace cctm
