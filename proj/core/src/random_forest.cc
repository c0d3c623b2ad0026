#include "cctm/random_forest.h"

#include <cmath>

#include "cctm/parallel.h"
#include "cctm/random.h"
#include "tree_builder.h"

namespace cctm {

double RandomForestModel::PredictProba(const FeatureVector& features) const {
  if (trees.empty()) return 0.0;
  double sum = 0.0;
  for (const DecisionTreeModel& tree : trees) sum += tree.PredictProba(features);
  return sum / static_cast<double>(trees.size());
}

bool RandomForestModel::Predict(const FeatureVector& features) const {
  return PredictProba(features) > 0.5;
}

RandomForestModel TrainForest(std::span<const Example> data, const ForestParams& params,
                              std::uint64_t seed) {
  RequireBothClasses(data);
  const detail::TrainingMatrix matrix(data);
  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.features();
  std::size_t per_node = 0;
  if (params.feature_subsample == FeatureSubsample::kSqrt && d > 0) {
    per_node = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
  }

  RandomForestModel forest;
  forest.n_trees = params.n_trees;
  forest.feature_subsample = params.feature_subsample;
  forest.bootstrap = params.bootstrap;
  forest.bootstrap_seed = seed;
  forest.trees.resize(static_cast<std::size_t>(std::max(0, params.n_trees)));

  ParallelFor(forest.trees.size(), params.num_threads, [&](std::size_t i) {
    Rng rng(seed + i);
    std::vector<double> weights(n, params.bootstrap ? 0.0 : 1.0);
    if (params.bootstrap) {
      for (std::size_t draw = 0; draw < n; ++draw) weights[rng.Below(n)] += 1.0;
    }
    forest.trees[i] = detail::GrowTree(matrix, weights, {params.tree, per_node, &rng});
  });
  return forest;
}

}  // namespace cctm
