#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cctm/binary_dataset.h"

namespace cctm {

struct TreeNode {
  // Internal nodes: go left when value(feature) <= threshold.
  std::string feature;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaves.
  bool positive = false;
  double pos_fraction = 0.0;

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

inline constexpr int kUnboundedDepth = std::numeric_limits<int>::max();

struct TreeParams {
  int max_depth = 20;
  int min_leaf = 1;
};

// Binary threshold tree grown with the C4.5 gain-ratio criterion, no
// pruning. nodes[0] is the root.
struct DecisionTreeModel {
  std::vector<TreeNode> nodes;
  int max_depth = 20;
  int min_leaf = 1;

  const TreeNode& Leaf(const FeatureVector& features) const;
  // Leaf pos_fraction.
  double PredictProba(const FeatureVector& features) const;
  // Leaf majority class; ties go negative.
  bool Predict(const FeatureVector& features) const;
  int depth() const;

  bool operator==(const DecisionTreeModel&) const = default;
};

// Throws DegenerateLabel.
DecisionTreeModel TrainTree(std::span<const Example> data,
                            const TreeParams& params = {});

// Binary entropy in bits of a (positive, negative) weight split.
double BinaryEntropy(double positive, double negative);

}  // namespace cctm
