#pragma once

// Shared growth routine for single trees and forest members.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cctm/decision_tree.h"
#include "cctm/random.h"

namespace cctm::detail {

// Row-sparse copy of a training set with feature ids interned in
// lexicographic order, so a smaller index means a smaller id.
class TrainingMatrix {
 public:
  explicit TrainingMatrix(std::span<const Example> data);

  std::size_t rows() const { return rows_.size(); }
  std::size_t features() const { return ids_.size(); }
  const std::string& feature_id(std::size_t j) const { return ids_[j]; }
  bool label(std::size_t row) const { return labels_[row] != 0; }
  double Value(std::size_t row, std::size_t feature) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  std::vector<char> labels_;
};

struct GrowOptions {
  TreeParams params;
  // Candidate features drawn per node; 0 means every feature, in index
  // order, with no randomness.
  std::size_t features_per_node = 0;
  Rng* rng = nullptr;
};

// `weights[row]` is the multiplicity of each row (bootstrap counts); rows
// with weight 0 are ignored.
DecisionTreeModel GrowTree(const TrainingMatrix& matrix,
                           std::span<const double> weights,
                           const GrowOptions& options);

}  // namespace cctm::detail
