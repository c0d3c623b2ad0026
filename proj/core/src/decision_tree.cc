#include "cctm/decision_tree.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "tree_builder.h"

namespace cctm {

double BinaryEntropy(double positive, double negative) {
  const double total = positive + negative;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double part : {positive, negative}) {
    if (part > 0.0) {
      const double q = part / total;
      h -= q * std::log2(q);
    }
  }
  return h;
}

const TreeNode& DecisionTreeModel::Leaf(const FeatureVector& features) const {
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    at = features.Get(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes[at];
}

double DecisionTreeModel::PredictProba(const FeatureVector& features) const {
  return Leaf(features).pos_fraction;
}

bool DecisionTreeModel::Predict(const FeatureVector& features) const {
  return Leaf(features).positive;
}

int DecisionTreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> node_depth(nodes.size(), 0);
  int deepest = 0;
  // Children always follow their parent in the arena.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, node_depth[i]);
    if (!nodes[i].is_leaf()) {
      node_depth[nodes[i].left] = node_depth[i] + 1;
      node_depth[nodes[i].right] = node_depth[i] + 1;
    }
  }
  return deepest;
}

DecisionTreeModel TrainTree(std::span<const Example> data, const TreeParams& params) {
  RequireBothClasses(data);
  const detail::TrainingMatrix matrix(data);
  const std::vector<double> weights(matrix.rows(), 1.0);
  return detail::GrowTree(matrix, weights, {params, 0, nullptr});
}

namespace detail {

TrainingMatrix::TrainingMatrix(std::span<const Example> data) {
  std::map<std::string_view, std::size_t> index;
  for (const Example& e : data) {
    for (const auto& [id, weight] : e.features.entries()) index.emplace(id, 0);
  }
  ids_.reserve(index.size());
  for (auto& [id, slot] : index) {
    slot = ids_.size();
    ids_.emplace_back(id);
  }
  rows_.reserve(data.size());
  labels_.reserve(data.size());
  for (const Example& e : data) {
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(e.features.size());
    for (const auto& [id, weight] : e.features.entries()) row.emplace_back(index.at(id), weight);
    rows_.push_back(std::move(row));
    labels_.push_back(e.positive ? 1 : 0);
  }
}

double TrainingMatrix::Value(std::size_t row, std::size_t feature) const {
  const auto& entries = rows_[row];
  auto it = std::lower_bound(entries.begin(), entries.end(), feature,
                             [](const auto& entry, std::size_t f) { return entry.first < f; });
  return it != entries.end() && it->first == feature ? it->second : 0.0;
}

namespace {

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
  double ratio = 0.0;
};

struct FeatureScan {
  std::optional<Split> best;         // highest gain > 0
  std::optional<Split> first_valid;  // smallest threshold meeting min_leaf
};

class Grower {
 public:
  Grower(const TrainingMatrix& matrix, std::span<const double> weights,
         const GrowOptions& options)
      : matrix_(matrix), weights_(weights), options_(options) {
    if (options_.features_per_node > 0) {
      permutation_.resize(matrix_.features());
      for (std::size_t j = 0; j < permutation_.size(); ++j) permutation_[j] = j;
    }
  }

  DecisionTreeModel Run() {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < matrix_.rows(); ++r) {
      if (weights_[r] > 0.0) rows.push_back(r);
    }
    Build(rows, 0);
    DecisionTreeModel model;
    model.nodes = std::move(nodes_);
    model.max_depth = options_.params.max_depth;
    model.min_leaf = options_.params.min_leaf;
    return model;
  }

 private:
  int Build(const std::vector<std::size_t>& rows, int depth) {
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t r : rows) (matrix_.label(r) ? pos : neg) += weights_[r];

    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    auto make_leaf = [&] {
      TreeNode& leaf = nodes_[index];
      leaf.positive = pos > neg;
      leaf.pos_fraction = pos + neg > 0.0 ? pos / (pos + neg) : 0.0;
      return index;
    };
    if (depth >= options_.params.max_depth || pos + neg < 2.0 * options_.params.min_leaf ||
        pos == 0.0 || neg == 0.0) {
      return make_leaf();
    }
    const std::optional<Split> split = FindSplit(rows, pos, neg);
    if (!split) return make_leaf();

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (matrix_.Value(r, split->feature) <= split->threshold ? left : right).push_back(r);
    }
    const int left_index = Build(left, depth + 1);
    const int right_index = Build(right, depth + 1);
    TreeNode& node = nodes_[index];
    node.feature = matrix_.feature_id(split->feature);
    node.threshold = split->threshold;
    node.left = left_index;
    node.right = right_index;
    return index;
  }

  FeatureScan Scan(const std::vector<std::size_t>& rows, std::size_t feature,
                   double pos, double neg) {
    items_.clear();
    for (std::size_t r : rows) {
      items_.push_back({matrix_.Value(r, feature), weights_[r], matrix_.label(r)});
    }
    std::stable_sort(items_.begin(), items_.end(),
                     [](const Item& a, const Item& b) { return a.value < b.value; });

    const double total = pos + neg;
    const double parent = BinaryEntropy(pos, neg);
    const double min_leaf = options_.params.min_leaf;
    FeatureScan scan;
    double left_pos = 0.0;
    double left_neg = 0.0;
    for (std::size_t i = 0; i + 1 < items_.size(); ++i) {
      (items_[i].positive ? left_pos : left_neg) += items_[i].weight;
      const double lo = items_[i].value;
      const double hi = items_[i + 1].value;
      if (!(lo < hi)) continue;
      const double left = left_pos + left_neg;
      const double right = total - left;
      if (left < min_leaf || right < min_leaf) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      const double gain = parent - (left / total) * BinaryEntropy(left_pos, left_neg) -
                          (right / total) * BinaryEntropy(pos - left_pos, neg - left_neg);
      const double split_info = BinaryEntropy(left, right);
      const Split candidate{feature, threshold, gain, split_info > 0.0 ? gain / split_info : 0.0};
      if (!scan.first_valid) scan.first_valid = candidate;
      if (gain > 1e-12 && (!scan.best || gain > scan.best->gain)) scan.best = candidate;
    }
    return scan;
  }

  // C4.5 selection: among candidates whose gain is at least the average,
  // the highest gain ratio wins; ties go to the smaller feature id. When no
  // candidate feature has positive gain, further features are drawn; if
  // none has any, the node splits on the smallest valid threshold of the
  // smallest feature id so that distinct vectors keep separating.
  std::optional<Split> FindSplit(const std::vector<std::size_t>& rows, double pos,
                                 double neg) {
    std::vector<Split> candidates;
    const std::size_t d = matrix_.features();
    if (options_.features_per_node == 0 || options_.features_per_node >= d) {
      for (std::size_t f = 0; f < d; ++f) {
        if (auto scan = Scan(rows, f, pos, neg); scan.best) candidates.push_back(*scan.best);
      }
    } else {
      Rng& rng = *options_.rng;
      for (std::size_t t = 0; t < d; ++t) {
        std::swap(permutation_[t], permutation_[t + rng.Below(d - t)]);
        if (auto scan = Scan(rows, permutation_[t], pos, neg); scan.best) {
          candidates.push_back(*scan.best);
        }
        if (t + 1 >= options_.features_per_node && !candidates.empty()) break;
      }
    }

    if (candidates.empty()) {
      for (std::size_t f = 0; f < d; ++f) {
        if (auto scan = Scan(rows, f, pos, neg); scan.first_valid) return scan.first_valid;
      }
      return std::nullopt;
    }

    double average = 0.0;
    for (const Split& s : candidates) average += s.gain;
    average /= static_cast<double>(candidates.size());
    std::optional<Split> best;
    for (const Split& s : candidates) {
      if (s.gain < average - 1e-12) continue;
      if (!best || s.ratio > best->ratio ||
          (s.ratio == best->ratio && s.feature < best->feature)) {
        best = s;
      }
    }
    return best;
  }

  struct Item {
    double value;
    double weight;
    bool positive;
  };

  const TrainingMatrix& matrix_;
  std::span<const double> weights_;
  const GrowOptions& options_;
  std::vector<std::size_t> permutation_;
  std::vector<TreeNode> nodes_;
  std::vector<Item> items_;
};

}  // namespace

DecisionTreeModel GrowTree(const TrainingMatrix& matrix, std::span<const double> weights,
                           const GrowOptions& options) {
  return Grower(matrix, weights, options).Run();
}

}  // namespace detail
}  // namespace cctm
