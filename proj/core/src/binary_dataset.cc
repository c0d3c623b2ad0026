#include "cctm/binary_dataset.h"

#include <algorithm>

#include "cctm/error.h"
#include "cctm/random.h"

namespace cctm {

void RequireBothClasses(std::span<const Example> data) {
  const bool any_pos = std::any_of(data.begin(), data.end(),
                                   [](const Example& e) { return e.positive; });
  const bool any_neg = std::any_of(data.begin(), data.end(),
                                   [](const Example& e) { return !e.positive; });
  if (!any_pos || !any_neg) {
    throw DataError("DegenerateLabel",
                    any_pos ? "no negative examples" : "no positive examples");
  }
}

std::vector<std::size_t> BalanceIndices(const std::vector<bool>& labels,
                                        std::uint64_t seed) {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw DataError("DegenerateLabel",
                    positives.empty() ? "no positive examples" : "no negative examples");
  }
  Rng rng(seed);
  std::vector<std::size_t>& majority =
      positives.size() >= negatives.size() ? positives : negatives;
  const std::size_t keep = std::min(positives.size(), negatives.size());
  rng.Shuffle(majority);
  majority.resize(keep);

  std::vector<std::size_t> out;
  out.reserve(2 * keep);
  out.insert(out.end(), positives.begin(), positives.end());
  out.insert(out.end(), negatives.begin(), negatives.end());
  std::sort(out.begin(), out.end());
  rng.Shuffle(out);
  return out;
}

std::vector<Example> Balance(std::span<const Example> data, std::uint64_t seed) {
  std::vector<bool> labels;
  labels.reserve(data.size());
  for (const Example& e : data) labels.push_back(e.positive);
  const std::vector<std::size_t> indices = BalanceIndices(labels, seed);
  std::vector<Example> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(data[i]);
  return out;
}

}  // namespace cctm
