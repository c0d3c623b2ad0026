#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cctm/features.h"

namespace cctm {

struct Example {
  FeatureVector features;
  bool positive = false;

  bool operator==(const Example&) const = default;
};

// Throws cctm::Error (DegenerateLabel) unless both classes are present.
void RequireBothClasses(std::span<const Example> data);

// Seeded random undersampling of the majority class (without replacement)
// down to the minority count, then a seeded shuffle. Returns indices into
// `labels`. Throws DegenerateLabel for single-class input.
std::vector<std::size_t> BalanceIndices(const std::vector<bool>& labels,
                                        std::uint64_t seed);

std::vector<Example> Balance(std::span<const Example> data, std::uint64_t seed);

}  // namespace cctm
