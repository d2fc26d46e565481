// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <array>
#include <vector>

#include "svreid/core/types.hpp"

namespace svreid {

inline constexpr int kPyramidLevels = 3;
inline constexpr std::array<int, kPyramidLevels> kPyramidStrides = {8, 16, 32};
inline constexpr int kHistogramBins = 16;
inline constexpr int kHistogramChannels = 3;

// Grid size of one pyramid level for a nominal frame size (rounded up).
inline int level_extent(int frame_size, int level) {
  const int s = kPyramidStrides[static_cast<std::size_t>(level)];
  return (frame_size + s - 1) / s;
}

// Everything a provider supplies for one frame: the three-level feature
// pyramid, base-detector candidates and a normalized color histogram.
struct FrameBundle {
  int frame_index = 0;
  std::array<FeatureMap, kPyramidLevels> pyramid;
  std::vector<Detection> candidates;
  // kHistogramChannels x kHistogramBins, each channel sums to 1.
  std::array<float, kHistogramChannels * kHistogramBins> rgb_histogram{};

  // Nominal frame edge length implied by the level-0 grid.
  int frame_size_hint() const { return pyramid[0].width() * kPyramidStrides[0]; }
};

struct GroundTruthRecord {
  int frame_index = 0;
  int object_id = 0;
  BoundingBox box;
  bool visible = true;
  int class_id = 0;
};

struct GroundTruth {
  std::vector<GroundTruthRecord> records;  // sorted by (frame, object)
};

}  // namespace svreid
