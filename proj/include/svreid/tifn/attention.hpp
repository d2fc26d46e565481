// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <vector>

#include "svreid/core/cell_grid.hpp"
#include "svreid/core/types.hpp"

namespace svreid {

// Attention maps are grids with every value in [0,1].
using AttentionMap = Grid;

// One frame of stored crops/spatial info at a single pyramid level.
struct FrameHistory {
  int frame_index = 0;
  std::vector<FeatureCrop> crops;
};

// Region of `map` covered by the detection box scaled into level
// coordinates, rounded outward and clamped; minimum 1x1. Throws
// DegenerateInputError when the box misses the map entirely.
FeatureCrop crop_feature(const FeatureMap& map, const Detection& det, int scale_level);

// Valid-mode sliding inner product of the cell-normalized crop over the
// cell-normalized map, divided by the crop's cell count and zero-padded
// back to map size centered on the valid region. Values in [-1,1].
Grid xcorr(const FeatureCrop& crop, const FeatureMap& map);

// Same, against a map whose cells are already normalized.
Grid xcorr_prenormalized(const FeatureCrop& crop, const CellGrid& map_cells);

// Mean over the stored frames of clip(sum of crop correlations).
AttentionMap local_semantic_attention(const std::vector<FrameHistory>& history,
                                      const FeatureMap& current);
AttentionMap local_semantic_attention(const std::vector<FrameHistory>& history,
                                      const CellGrid& current_cells);

// Truncated 2-D Hann window of size round(spat.h) x round(spat.w) centered
// at spat.center; values below `threshold` are zeroed.
AttentionMap hanning_window_2d(const SpatialInfo& spat, int out_h, int out_w, float threshold);

// Sum of Hann windows over all stored objects, divided by the number of
// frames present, clipped to [0,1].
AttentionMap local_localization_attention(const std::vector<FrameHistory>& history, int out_h,
                                          int out_w, float threshold);

// Pointwise (1 + attention) scaling of every channel. Dimensions must match.
FeatureMap apply_attention(const FeatureMap& map, const AttentionMap& attn);

}  // namespace svreid
