// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <span>
#include <vector>

#include "svreid/core/types.hpp"

namespace svreid {

// Cell-major (height, width, channel) view of a FeatureMap. The channel
// vector of each spatial cell is contiguous, which is what the dot-product
// kernels want for correlation and pointwise-response work.
struct CellGrid {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;  // height*width*channels

  std::span<const float> cell(int y, int x) const {
    return {data.data() + (static_cast<std::size_t>(y) * width + x) * channels,
            static_cast<std::size_t>(channels)};
  }
  std::span<float> cell(int y, int x) {
    return {data.data() + (static_cast<std::size_t>(y) * width + x) * channels,
            static_cast<std::size_t>(channels)};
  }
  int cell_count() const noexcept { return height * width; }
};

CellGrid to_cells(const FeatureMap& map);
FeatureMap to_feature_map(const CellGrid& cells);

// Scales each cell's channel vector to unit norm; zero-norm cells stay zero.
void normalize_cells_inplace(CellGrid& cells);

// to_cells + normalize in one pass.
CellGrid normalized_cells(const FeatureMap& map);

// Mean over all cells of the channel vectors (spatial average pooling).
std::vector<float> average_pool(const FeatureMap& map);

// average_pool followed by unit normalization; all-zero maps stay zero.
std::vector<float> pooled_unit_vector(const FeatureMap& map);

}  // namespace svreid
