// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/core/cell_grid.hpp"

#include <cmath>

#include "svreid/kernels/kernels.hpp"

namespace svreid {

CellGrid to_cells(const FeatureMap& map) {
  CellGrid g;
  g.height = map.height();
  g.width = map.width();
  g.channels = map.channels();
  g.data.resize(static_cast<std::size_t>(g.height) * g.width * g.channels);
  const int hw = g.height * g.width;
  for (int c = 0; c < g.channels; ++c) {
    const float* src = map.values().data() + static_cast<std::size_t>(c) * hw;
    float* dst = g.data.data() + c;
    for (int i = 0; i < hw; ++i) {
      dst[static_cast<std::size_t>(i) * g.channels] = src[i];
    }
  }
  return g;
}

FeatureMap to_feature_map(const CellGrid& cells) {
  FeatureMap m(cells.channels, cells.height, cells.width);
  const int hw = cells.height * cells.width;
  for (int c = 0; c < cells.channels; ++c) {
    float* dst = m.values().data() + static_cast<std::size_t>(c) * hw;
    const float* src = cells.data.data() + c;
    for (int i = 0; i < hw; ++i) {
      dst[i] = src[static_cast<std::size_t>(i) * cells.channels];
    }
  }
  return m;
}

void normalize_cells_inplace(CellGrid& cells) {
  for (int i = 0; i < cells.cell_count(); ++i) {
    float* cell = cells.data.data() + static_cast<std::size_t>(i) * cells.channels;
    const float sq = kernels::sumsq(cell, cells.channels);
    if (sq > 0.0f) {
      kernels::scale_inplace(cell, cells.channels, 1.0f / std::sqrt(sq));
    }
  }
}

CellGrid normalized_cells(const FeatureMap& map) {
  CellGrid g = to_cells(map);
  normalize_cells_inplace(g);
  return g;
}

std::vector<float> average_pool(const FeatureMap& map) {
  std::vector<float> out(static_cast<std::size_t>(map.channels()), 0.0f);
  const std::size_t hw = static_cast<std::size_t>(map.height()) * map.width();
  if (hw == 0) return out;
  for (int c = 0; c < map.channels(); ++c) {
    double acc = 0.0;
    for (float v : map.plane(c)) acc += v;
    out[c] = static_cast<float>(acc / static_cast<double>(hw));
  }
  return out;
}

std::vector<float> pooled_unit_vector(const FeatureMap& map) {
  std::vector<float> v = average_pool(map);
  const float sq = kernels::sumsq(v.data(), v.size());
  if (sq > 0.0f) {
    kernels::scale_inplace(v.data(), v.size(), 1.0f / std::sqrt(sq));
  }
  return v;
}

}  // namespace svreid
