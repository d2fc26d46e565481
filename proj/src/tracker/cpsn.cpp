// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tracker/cpsn.hpp"

#include <algorithm>
#include <cmath>

#include "svreid/core/cell_grid.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/kernels/kernels.hpp"

namespace svreid {

Grid pointwise_response(const FeatureCrop& d, const FeatureCrop& t) {
  if (d.data.channels() != t.data.channels()) {
    throw DimensionError("pointwise_response: channel counts differ");
  }
  const CellGrid dc = normalized_cells(d.data);
  const CellGrid tc = normalized_cells(t.data);
  const int nd = dc.cell_count();
  const int nt = tc.cell_count();
  const int channels = dc.channels;

  Grid out(nd, nt);
  for (int i = 0; i < nd; ++i) {
    const float* di = dc.data.data() + static_cast<std::size_t>(i) * channels;
    for (int j = 0; j < nt; ++j) {
      const float* tj = tc.data.data() + static_cast<std::size_t>(j) * channels;
      out.at(i, j) = std::clamp(kernels::dot(di, tj, static_cast<std::size_t>(channels)),
                                -1.0f, 1.0f);
    }
  }
  return out;
}

double topk_mean(const Grid& response, int k) {
  if (response.values.empty()) {
    throw DegenerateInputError("topk_mean: empty matrix");
  }
  if (k < 1) {
    throw ConfigError("topk_mean: k must be >= 1");
  }
  const int n = std::min<int>(k, static_cast<int>(response.values.size()));
  std::vector<float> copy = response.values;
  std::nth_element(copy.begin(), copy.begin() + (n - 1), copy.end(), std::greater<float>());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += copy[static_cast<std::size_t>(i)];
  return acc / static_cast<double>(n);
}

FeatureCrop project_channels(const FeatureCrop& crop, int target_channels) {
  const int c_in = crop.data.channels();
  if (target_channels < 1 || target_channels > c_in) {
    throw DimensionError("project_channels: bad target channel count");
  }
  if (target_channels == c_in) return crop;

  FeatureCrop out;
  out.spatial = crop.spatial;
  out.data = FeatureMap(target_channels, crop.data.height(), crop.data.width());
  // Contiguous channel groups of near-equal size, averaged.
  for (int g = 0; g < target_channels; ++g) {
    const int begin = static_cast<int>(static_cast<long long>(g) * c_in / target_channels);
    const int end = static_cast<int>(static_cast<long long>(g + 1) * c_in / target_channels);
    const float inv = 1.0f / static_cast<float>(end - begin);
    for (int y = 0; y < out.data.height(); ++y) {
      for (int x = 0; x < out.data.width(); ++x) {
        float acc = 0.0f;
        for (int c = begin; c < end; ++c) acc += crop.data.at(c, y, x);
        out.data.at(g, y, x) = acc * inv;
      }
    }
  }
  return out;
}

namespace {

int auto_topk(const FeatureCrop& a, const FeatureCrop& b) {
  const int cells = std::min(a.data.height() * a.data.width(), b.data.height() * b.data.width());
  return std::max(1, static_cast<int>(std::ceil(0.1 * cells)));
}

}  // namespace

double cpsn_similarity(const std::vector<FeatureCrop>& d_scales,
                       const std::vector<FeatureCrop>& t_scales, int k) {
  if (d_scales.empty() || d_scales.size() != t_scales.size()) {
    throw DimensionError("cpsn_similarity: scale counts must match and be >= 1");
  }
  const int n = static_cast<int>(d_scales.size());
  double acc = 0.0;
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      const FeatureCrop& d = d_scales[static_cast<std::size_t>(m)];
      const FeatureCrop& t = t_scales[static_cast<std::size_t>(j)];
      const int common = std::min(d.data.channels(), t.data.channels());
      const FeatureCrop dp = project_channels(d, common);
      const FeatureCrop tp = project_channels(t, common);
      const Grid response = pointwise_response(dp, tp);
      const int kk = k > 0 ? k : auto_topk(d, t);
      acc += topk_mean(response, kk);
    }
  }
  return acc / static_cast<double>(n * n);
}

}  // namespace svreid
