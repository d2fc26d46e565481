// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/core/ops.hpp"

#include <algorithm>
#include <cmath>

#include "svreid/core/cell_grid.hpp"
#include "svreid/kernels/kernels.hpp"

namespace svreid {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix1 = std::max<double>(a.x1(), b.x1());
  const double iy1 = std::max<double>(a.y1(), b.y1());
  const double ix2 = std::min<double>(a.x2(), b.x2());
  const double iy2 = std::min<double>(a.y2(), b.y2());
  const double iw = std::max(0.0, ix2 - ix1);
  const double ih = std::max(0.0, iy2 - iy1);
  const double inter = iw * ih;
  if (inter <= 0.0) return 0.0;
  const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
  return inter / uni;
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine_similarity: vector lengths differ (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
  }
  const double nu = std::sqrt(static_cast<double>(kernels::sumsq(u.data(), u.size())));
  const double nv = std::sqrt(static_cast<double>(kernels::sumsq(v.data(), v.size())));
  if (nu == 0.0 || nv == 0.0) {
    throw DegenerateInputError("cosine_similarity: zero-norm input");
  }
  const double d = static_cast<double>(kernels::dot(u.data(), v.data(), u.size()));
  return std::clamp(d / (nu * nv), -1.0, 1.0);
}

FeatureMap l2_normalize_cells(const FeatureMap& map) {
  CellGrid cells = normalized_cells(map);
  return to_feature_map(cells);
}

void normalize_vector(std::vector<float>& v) {
  const double n = std::sqrt(static_cast<double>(kernels::sumsq(v.data(), v.size())));
  if (n == 0.0) {
    throw DegenerateInputError("normalize_vector: zero-norm input");
  }
  const float inv = static_cast<float>(1.0 / n);
  kernels::scale_inplace(v.data(), v.size(), inv);
}

std::vector<Detection> nms(std::vector<Detection> dets, float iou_threshold) {
  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (std::size_t idx : order) {
    const Detection& cand = dets[idx];
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.class_id == cand.class_id && iou(k.box, cand.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

}  // namespace svreid
