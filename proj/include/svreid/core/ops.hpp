// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <span>
#include <vector>

#include "svreid/core/types.hpp"

namespace svreid {

// Intersection-over-union of two boxes. Symmetric, in [0,1].
double iou(const BoundingBox& a, const BoundingBox& b);

// dot(u,v) / (|u||v|), clamped to [-1,1]. Throws DimensionError on length
// mismatch and DegenerateInputError when either vector has zero norm.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

// Each spatial cell's channel vector scaled to unit norm; zero-norm cells
// are left as zero vectors.
FeatureMap l2_normalize_cells(const FeatureMap& map);

// Unit-normalizes a vector in place; throws DegenerateInputError on zero norm.
void normalize_vector(std::vector<float>& v);

// Class-wise greedy non-maximum suppression by descending confidence.
// Boxes of the same class with IoU > iou_threshold against an already kept
// box are dropped. Ties in confidence keep input order.
std::vector<Detection> nms(std::vector<Detection> dets, float iou_threshold);

}  // namespace svreid
