// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <vector>

#include "svreid/core/types.hpp"

namespace svreid {

// Pointwise response map: entry (i, j) is the cosine of detection cell i
// and tracklet cell j (cells unit-normalized, zero cells contribute 0).
// Shape H1*W1 x H2*W2; entries in [-1,1].
Grid pointwise_response(const FeatureCrop& d, const FeatureCrop& t);

// Mean of the k largest entries; when the matrix has fewer than k entries,
// the mean of all. Throws DegenerateInputError for an empty matrix.
double topk_mean(const Grid& response, int k);

// Reduces the channel count by averaging contiguous channel groups.
// target_channels must not exceed the crop's channel count.
FeatureCrop project_channels(const FeatureCrop& crop, int target_channels);

// Eq-style multi-scale similarity: (1/N^2) * sum over scale pairs of
// topk_mean(pointwise_response(d_m, t_n), k). Crops of unequal channel
// count within a pair are projected down to the smaller count. k = 0
// selects ceil(10% of the smaller crop's cell count), at least 1.
double cpsn_similarity(const std::vector<FeatureCrop>& d_scales,
                       const std::vector<FeatureCrop>& t_scales, int k);

}  // namespace svreid
