// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <vector>

#include "svreid/core/types.hpp"

namespace svreid {

// Desk-scale detection head: finds local maxima of per-cell activation
// energy and fits a box from energy moments around each peak. The same
// extractor runs on raw pyramids (base candidates) and on
// attention-modulated pyramids (fusion groups).
//
// The firing threshold is mean + 3*sigma of the per-cell energy over the
// whole level, with a small absolute floor; confidence is the peak energy
// clamped to [0,1]. Peaks whose fitted box spans fewer than ~1.5 cells in
// either dimension are dropped (the object belongs to a finer level).
//
// When `measure` is given (same shape), peaks and confidences come from
// `map` but box geometry is fitted on `measure`: attention-modulated maps
// find objects, the unmodulated features measure them, so modulation
// cannot distort box shapes.
std::vector<Detection> extract_candidates(const FeatureMap& map, int level, int frame_index,
                                          int frame_size, const FeatureMap* measure = nullptr);

// Per-level extraction over a full pyramid with cross-level nested-peak
// suppression (no NMS); one candidate group of the detection head.
std::vector<Detection> extract_pyramid_group(const std::array<FeatureMap, 3>& pyramid,
                                             int frame_index, int frame_size,
                                             const std::array<FeatureMap, 3>* measure = nullptr);

// extract_pyramid_group deduplicated with class-wise NMS at `nms_iou`.
std::vector<Detection> extract_pyramid_candidates(
    const std::array<FeatureMap, 3>& pyramid, int frame_index, int frame_size, float nms_iou);

}  // namespace svreid
