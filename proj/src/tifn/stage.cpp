// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tifn/stage.hpp"

#include <algorithm>

#include "svreid/core/ops.hpp"
#include "svreid/providers/candidates.hpp"

namespace svreid {

std::vector<Detection> fuse_and_nms(const std::array<std::vector<Detection>, 3>& groups,
                                    float iou_threshold) {
  std::vector<Detection> all;
  all.reserve(groups[0].size() + groups[1].size() + groups[2].size());
  for (const auto& g : groups) {
    all.insert(all.end(), g.begin(), g.end());
  }
  return nms(std::move(all), iou_threshold);
}

TifnStage::TifnStage(const PipelineConfig& cfg, int frame_size)
    : cfg_(cfg), frame_size_(frame_size) {
  for (auto& level : levels_) {
    level.pool.capacity = cfg_.pool_capacity;
    level.global.capacity = cfg_.global_capacity;
  }
}

bool TifnStage::ls_enabled() const {
  switch (cfg_.fusion) {
    case FusionMode::ls:
    case FusionMode::ls_ll:
    case FusionMode::ls_gs:
    case FusionMode::full:
      return true;
    default:
      return false;
  }
}

bool TifnStage::ll_enabled() const {
  return cfg_.fusion == FusionMode::ls_ll || cfg_.fusion == FusionMode::full;
}

bool TifnStage::gs_enabled() const {
  return cfg_.fusion == FusionMode::ls_gs || cfg_.fusion == FusionMode::full;
}

void TifnStage::reset_shot() {
  for (auto& level : levels_) {
    level.history.clear();
    level.pool.entries.clear();
  }
}

std::vector<Detection> TifnStage::process_frame(const FrameBundle& frame,
                                                std::vector<FrameAttention>* attention_dump) {
  // Three modulated pyramids, one per attention type.
  std::array<FeatureMap, kPyramidLevels> pyr_ls;
  std::array<FeatureMap, kPyramidLevels> pyr_ll;
  std::array<FeatureMap, kPyramidLevels> pyr_gs;

  for (int level = 0; level < kPyramidLevels; ++level) {
    LevelState& state = levels_[static_cast<std::size_t>(level)];
    const FeatureMap& base = frame.pyramid[static_cast<std::size_t>(level)];

    const std::vector<FrameHistory> history(state.history.begin(), state.history.end());
    CellGrid base_cells;
    const bool need_corr = ls_enabled() || gs_enabled();
    if (need_corr) base_cells = normalized_cells(base);

    AttentionMap attn_ls = ls_enabled()
                               ? local_semantic_attention(history, base_cells)
                               : AttentionMap(base.height(), base.width());
    AttentionMap attn_ll = ll_enabled()
                               ? local_localization_attention(history, base.height(), base.width(),
                                                              cfg_.hanning_threshold)
                               : AttentionMap(base.height(), base.width());
    AttentionMap attn_gs = gs_enabled()
                               ? global_semantic_attention(state.global, base_cells)
                               : AttentionMap(base.height(), base.width());

    if (attention_dump != nullptr) {
      attention_dump->push_back({frame.frame_index, level, attn_ls, attn_ll, attn_gs});
    }

    pyr_ls[static_cast<std::size_t>(level)] = apply_attention(base, attn_ls);
    pyr_ll[static_cast<std::size_t>(level)] = apply_attention(base, attn_ll);
    pyr_gs[static_cast<std::size_t>(level)] = apply_attention(base, attn_gs);
  }

  // Box geometry is always measured on the unmodulated pyramid.
  std::array<std::vector<Detection>, 3> groups = {
      extract_pyramid_group(pyr_ls, frame.frame_index, frame_size_, &frame.pyramid),
      extract_pyramid_group(pyr_ll, frame.frame_index, frame_size_, &frame.pyramid),
      extract_pyramid_group(pyr_gs, frame.frame_index, frame_size_, &frame.pyramid),
  };

  std::vector<Detection> fused = fuse_and_nms(groups, cfg_.nms_iou);

  // Crops of the fused boxes, taken from the unmodulated maps, feed the
  // history and the candidate pool of every level.
  for (int level = 0; level < kPyramidLevels; ++level) {
    LevelState& state = levels_[static_cast<std::size_t>(level)];
    const FeatureMap& base = frame.pyramid[static_cast<std::size_t>(level)];

    FrameHistory entry;
    entry.frame_index = frame.frame_index;
    for (const auto& det : fused) {
      entry.crops.push_back(crop_feature(base, det, level));
    }
    update_candidate_pool(state.pool, entry.crops, cfg_.pool_match_threshold);
    promote_to_global(state.pool, state.global, cfg_.promote_frequency);

    state.history.push_back(std::move(entry));
    while (static_cast<int>(state.history.size()) > cfg_.tau) {
      state.history.pop_front();
    }
  }
  return fused;
}

}  // namespace svreid
