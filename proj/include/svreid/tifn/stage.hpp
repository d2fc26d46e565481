// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <array>
#include <deque>
#include <vector>

#include "svreid/core/config.hpp"
#include "svreid/providers/bundle.hpp"
#include "svreid/tifn/attention.hpp"
#include "svreid/tifn/memory.hpp"

namespace svreid {

// Union of the three candidate groups followed by class-wise greedy NMS.
std::vector<Detection> fuse_and_nms(const std::array<std::vector<Detection>, 3>& groups,
                                    float iou_threshold);

// Attention grids of one frame at one level, kept for optional dumping.
struct FrameAttention {
  int frame_index = 0;
  int level = 0;
  AttentionMap ls;
  AttentionMap ll;
  AttentionMap gs;
};

// Per-video detection fusion: maintains the crop history, candidate pool
// and global set per pyramid level, modulates the feature maps with the
// three attention types and fuses the resulting candidate groups.
//
// History and pools reset at shot boundaries; the global set persists for
// the whole video.
class TifnStage {
 public:
  explicit TifnStage(const PipelineConfig& cfg, int frame_size);

  // Clears shot-local state (history, candidate pool).
  void reset_shot();

  std::vector<Detection> process_frame(const FrameBundle& frame,
                                       std::vector<FrameAttention>* attention_dump = nullptr);

 private:
  struct LevelState {
    std::deque<FrameHistory> history;
    CandidatePool pool;
    GlobalSet global;
  };

  bool ls_enabled() const;
  bool ll_enabled() const;
  bool gs_enabled() const;

  PipelineConfig cfg_;
  int frame_size_;
  std::array<LevelState, kPyramidLevels> levels_;
};

}  // namespace svreid
