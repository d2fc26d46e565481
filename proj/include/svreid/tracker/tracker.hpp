// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <deque>
#include <memory>
#include <vector>

#include "svreid/core/config.hpp"
#include "svreid/core/types.hpp"
#include "svreid/tracker/kalman.hpp"

namespace svreid {

// Multi-scale crops of one detection (the CPSN scale set).
using MultiScaleCrop = std::vector<FeatureCrop>;

struct Track {
  int track_id = 0;
  KalmanState kalman;
  std::deque<MultiScaleCrop> gallery;  // bounded by gallery_budget
  int hits = 1;
  int age_since_update = 0;
  TrackState state = TrackState::tentative;
  int class_id = 0;
  std::vector<TrackletEntry> entries;  // recorded while confirmed
};

struct StepResult {
  // detection index -> track id for matched detections this frame.
  std::vector<std::pair<int, int>> matches;
  std::vector<int> unmatched_detections;
  std::vector<int> new_track_ids;
};

// Allocates track ids video-wide so no id is reused across shots.
class TrackIdAllocator {
 public:
  int next() { return next_id_++; }

 private:
  int next_id_ = 1;
};

// Per-shot gated-Hungarian tracker with CPSN appearance affinity:
// cost(i,j) = 1 - max over track j's gallery of cpsn_similarity, forced to
// the disallowed sentinel where the Mahalanobis gate fails. Matched tracks
// are Kalman-updated and their galleries appended; unmatched detections
// spawn tentative tracks; tentative tracks confirm after n_init
// consecutive hits and die on their first miss; confirmed tracks die after
// max_age frames without an update.
class ShotTracker {
 public:
  ShotTracker(const PipelineConfig& cfg, int shot_id, int frame_begin, int frame_end,
              TrackIdAllocator& ids);

  // Detections and their crops must come from frame `frame_index`, which
  // has to lie inside this shot's range and advance monotonically.
  StepResult step(int frame_index, const std::vector<Detection>& detections,
                  const std::vector<MultiScaleCrop>& crops,
                  const std::vector<std::vector<float>>& face_features = {});

  // Tracklets of every track that ever confirmed, in track-id order.
  std::vector<Tracklet> finish();

  const std::vector<Track>& tracks() const { return tracks_; }
  int shot_id() const { return shot_id_; }

 private:
  PipelineConfig cfg_;
  int shot_id_;
  int frame_begin_;
  int frame_end_;
  int last_frame_ = -1;
  TrackIdAllocator* ids_;
  std::vector<Track> tracks_;
  std::vector<Tracklet> finished_;

  void start_track(const Detection& det, const MultiScaleCrop& crop,
                   const std::vector<float>& face, StepResult& result);
  void record_entry(Track& track, const Detection& det, const MultiScaleCrop& crop,
                    const std::vector<float>& face);
  void retire(Track& track);
};

}  // namespace svreid
