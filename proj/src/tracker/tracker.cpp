// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tracker/tracker.hpp"

#include <algorithm>

#include "svreid/core/cell_grid.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/tracker/assignment.hpp"
#include "svreid/tracker/cpsn.hpp"

namespace svreid {

ShotTracker::ShotTracker(const PipelineConfig& cfg, int shot_id, int frame_begin, int frame_end,
                         TrackIdAllocator& ids)
    : cfg_(cfg), shot_id_(shot_id), frame_begin_(frame_begin), frame_end_(frame_end), ids_(&ids) {}

void ShotTracker::record_entry(Track& track, const Detection& det, const MultiScaleCrop& crop,
                               const std::vector<float>& face) {
  if (track.state != TrackState::confirmed) return;
  TrackletEntry entry;
  entry.frame_index = det.frame_index;
  // Report the filtered box, not the raw measurement.
  entry.box = measurement_to_box(track.kalman.mean.head<4>());
  entry.confidence = det.confidence;
  entry.feature = crop.empty() ? std::vector<float>{} : pooled_unit_vector(crop[0].data);
  entry.face_feature = face;
  track.entries.push_back(std::move(entry));
}

void ShotTracker::start_track(const Detection& det, const MultiScaleCrop& crop,
                              const std::vector<float>& face, StepResult& result) {
  Track track;
  track.track_id = ids_->next();
  track.kalman = kalman_initiate(det.box);
  track.gallery.push_back(crop);
  track.class_id = det.class_id;
  if (cfg_.n_init <= 1) {
    track.state = TrackState::confirmed;
    record_entry(track, det, crop, face);
  }
  result.new_track_ids.push_back(track.track_id);
  tracks_.push_back(std::move(track));
}

void ShotTracker::retire(Track& track) {
  track.state = TrackState::deleted;
  if (!track.entries.empty()) {
    Tracklet t;
    t.track_id = track.track_id;
    t.shot_id = shot_id_;
    t.state = TrackState::deleted;
    t.class_id = track.class_id;
    t.entries = std::move(track.entries);
    finished_.push_back(std::move(t));
  }
}

StepResult ShotTracker::step(int frame_index, const std::vector<Detection>& detections,
                             const std::vector<MultiScaleCrop>& crops,
                             const std::vector<std::vector<float>>& face_features) {
  if (frame_index < frame_begin_ || frame_index >= frame_end_) {
    throw ContractError("ShotTracker: frame " + std::to_string(frame_index) +
                        " outside shot range [" + std::to_string(frame_begin_) + "," +
                        std::to_string(frame_end_) + ")");
  }
  if (frame_index <= last_frame_) {
    throw ContractError("ShotTracker: frames must advance monotonically");
  }
  last_frame_ = frame_index;
  if (detections.size() != crops.size()) {
    throw DimensionError("ShotTracker: detections and crops differ in count");
  }
  for (const auto& det : detections) {
    if (det.frame_index != frame_index) {
      throw ContractError("ShotTracker: detection from a different frame");
    }
  }

  for (auto& track : tracks_) {
    if (track.state != TrackState::deleted) {
      track.kalman = kalman_predict(track.kalman);
    }
  }

  std::vector<int> live;
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (tracks_[i].state != TrackState::deleted) live.push_back(static_cast<int>(i));
  }

  StepResult result;
  const int n_det = static_cast<int>(detections.size());
  const int n_trk = static_cast<int>(live.size());
  std::vector<int> assignment(static_cast<std::size_t>(n_det), -1);

  if (n_det > 0 && n_trk > 0) {
    CostMatrix cost(n_det, n_trk);
    for (int i = 0; i < n_det; ++i) {
      for (int j = 0; j < n_trk; ++j) {
        Track& track = tracks_[static_cast<std::size_t>(live[static_cast<std::size_t>(j)])];
        if (gating_distance(track.kalman, detections[static_cast<std::size_t>(i)].box) >
            cfg_.gate_threshold) {
          cost.at(i, j) = kDisallowedCost;
          continue;
        }
        double best = -1.0;
        for (const auto& stored : track.gallery) {
          best = std::max(best, cpsn_similarity(crops[static_cast<std::size_t>(i)], stored,
                                                cfg_.topk));
        }
        cost.at(i, j) = 1.0 - best;
      }
    }
    assignment = hungarian_assign(cost);
  }

  std::vector<bool> track_matched(static_cast<std::size_t>(n_trk), false);
  for (int i = 0; i < n_det; ++i) {
    const int j = assignment[static_cast<std::size_t>(i)];
    const auto& det = detections[static_cast<std::size_t>(i)];
    const auto& crop = crops[static_cast<std::size_t>(i)];
    const std::vector<float> face =
        i < static_cast<int>(face_features.size()) ? face_features[static_cast<std::size_t>(i)]
                                                   : std::vector<float>{};
    if (j < 0) {
      start_track(det, crop, face, result);
      result.unmatched_detections.push_back(i);
      continue;
    }
    track_matched[static_cast<std::size_t>(j)] = true;
    Track& track = tracks_[static_cast<std::size_t>(live[static_cast<std::size_t>(j)])];
    track.kalman = kalman_update(track.kalman, det.box);
    track.hits += 1;
    track.age_since_update = 0;
    track.gallery.push_back(crop);
    while (static_cast<int>(track.gallery.size()) > cfg_.gallery_budget) {
      track.gallery.pop_front();
    }
    if (track.state == TrackState::tentative && track.hits >= cfg_.n_init) {
      track.state = TrackState::confirmed;
    }
    record_entry(track, det, crop, face);
    result.matches.emplace_back(i, track.track_id);
  }

  for (int j = 0; j < n_trk; ++j) {
    if (track_matched[static_cast<std::size_t>(j)]) continue;
    Track& track = tracks_[static_cast<std::size_t>(live[static_cast<std::size_t>(j)])];
    track.age_since_update += 1;
    if (track.state == TrackState::tentative) {
      retire(track);  // a miss breaks the consecutive-hit requirement
    } else if (track.age_since_update > cfg_.max_age) {
      retire(track);
    }
  }
  return result;
}

std::vector<Tracklet> ShotTracker::finish() {
  for (auto& track : tracks_) {
    if (track.state != TrackState::deleted) {
      retire(track);
    }
  }
  std::vector<Tracklet> out = std::move(finished_);
  finished_.clear();
  std::sort(out.begin(), out.end(),
            [](const Tracklet& a, const Tracklet& b) { return a.track_id < b.track_id; });
  return out;
}

}  // namespace svreid
