// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <string>
#include <vector>

#include "svreid/providers/bundle.hpp"

namespace svreid {

// Frame-bundle binary format: little-endian, magic "SVRB", u32 version=1,
// u32 n_frames, C, H0, W0; per frame three float32 grids (levels 0..2,
// coarser extents derived by ceil-halving H0/W0), u32 n_candidates,
// candidates as 6 x float32 (cx, cy, w, h, conf, class), then the 48-float
// histogram. Round-trips losslessly.
void save_frames(const std::string& path, const std::vector<FrameBundle>& frames);
std::vector<FrameBundle> load_frames(const std::string& path);  // throws FormatError

// CSV `frame,id,cx,cy,w,h,conf,class,visible`, shared by ground truth and
// detections (detections use id -1, visible 1).
void save_ground_truth_csv(const std::string& path, const GroundTruth& gt);
GroundTruth load_ground_truth_csv(const std::string& path);

void save_detections_csv(const std::string& path, const std::vector<Detection>& dets);
std::vector<Detection> load_detections_csv(const std::string& path);

// MOT-style track CSV `frame,track_id,cx,cy,w,h,conf,class,shot_id`.
struct TrackRecord {
  int frame_index = 0;
  int track_id = 0;
  BoundingBox box;
  float confidence = 0.0f;
  int class_id = 0;
  int shot_id = 0;
};

void save_tracks_csv(const std::string& path, const std::vector<TrackRecord>& records);
std::vector<TrackRecord> load_tracks_csv(const std::string& path);

// Writes via a temp file in the same directory, then renames into place.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace svreid
