// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "svreid/core/errors.hpp"

namespace svreid {

// Dense activation grid, channel-major storage (channel, then row, then
// column). All values finite.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width);

  // Validates length and finiteness.
  static FeatureMap from_values(int channels, int height, int width, std::vector<float> values);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool empty() const noexcept { return values_.empty(); }

  float at(int c, int y, int x) const { return values_[plane_offset(c) + static_cast<std::size_t>(y) * width_ + x]; }
  float& at(int c, int y, int x) { return values_[plane_offset(c) + static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const float> plane(int c) const {
    return {values_.data() + plane_offset(c), static_cast<std::size_t>(height_) * width_};
  }
  std::span<float> plane(int c) {
    return {values_.data() + plane_offset(c), static_cast<std::size_t>(height_) * width_};
  }

  const std::vector<float>& values() const noexcept { return values_; }
  std::vector<float>& values() noexcept { return values_; }

  bool all_finite() const;

 private:
  std::size_t plane_offset(int c) const { return static_cast<std::size_t>(c) * height_ * width_; }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> values_;
};

// Plain real grid, row-major. Attention maps and response maps are Grids;
// attention values additionally stay in [0,1] by construction.
struct Grid {
  int height = 0;
  int width = 0;
  std::vector<float> values;

  Grid() = default;
  Grid(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, 0.0f) {}

  float at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
  float& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const noexcept { return values.size(); }
};

// Axis-aligned box, center/width/height in continuous pixel coordinates.
struct BoundingBox {
  float cx = 0.0f;
  float cy = 0.0f;
  float w = 0.0f;
  float h = 0.0f;

  float x1() const noexcept { return cx - 0.5f * w; }
  float y1() const noexcept { return cy - 0.5f * h; }
  float x2() const noexcept { return cx + 0.5f * w; }
  float y2() const noexcept { return cy + 0.5f * h; }
  float area() const noexcept { return w * h; }
};

// Throws ConfigError when w or h is not strictly positive.
void validate_box(const BoundingBox& box, const std::string& context);

struct Detection {
  BoundingBox box;
  float confidence = 0.0f;  // in [0,1]
  int class_id = 0;
  int frame_index = 0;
};

// Center/size of a crop in feature-map (level) coordinates.
struct SpatialInfo {
  float center_x = 0.0f;
  float center_y = 0.0f;
  float w = 0.0f;
  float h = 0.0f;
  int frame_index = 0;
  float confidence = 0.0f;
  int scale_level = 0;  // 0, 1 or 2
};

// A cropped feature region together with where it came from.
struct FeatureCrop {
  FeatureMap data;
  SpatialInfo spatial;
};

enum class TrackState { tentative, confirmed, deleted };

struct TrackletEntry {
  int frame_index = 0;
  BoundingBox box;
  std::vector<float> feature;       // appearance vector, unit norm
  std::vector<float> face_feature;  // empty when no face was observed
  float confidence = 0.0f;
};

// Per-shot identity track. Entries are strictly increasing in frame index.
struct Tracklet {
  int track_id = 0;
  int shot_id = 0;
  std::vector<TrackletEntry> entries;
  TrackState state = TrackState::tentative;
  int class_id = 0;
};

// Cross-shot grouped identity.
struct Trajectory {
  int object_id = 0;
  std::vector<Tracklet> tracklets;
  std::vector<float> feature;  // averaged, unit norm
};

}  // namespace svreid
