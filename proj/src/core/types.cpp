// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/core/types.hpp"

#include <cmath>

namespace svreid {

FeatureMap::FeatureMap(int channels, int height, int width)
    : channels_(channels),
      height_(height),
      width_(width),
      values_(static_cast<std::size_t>(channels) * height * width, 0.0f) {
  if (channels < 0 || height < 0 || width < 0) {
    throw DimensionError("FeatureMap dimensions must be non-negative");
  }
}

FeatureMap FeatureMap::from_values(int channels, int height, int width, std::vector<float> values) {
  if (channels < 0 || height < 0 || width < 0) {
    throw DimensionError("FeatureMap dimensions must be non-negative");
  }
  const std::size_t expected = static_cast<std::size_t>(channels) * height * width;
  if (values.size() != expected) {
    throw DimensionError("FeatureMap value count " + std::to_string(values.size()) +
                         " does not match channels*height*width = " + std::to_string(expected));
  }
  FeatureMap m;
  m.channels_ = channels;
  m.height_ = height;
  m.width_ = width;
  m.values_ = std::move(values);
  if (!m.all_finite()) {
    throw DegenerateInputError("FeatureMap values must be finite");
  }
  return m;
}

bool FeatureMap::all_finite() const {
  for (float v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void validate_box(const BoundingBox& box, const std::string& context) {
  if (!(box.w > 0.0f) || !(box.h > 0.0f) || !std::isfinite(box.cx) || !std::isfinite(box.cy) ||
      !std::isfinite(box.w) || !std::isfinite(box.h)) {
    throw ConfigError(context + ": bounding box must have positive finite width and height");
  }
}

}  // namespace svreid
