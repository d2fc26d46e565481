// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tifn/attention.hpp"

#include <algorithm>
#include <cmath>

#include "svreid/core/errors.hpp"
#include "svreid/kernels/kernels.hpp"
#include "svreid/providers/bundle.hpp"

namespace svreid {

FeatureCrop crop_feature(const FeatureMap& map, const Detection& det, int scale_level) {
  const float stride = static_cast<float>(kPyramidStrides[static_cast<std::size_t>(scale_level)]);
  const int h = map.height();
  const int w = map.width();

  const float lx1 = det.box.x1() / stride;
  const float ly1 = det.box.y1() / stride;
  const float lx2 = det.box.x2() / stride;
  const float ly2 = det.box.y2() / stride;
  if (lx2 <= 0.0f || ly2 <= 0.0f || lx1 >= static_cast<float>(w) || ly1 >= static_cast<float>(h)) {
    throw DegenerateInputError("crop_feature: box does not intersect the feature map");
  }

  // Outward rounding, then clamping; at least one cell survives because the
  // box intersects the map.
  int x0 = std::clamp(static_cast<int>(std::floor(lx1)), 0, w - 1);
  int y0 = std::clamp(static_cast<int>(std::floor(ly1)), 0, h - 1);
  int x1 = std::clamp(static_cast<int>(std::ceil(lx2)), x0 + 1, w);
  int y1 = std::clamp(static_cast<int>(std::ceil(ly2)), y0 + 1, h);

  FeatureCrop crop;
  crop.data = FeatureMap(map.channels(), y1 - y0, x1 - x0);
  for (int c = 0; c < map.channels(); ++c) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        crop.data.at(c, y - y0, x - x0) = map.at(c, y, x);
      }
    }
  }
  crop.spatial.center_x = det.box.cx / stride;
  crop.spatial.center_y = det.box.cy / stride;
  crop.spatial.w = det.box.w / stride;
  crop.spatial.h = det.box.h / stride;
  crop.spatial.frame_index = det.frame_index;
  crop.spatial.confidence = det.confidence;
  crop.spatial.scale_level = scale_level;
  return crop;
}

Grid xcorr_prenormalized(const FeatureCrop& crop, const CellGrid& map_cells) {
  const FeatureMap& cm = crop.data;
  if (cm.channels() != map_cells.channels) {
    throw DimensionError("xcorr: channel counts differ");
  }
  const int hc = cm.height();
  const int wc = cm.width();
  const int hm = map_cells.height;
  const int wm = map_cells.width;
  if (hc > hm || wc > wm) {
    throw DimensionError("xcorr: crop larger than map");
  }

  const CellGrid crop_cells = normalized_cells(cm);
  const int channels = map_cells.channels;
  const std::size_t row_len = static_cast<std::size_t>(wc) * channels;

  Grid out(hm, wm);
  const int valid_h = hm - hc + 1;
  const int valid_w = wm - wc + 1;
  const int off_y = (hc - 1) / 2;
  const int off_x = (wc - 1) / 2;
  const float inv_cells = 1.0f / static_cast<float>(hc * wc);

  for (int y = 0; y < valid_h; ++y) {
    for (int x = 0; x < valid_w; ++x) {
      // Crop rows are contiguous runs of wc*channels floats, as are the map
      // row segments they slide over.
      double acc = 0.0;
      for (int i = 0; i < hc; ++i) {
        const float* crow = crop_cells.data.data() +
                            static_cast<std::size_t>(i) * wc * channels;
        const float* mrow = map_cells.data.data() +
                            (static_cast<std::size_t>(y + i) * wm + x) * channels;
        acc += kernels::dot(crow, mrow, row_len);
      }
      out.at(y + off_y, x + off_x) =
          std::clamp(static_cast<float>(acc) * inv_cells, -1.0f, 1.0f);
    }
  }
  return out;
}

Grid xcorr(const FeatureCrop& crop, const FeatureMap& map) {
  return xcorr_prenormalized(crop, normalized_cells(map));
}

AttentionMap local_semantic_attention(const std::vector<FrameHistory>& history,
                                      const CellGrid& current_cells) {
  AttentionMap out(current_cells.height, current_cells.width);
  // Stored frames with no crops still count toward the average: the
  // per-frame divisor is how many frames are stored, not how many fired.
  const int frames_present = static_cast<int>(history.size());
  for (const auto& frame : history) {
    if (frame.crops.empty()) continue;
    Grid frame_sum(current_cells.height, current_cells.width);
    for (const auto& crop : frame.crops) {
      Grid g = xcorr_prenormalized(crop, current_cells);
      kernels::add_inplace(frame_sum.values.data(), g.values.data(), g.values.size());
    }
    kernels::clip01_inplace(frame_sum.values.data(), frame_sum.values.size());
    kernels::add_inplace(out.values.data(), frame_sum.values.data(), out.values.size());
  }
  if (frames_present > 1) {
    kernels::scale_inplace(out.values.data(), out.values.size(),
                           1.0f / static_cast<float>(frames_present));
  }
  return out;
}

AttentionMap local_semantic_attention(const std::vector<FrameHistory>& history,
                                      const FeatureMap& current) {
  return local_semantic_attention(history, normalized_cells(current));
}

AttentionMap hanning_window_2d(const SpatialInfo& spat, int out_h, int out_w, float threshold) {
  AttentionMap out(out_h, out_w);
  const int len_y = std::max(1, static_cast<int>(std::lround(spat.h)));
  const int len_x = std::max(1, static_cast<int>(std::lround(spat.w)));

  // Continuous Hann profile sampled at cell centers; a length-1 window is a
  // single unit cell.
  auto profile = [](float d, int len) -> float {
    if (len == 1) {
      return (d >= -0.5f && d < 0.5f) ? 1.0f : -1.0f;
    }
    const float half = 0.5f * static_cast<float>(len - 1);
    if (d < -half || d > half) return -1.0f;
    return 0.5f * (1.0f + std::cos(2.0f * static_cast<float>(M_PI) * d /
                                   static_cast<float>(len - 1)));
  };

  const int y_lo = std::max(0, static_cast<int>(std::floor(spat.center_y - 0.5f * len_y - 1.0f)));
  const int y_hi = std::min(out_h - 1, static_cast<int>(std::ceil(spat.center_y + 0.5f * len_y + 1.0f)));
  const int x_lo = std::max(0, static_cast<int>(std::floor(spat.center_x - 0.5f * len_x - 1.0f)));
  const int x_hi = std::min(out_w - 1, static_cast<int>(std::ceil(spat.center_x + 0.5f * len_x + 1.0f)));

  for (int y = y_lo; y <= y_hi; ++y) {
    const float vy = profile(static_cast<float>(y) + 0.5f - spat.center_y, len_y);
    if (vy < 0.0f) continue;
    for (int x = x_lo; x <= x_hi; ++x) {
      const float vx = profile(static_cast<float>(x) + 0.5f - spat.center_x, len_x);
      if (vx < 0.0f) continue;
      const float v = vy * vx;
      out.at(y, x) = v < threshold ? 0.0f : v;
    }
  }
  return out;
}

AttentionMap local_localization_attention(const std::vector<FrameHistory>& history, int out_h,
                                          int out_w, float threshold) {
  AttentionMap out(out_h, out_w);
  const int frames_present = static_cast<int>(history.size());
  for (const auto& frame : history) {
    for (const auto& crop : frame.crops) {
      AttentionMap w = hanning_window_2d(crop.spatial, out_h, out_w, threshold);
      kernels::add_inplace(out.values.data(), w.values.data(), out.values.size());
    }
  }
  if (frames_present > 1) {
    kernels::scale_inplace(out.values.data(), out.values.size(),
                           1.0f / static_cast<float>(frames_present));
  }
  kernels::clip01_inplace(out.values.data(), out.values.size());
  return out;
}

FeatureMap apply_attention(const FeatureMap& map, const AttentionMap& attn) {
  if (map.height() != attn.height || map.width() != attn.width) {
    throw DimensionError("apply_attention: spatial dimensions differ");
  }
  FeatureMap out = map;
  for (int c = 0; c < out.channels(); ++c) {
    auto plane = out.plane(c);
    kernels::modulate_inplace(plane.data(), attn.values.data(), plane.size());
  }
  return out;
}

}  // namespace svreid
