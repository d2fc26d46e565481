// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/providers/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svreid/core/cell_grid.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/core/ops.hpp"
#include "svreid/kernels/kernels.hpp"
#include "svreid/providers/bundle.hpp"

namespace svreid {

namespace {

// Moment window radius per pyramid level.
constexpr int kMomentRadius[3] = {6, 4, 3};
// Cells join a peak's moment region while their energy stays above this
// fraction of the peak.
constexpr float kRegionFloor = 0.3f;
// Box extent as a multiple of the measured energy std. For a Gaussian
// energy profile truncated at 30% of its peak, var_x = 0.3583 sigma^2, so
// a blob spanning 4 sigma needs 4 / sqrt(0.3583) = 6.683.
constexpr float kBoxScale = 6.683f;
// Cell-center sampling adds a uniform quantization variance of 1/12.
constexpr double kQuantVar = 1.0 / 12.0;
// Peaks whose fitted box is smaller than this many cells belong to a finer level.
constexpr float kMinCells = 1.5f;
// A real blob covers a connected patch of cells above the region floor;
// isolated boosted-noise peaks do not.
constexpr int kMinRegionCells = 5;
constexpr float kThresholdFloor = 1e-4f;

struct EnergyStats {
  double mean = 0.0;
  double std_dev = 0.0;
};

Grid energy_grid(const FeatureMap& map) {
  const int h = map.height();
  const int w = map.width();
  CellGrid cells = to_cells(map);
  Grid energy(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto cell = cells.cell(y, x);
      energy.at(y, x) = std::sqrt(kernels::sumsq(cell.data(), cell.size()));
    }
  }
  return energy;
}

// Background statistics via sigma clipping: cells more than 3 sigma above
// the running mean are foreground and must not inflate the noise estimate.
EnergyStats energy_stats(const Grid& energy) {
  EnergyStats stats;
  double cutoff = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 3; ++round) {
    double sum = 0.0;
    double sumsq = 0.0;
    std::size_t n = 0;
    for (float e : energy.values) {
      if (e > cutoff) continue;
      sum += e;
      sumsq += static_cast<double>(e) * e;
      ++n;
    }
    if (n == 0) break;
    stats.mean = sum / static_cast<double>(n);
    stats.std_dev =
        std::sqrt(std::max(0.0, sumsq / static_cast<double>(n) - stats.mean * stats.mean));
    cutoff = stats.mean + 3.0 * stats.std_dev;
  }
  return stats;
}

struct MomentFit {
  bool ok = false;
  double cx = 0.0;
  double cy = 0.0;
  float w_cells = 0.0f;
  float h_cells = 0.0f;
  int region_cells = 0;
};

// Region-grown second moments around (seed_y, seed_x). Cells join while
// connected to the seed and above max(kRegionFloor * peak, noise_floor);
// the relative floor keeps neighbouring blobs out of each other's fit.
MomentFit fit_moments(const Grid& energy, int seed_y, int seed_x, int radius, float noise_floor) {
  const int h = energy.height;
  const int w = energy.width;

  // Walk uphill first: on a measure map the blob peak may sit a cell or
  // two away from the detect-map peak.
  int py = seed_y;
  int px = seed_x;
  for (int step = 0; step < 2; ++step) {
    int best_y = py;
    int best_x = px;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int ny = py + dy;
        const int nx = px + dx;
        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
        if (energy.at(ny, nx) > energy.at(best_y, best_x)) {
          best_y = ny;
          best_x = nx;
        }
      }
    }
    if (best_y == py && best_x == px) break;
    py = best_y;
    px = best_x;
  }

  const float peak = energy.at(py, px);
  const float region_floor = std::max(kRegionFloor * peak, noise_floor);

  std::vector<std::pair<int, int>> stack{{py, px}};
  std::vector<std::pair<int, int>> region;
  const int diameter = 2 * radius + 1;
  std::vector<bool> seen(static_cast<std::size_t>(diameter * diameter), false);
  auto seen_index = [&](int ny, int nx) {
    return static_cast<std::size_t>((ny - py + radius) * diameter + (nx - px + radius));
  };
  seen[seen_index(py, px)] = true;
  while (!stack.empty()) {
    const auto [cy, cx] = stack.back();
    stack.pop_back();
    region.emplace_back(cy, cx);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int ny = cy + dy;
        const int nx = cx + dx;
        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
        if (std::abs(ny - py) > radius || std::abs(nx - px) > radius) continue;
        if (seen[seen_index(ny, nx)]) continue;
        seen[seen_index(ny, nx)] = true;
        if (energy.at(ny, nx) > region_floor) stack.emplace_back(ny, nx);
      }
    }
  }

  double wsum = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double mxx = 0.0;
  double myy = 0.0;
  int region_cells = 0;
  for (const auto& [ny, nx] : region) {
    const float wgt = energy.at(ny, nx) - region_floor;
    if (wgt <= 0.0f) continue;
    ++region_cells;
    const double qx = static_cast<double>(nx) + 0.5;
    const double qy = static_cast<double>(ny) + 0.5;
    wsum += wgt;
    mx += wgt * qx;
    my += wgt * qy;
    mxx += wgt * qx * qx;
    myy += wgt * qy * qy;
  }
  MomentFit fit;
  if (wsum <= 0.0) return fit;
  fit.ok = true;
  fit.region_cells = region_cells;
  fit.cx = mx / wsum;
  fit.cy = my / wsum;
  const double var_x = std::max(0.0, mxx / wsum - fit.cx * fit.cx - kQuantVar);
  const double var_y = std::max(0.0, myy / wsum - fit.cy * fit.cy - kQuantVar);
  fit.w_cells = kBoxScale * static_cast<float>(std::sqrt(var_x));
  fit.h_cells = kBoxScale * static_cast<float>(std::sqrt(var_y));
  return fit;
}

// Drops candidates whose center lies inside a stronger candidate's box:
// secondary maxima on the flank of a blob are re-detections of the same
// object, not separate ones.
std::vector<Detection> suppress_nested_peaks(std::vector<Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });
  std::vector<Detection> kept;
  for (std::size_t idx : order) {
    const Detection& cand = dets[idx];
    bool nested = false;
    for (const Detection& k : kept) {
      if (cand.box.cx >= k.box.x1() && cand.box.cx <= k.box.x2() && cand.box.cy >= k.box.y1() &&
          cand.box.cy <= k.box.y2()) {
        nested = true;
        break;
      }
    }
    if (!nested) kept.push_back(cand);
  }
  return kept;
}

}  // namespace

std::vector<Detection> extract_candidates(const FeatureMap& map, int level, int frame_index,
                                          int frame_size, const FeatureMap* measure) {
  std::vector<Detection> out;
  const int h = map.height();
  const int w = map.width();
  if (h == 0 || w == 0 || map.channels() == 0) return out;
  if (measure != nullptr && (measure->height() != h || measure->width() != w)) {
    throw DimensionError("extract_candidates: measure map shape mismatch");
  }

  const Grid energy = energy_grid(map);
  const EnergyStats stats = energy_stats(energy);
  const float threshold =
      std::max(kThresholdFloor, static_cast<float>(stats.mean + 3.0 * stats.std_dev));
  const float noise_floor = static_cast<float>(stats.mean + stats.std_dev);

  Grid measure_energy;
  float measure_noise_floor = noise_floor;
  if (measure != nullptr) {
    measure_energy = energy_grid(*measure);
    const EnergyStats mstats = energy_stats(measure_energy);
    measure_noise_floor = static_cast<float>(mstats.mean + mstats.std_dev);
  }

  const float stride = static_cast<float>(kPyramidStrides[static_cast<std::size_t>(level)]);
  const int radius = kMomentRadius[static_cast<std::size_t>(level)];

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float e = energy.at(y, x);
      if (!(e > threshold)) continue;
      // Local maximum with deterministic plateau handling: strictly above
      // raster-earlier neighbors, not below raster-later ones.
      bool is_peak = true;
      for (int dy = -1; dy <= 1 && is_peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx == 0) continue;
          const int ny = y + dy;
          const int nx = x + dx;
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          const float ne = energy.at(ny, nx);
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (earlier ? !(e > ne) : !(e >= ne)) {
            is_peak = false;
            break;
          }
        }
      }
      if (!is_peak) continue;

      MomentFit fit;
      if (measure != nullptr) {
        fit = fit_moments(measure_energy, y, x, radius, measure_noise_floor);
      }
      if (!fit.ok) {
        fit = fit_moments(energy, y, x, radius, noise_floor);
      }
      if (!fit.ok || fit.w_cells < kMinCells || fit.h_cells < kMinCells ||
          fit.region_cells < kMinRegionCells) {
        continue;
      }

      Detection det;
      det.box.cx = static_cast<float>(fit.cx) * stride;
      det.box.cy = static_cast<float>(fit.cy) * stride;
      det.box.w = std::min(fit.w_cells * stride, static_cast<float>(frame_size));
      det.box.h = std::min(fit.h_cells * stride, static_cast<float>(frame_size));
      det.confidence = std::clamp(e, 0.0f, 1.0f);
      det.class_id = 0;
      det.frame_index = frame_index;
      out.push_back(det);
    }
  }
  return suppress_nested_peaks(std::move(out));
}

std::vector<Detection> extract_pyramid_group(const std::array<FeatureMap, 3>& pyramid,
                                             int frame_index, int frame_size,
                                             const std::array<FeatureMap, 3>* measure) {
  std::vector<Detection> all;
  for (int level = 0; level < kPyramidLevels; ++level) {
    const FeatureMap* m =
        measure != nullptr ? &(*measure)[static_cast<std::size_t>(level)] : nullptr;
    auto dets = extract_candidates(pyramid[static_cast<std::size_t>(level)], level, frame_index,
                                   frame_size, m);
    all.insert(all.end(), dets.begin(), dets.end());
  }
  return suppress_nested_peaks(std::move(all));
}

std::vector<Detection> extract_pyramid_candidates(
    const std::array<FeatureMap, 3>& pyramid, int frame_index, int frame_size, float nms_iou) {
  return nms(extract_pyramid_group(pyramid, frame_index, frame_size), nms_iou);
}

}  // namespace svreid
