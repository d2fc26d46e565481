// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tracker/shots.hpp"

#include <cmath>

#include "svreid/core/errors.hpp"

namespace svreid {

int ShotBoundaryList::shot_of_frame(int frame) const {
  int shot = 0;
  for (int cut : cuts) {
    if (frame >= cut) ++shot;
  }
  return shot;
}

std::pair<int, int> ShotBoundaryList::shot_range(int shot, int n_frames) const {
  const int begin = shot == 0 ? 0 : cuts[static_cast<std::size_t>(shot - 1)];
  const int end =
      shot == static_cast<int>(cuts.size()) ? n_frames : cuts[static_cast<std::size_t>(shot)];
  return {begin, end};
}

double histogram_l1(const std::array<float, kHistogramChannels * kHistogramBins>& a,
                    const std::array<float, kHistogramChannels * kHistogramBins>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += std::fabs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return d;
}

ShotBoundaryList detect_shot_boundaries(
    const std::vector<std::array<float, kHistogramChannels * kHistogramBins>>& histograms,
    double threshold) {
  if (histograms.empty()) {
    throw DegenerateInputError("detect_shot_boundaries: need at least one frame");
  }
  ShotBoundaryList out;
  int shot_start = 0;
  for (std::size_t t = 1; t < histograms.size(); ++t) {
    if (histogram_l1(histograms[t - 1], histograms[t]) > threshold) {
      const int frame = static_cast<int>(t);
      if (frame - shot_start >= 2) {
        out.cuts.push_back(frame);
        shot_start = frame;
      }
    }
  }
  return out;
}

ShotBoundaryList detect_shot_boundaries(const std::vector<FrameBundle>& frames, double threshold) {
  std::vector<std::array<float, kHistogramChannels * kHistogramBins>> hists;
  hists.reserve(frames.size());
  for (const auto& f : frames) hists.push_back(f.rgb_histogram);
  return detect_shot_boundaries(hists, threshold);
}

}  // namespace svreid
