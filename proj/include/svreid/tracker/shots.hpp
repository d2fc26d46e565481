// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <array>
#include <vector>

#include "svreid/providers/bundle.hpp"

namespace svreid {

// Sorted frame indices at which a new shot begins (frame 0 is implicit).
struct ShotBoundaryList {
  std::vector<int> cuts;

  int shot_count() const { return static_cast<int>(cuts.size()) + 1; }
  int shot_of_frame(int frame) const;
  // [begin, end) frame range of one shot given the total frame count.
  std::pair<int, int> shot_range(int shot, int n_frames) const;
};

// Total L1 distance between two normalized histograms (summed over the
// three channels; maximum 6).
double histogram_l1(const std::array<float, kHistogramChannels * kHistogramBins>& a,
                    const std::array<float, kHistogramChannels * kHistogramBins>& b);

// A cut is declared at frame t when the histogram L1 distance between
// frames t-1 and t exceeds the threshold; cuts closer than 2 frames to the
// running shot start are merged (minimum shot length 2).
ShotBoundaryList detect_shot_boundaries(
    const std::vector<std::array<float, kHistogramChannels * kHistogramBins>>& histograms,
    double threshold);

ShotBoundaryList detect_shot_boundaries(const std::vector<FrameBundle>& frames, double threshold);

}  // namespace svreid
