// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "svreid/providers/bundle.hpp"
#include "svreid/providers/io.hpp"

namespace svreid {

// CLEAR-MOT tallies. mota == 1 - (fp + fn + ids) / gt_total by
// construction.
struct MotReport {
  double mota = 0.0;
  int fp = 0;
  int fn = 0;
  int ids = 0;
  int gt_total = 0;

  double fp_frac() const { return gt_total > 0 ? static_cast<double>(fp) / gt_total : 0.0; }
  double fn_frac() const { return gt_total > 0 ? static_cast<double>(fn) / gt_total : 0.0; }
  double ids_frac() const { return gt_total > 0 ? static_cast<double>(ids) / gt_total : 0.0; }
};

// Frame-by-frame CLEAR matching: existing correspondences keep priority
// when still valid at iou_min, remaining pairs match by minimum-cost
// assignment on 1-IoU; correspondence changes count as identity switches.
// Invisible ground-truth records are ignored. Throws DegenerateInputError
// when the (visible) ground truth is empty.
MotReport clear_mot(const GroundTruth& gt, const std::vector<TrackRecord>& hyp, double iou_min);

struct ApReport {
  std::map<int, double> per_class;  // classes with ground truth only
  double mean_ap = 0.0;
};

// Greedy confidence-descending matching, one match per ground-truth box,
// all-point interpolated AP; mAP is the unweighted mean over classes with
// at least one ground-truth box.
ApReport average_precision(const GroundTruth& gt, const std::vector<Detection>& dets,
                           double iou_min);

// Fraction of visible ground-truth boxes matched by some detection at
// iou_min (class-agnostic); the recall measure used by the fusion ablation.
double detection_recall(const GroundTruth& gt, const std::vector<Detection>& dets, double iou_min);

struct LabeledFeature {
  int item_id = 0;  // identity for self-exclusion
  int label = 0;    // ground-truth identity
  std::vector<float> feature;
};

using SimilarityFn = std::function<double(const std::vector<float>&, const std::vector<float>&)>;

// Fraction of queries whose top-k gallery items (by sim, excluding items
// with the query's item_id) contain a same-label item. Every query label
// must exist in the gallery.
double rank_k(const std::vector<LabeledFeature>& queries,
              const std::vector<LabeledFeature>& gallery, int k, const SimilarityFn& sim);

}  // namespace svreid
