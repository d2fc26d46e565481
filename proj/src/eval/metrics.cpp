// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/eval/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "svreid/core/errors.hpp"
#include "svreid/core/ops.hpp"
#include "svreid/tracker/assignment.hpp"

namespace svreid {

MotReport clear_mot(const GroundTruth& gt, const std::vector<TrackRecord>& hyp, double iou_min) {
  if (!(iou_min > 0.0 && iou_min < 1.0)) {
    throw ConfigError("clear_mot: iou_min must be in (0,1)");
  }

  std::map<int, std::vector<const GroundTruthRecord*>> gt_by_frame;
  int gt_total = 0;
  for (const auto& r : gt.records) {
    if (!r.visible) continue;
    gt_by_frame[r.frame_index].push_back(&r);
    ++gt_total;
  }
  if (gt_total == 0) {
    throw DegenerateInputError("clear_mot: ground truth is empty, MOTA undefined");
  }
  std::map<int, std::vector<const TrackRecord*>> hyp_by_frame;
  for (const auto& r : hyp) {
    hyp_by_frame[r.frame_index].push_back(&r);
  }

  std::set<int> frames;
  for (const auto& [f, _] : gt_by_frame) frames.insert(f);
  for (const auto& [f, _] : hyp_by_frame) frames.insert(f);

  MotReport report;
  report.gt_total = gt_total;
  std::map<int, int> correspondence;  // gt object id -> hyp track id

  for (int frame : frames) {
    const auto git = gt_by_frame.find(frame);
    const auto hit = hyp_by_frame.find(frame);
    const auto& gts = git != gt_by_frame.end() ? git->second
                                               : std::vector<const GroundTruthRecord*>{};
    const auto& hyps = hit != hyp_by_frame.end() ? hit->second
                                                 : std::vector<const TrackRecord*>{};

    std::vector<bool> gt_used(gts.size(), false);
    std::vector<bool> hyp_used(hyps.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matches;

    // Keep last frame's correspondences that are still valid.
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      const auto corr = correspondence.find(gts[gi]->object_id);
      if (corr == correspondence.end()) continue;
      for (std::size_t hi = 0; hi < hyps.size(); ++hi) {
        if (hyp_used[hi] || hyps[hi]->track_id != corr->second) continue;
        if (iou(gts[gi]->box, hyps[hi]->box) >= iou_min) {
          gt_used[gi] = true;
          hyp_used[hi] = true;
          matches.emplace_back(gi, hi);
        }
        break;
      }
    }

    // Optimal assignment for whatever is left.
    std::vector<std::size_t> free_gt;
    std::vector<std::size_t> free_hyp;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (!gt_used[gi]) free_gt.push_back(gi);
    }
    for (std::size_t hi = 0; hi < hyps.size(); ++hi) {
      if (!hyp_used[hi]) free_hyp.push_back(hi);
    }
    if (!free_gt.empty() && !free_hyp.empty()) {
      CostMatrix cost(static_cast<int>(free_gt.size()), static_cast<int>(free_hyp.size()));
      for (std::size_t a = 0; a < free_gt.size(); ++a) {
        for (std::size_t b = 0; b < free_hyp.size(); ++b) {
          const double overlap = iou(gts[free_gt[a]]->box, hyps[free_hyp[b]]->box);
          cost.at(static_cast<int>(a), static_cast<int>(b)) =
              overlap >= iou_min ? 1.0 - overlap : kDisallowedCost;
        }
      }
      const std::vector<int> assign = hungarian_assign(cost);
      for (std::size_t a = 0; a < free_gt.size(); ++a) {
        const int b = assign[a];
        if (b < 0) continue;
        gt_used[free_gt[a]] = true;
        hyp_used[free_hyp[static_cast<std::size_t>(b)]] = true;
        matches.emplace_back(free_gt[a], free_hyp[static_cast<std::size_t>(b)]);
      }
    }

    for (const auto& [gi, hi] : matches) {
      const int object = gts[gi]->object_id;
      const int track = hyps[hi]->track_id;
      const auto corr = correspondence.find(object);
      if (corr != correspondence.end() && corr->second != track) {
        report.ids += 1;
      }
      correspondence[object] = track;
    }
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (!gt_used[gi]) report.fn += 1;
    }
    for (std::size_t hi = 0; hi < hyps.size(); ++hi) {
      if (!hyp_used[hi]) report.fp += 1;
    }
  }

  report.mota =
      1.0 - static_cast<double>(report.fp + report.fn + report.ids) / report.gt_total;
  return report;
}

namespace {

double class_ap(const std::vector<const GroundTruthRecord*>& gts,
                std::vector<const Detection*> dets, double iou_min) {
  std::stable_sort(dets.begin(), dets.end(), [](const Detection* a, const Detection* b) {
    return a->confidence > b->confidence;
  });

  std::map<int, std::vector<const GroundTruthRecord*>> gt_by_frame;
  for (const auto* g : gts) gt_by_frame[g->frame_index].push_back(g);
  std::map<const GroundTruthRecord*, bool> taken;

  const int n_gt = static_cast<int>(gts.size());
  std::vector<int> tp_flags;
  tp_flags.reserve(dets.size());
  for (const auto* d : dets) {
    const GroundTruthRecord* best = nullptr;
    double best_iou = iou_min;
    const auto it = gt_by_frame.find(d->frame_index);
    if (it != gt_by_frame.end()) {
      for (const auto* g : it->second) {
        if (taken[g]) continue;
        const double o = iou(d->box, g->box);
        if (o >= best_iou) {
          best_iou = o;
          best = g;
        }
      }
    }
    if (best != nullptr) {
      taken[best] = true;
      tp_flags.push_back(1);
    } else {
      tp_flags.push_back(0);
    }
  }

  // All-point interpolated area under precision-recall.
  std::vector<double> precision;
  std::vector<double> recall;
  int tp = 0;
  for (std::size_t i = 0; i < tp_flags.size(); ++i) {
    tp += tp_flags[i];
    precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    recall.push_back(static_cast<double>(tp) / n_gt);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    double p_interp = 0.0;
    for (std::size_t j = i; j < precision.size(); ++j) {
      p_interp = std::max(p_interp, precision[j]);
    }
    ap += (recall[i] - prev_recall) * p_interp;
    prev_recall = recall[i];
  }
  return ap;
}

}  // namespace

ApReport average_precision(const GroundTruth& gt, const std::vector<Detection>& dets,
                           double iou_min) {
  if (!(iou_min > 0.0 && iou_min < 1.0)) {
    throw ConfigError("average_precision: iou_min must be in (0,1)");
  }
  std::map<int, std::vector<const GroundTruthRecord*>> gt_by_class;
  for (const auto& r : gt.records) {
    if (r.visible) gt_by_class[r.class_id].push_back(&r);
  }
  std::map<int, std::vector<const Detection*>> det_by_class;
  for (const auto& d : dets) det_by_class[d.class_id].push_back(&d);

  ApReport report;
  double sum = 0.0;
  for (const auto& [cls, gts] : gt_by_class) {
    const auto it = det_by_class.find(cls);
    const double ap = class_ap(gts, it != det_by_class.end() ? it->second
                                                             : std::vector<const Detection*>{},
                               iou_min);
    report.per_class[cls] = ap;
    sum += ap;
  }
  report.mean_ap = report.per_class.empty() ? 0.0 : sum / report.per_class.size();
  return report;
}

double detection_recall(const GroundTruth& gt, const std::vector<Detection>& dets,
                        double iou_min) {
  std::map<int, std::vector<const Detection*>> det_by_frame;
  for (const auto& d : dets) det_by_frame[d.frame_index].push_back(&d);
  int visible = 0;
  int matched = 0;
  std::map<int, std::set<const Detection*>> used;
  for (const auto& r : gt.records) {
    if (!r.visible) continue;
    ++visible;
    const auto it = det_by_frame.find(r.frame_index);
    if (it == det_by_frame.end()) continue;
    const Detection* best = nullptr;
    double best_iou = iou_min;
    for (const auto* d : it->second) {
      if (used[r.frame_index].count(d)) continue;
      const double o = iou(r.box, d->box);
      if (o >= best_iou) {
        best_iou = o;
        best = d;
      }
    }
    if (best != nullptr) {
      used[r.frame_index].insert(best);
      ++matched;
    }
  }
  return visible > 0 ? static_cast<double>(matched) / visible : 0.0;
}

double rank_k(const std::vector<LabeledFeature>& queries,
              const std::vector<LabeledFeature>& gallery, int k, const SimilarityFn& sim) {
  if (gallery.empty()) {
    throw DegenerateInputError("rank_k: empty gallery");
  }
  if (k < 1) {
    throw ConfigError("rank_k: k must be >= 1");
  }
  if (queries.empty()) return 0.0;

  int hits = 0;
  for (const auto& q : queries) {
    struct Scored {
      double score;
      int index;
    };
    std::vector<Scored> scored;
    bool label_present = false;
    for (std::size_t i = 0; i < gallery.size(); ++i) {
      if (gallery[i].item_id == q.item_id) continue;  // self-exclusion
      if (gallery[i].label == q.label) label_present = true;
      scored.push_back({sim(q.feature, gallery[i].feature), static_cast<int>(i)});
    }
    if (!label_present) {
      throw ContractError("rank_k: query label " + std::to_string(q.label) +
                          " absent from gallery");
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      return a.score > b.score;
    });
    const int limit = std::min<int>(k, static_cast<int>(scored.size()));
    for (int i = 0; i < limit; ++i) {
      if (gallery[static_cast<std::size_t>(scored[static_cast<std::size_t>(i)].index)].label ==
          q.label) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

}  // namespace svreid
