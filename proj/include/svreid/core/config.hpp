// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <set>
#include <string>

namespace svreid {

enum class FusionMode { off, none, ls, ls_ll, ls_gs, full };

FusionMode parse_fusion_mode(const std::string& s);  // throws ConfigError
const char* fusion_mode_name(FusionMode m);

// Every pipeline hyperparameter, with its default. Loadable from a flat
// key=value file; unknown keys are errors so misspelled settings cannot
// silently fall back to defaults.
struct PipelineConfig {
  // Temporal fusion
  int tau = 3;                       // past frames feeding local attention
  float hanning_threshold = 0.3f;    // truncation of the 2-D Hann window
  int promote_frequency = 3;         // pool frequency above which entries promote
  int global_capacity = 8;           // global set size
  int pool_capacity = 24;            // candidate pool size (must exceed global_capacity)
  float pool_match_threshold = 0.7f; // cosine threshold for pool matching
  float nms_iou = 0.45f;

  // Tracking
  float gate_threshold = 9.4877f;    // chi-square 95%, 4 dof
  int max_age = 30;
  int n_init = 3;
  int topk = 0;                      // response-map top-k; 0 = 10% of smaller crop
  int gallery_budget = 30;
  float shot_hist_threshold = 0.5f;  // L1 histogram jump declaring a cut

  // Re-identification
  float query_update_delta = 0.1f;   // margin for query-set updates
  float reid_weight = 0.5f;          // lambda1
  float face_weight = 0.5f;          // lambda2 (reid_weight + face_weight = 1)
  float query_match_threshold = 0.7f;
  bool query_update = true;
  float link_threshold = 0.6f;
  int sample_stride = 5;
  float major_duration_frac = 0.2f;
  float major_area_frac = 0.02f;
  std::set<int> person_classes;      // class ids routed to the person branch

  // Execution
  FusionMode fusion = FusionMode::full;
  std::string kernel_backend = "auto";  // auto|scalar|avx2

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  // Flat key=value text, canonical key order.
  std::string serialize() const;

  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_string(const std::string& text);

  // Applies one key=value assignment; throws ConfigError for unknown keys
  // or unparsable values.
  void set(const std::string& key, const std::string& value);
};

}  // namespace svreid
