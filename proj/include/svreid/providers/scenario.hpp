// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "svreid/providers/bundle.hpp"

namespace svreid {

// Frame interval [begin, end) in which an object's blob is rendered with
// reduced gain, emulating the low-quality frames TIFN is meant to rescue.
struct DegradeWindow {
  int begin = 0;
  int end = 0;
  float gain = 0.0f;  // in [0,1)
};

// Straight-line motion within one shot; positions reflect off the frame
// margins so objects stay in bounds.
struct ShotMotion {
  float cx0 = 0.0f;
  float cy0 = 0.0f;
  float vx = 0.0f;
  float vy = 0.0f;
};

struct ObjectSpec {
  float w = 64.0f;  // pixels
  float h = 64.0f;
  int class_id = 0;
  bool face_visible = false;
  std::vector<float> appearance;        // unit vector; drawn from seed when empty
  std::vector<ShotMotion> shot_motion;  // one per shot; drawn from seed when empty
  std::vector<DegradeWindow> degrade;
};

// Deterministic synthetic stand-in for a trained detector/backbone: each
// object is a Gaussian-envelope blob of its appearance vector rendered
// into all pyramid levels over a per-shot noise background.
struct ScenarioSpec {
  int n_objects = 0;
  int n_frames = 0;
  std::vector<int> shot_cuts;  // strictly increasing, within (0, n_frames)
  int appearance_dim = 16;
  int frame_size = 608;
  float drift_rate = 0.0f;   // radians/frame of appearance rotation
  float noise_sigma = 0.0f;  // per-channel background noise std
  float hist_jitter = 0.02f;
  std::uint64_t seed = 1;
  std::vector<ObjectSpec> objects;  // auto-filled to n_objects when shorter

  void validate() const;  // throws ConfigError

  int shot_count() const { return static_cast<int>(shot_cuts.size()) + 1; }
  int shot_of_frame(int frame) const;
  int shot_start(int shot) const;
};

struct Scenario {
  ScenarioSpec spec;  // with all auto-filled fields resolved
  std::vector<FrameBundle> frames;
  GroundTruth truth;
};

// Deterministic given (spec, seed): the same spec produces byte-identical
// frames and ground truth on every call.
Scenario generate_scenario(const ScenarioSpec& spec);

// Appearance vector of object `object_id` at frame `frame` (drift applied).
std::vector<float> scenario_appearance_at(const Scenario& sc, int object_id, int frame);

// Synthetic face provider: returns the object's base appearance vector when
// the query box overlaps a face-visible object's ground-truth box at that
// frame (IoU > 0.3); absent otherwise.
std::optional<std::vector<float>> face_features(const Scenario& sc, int frame_index,
                                                const BoundingBox& box);

}  // namespace svreid
