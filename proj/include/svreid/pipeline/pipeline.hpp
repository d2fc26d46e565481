// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svreid/core/config.hpp"
#include "svreid/providers/bundle.hpp"
#include "svreid/providers/io.hpp"
#include "svreid/reid/reid.hpp"
#include "svreid/tracker/shots.hpp"
#include "svreid/tracker/tracker.hpp"

namespace svreid {

// Optional per-frame face lookup (the synthetic provider backs this for
// generated scenarios; file inputs have no face source).
using FaceProvider =
    std::function<std::optional<std::vector<float>>(int frame_index, const BoundingBox& box)>;

struct RunManifest {
  std::string input_path;
  std::string input_digest;
  std::uint64_t seed = 0;
  std::string config_text;     // canonical key=value snapshot
  std::string kernel_backend;  // backend the run actually used
  int n_frames = 0;
  int n_shots = 0;
  std::map<std::string, double> timings_ms;
  std::map<std::string, std::string> outputs;  // logical name -> path

  std::string to_json() const;
  static RunManifest from_json_file(const std::string& path);
};

struct PipelineOptions {
  PipelineConfig cfg;
  std::uint64_t seed = 0;
  bool dump_intermediates = false;
  std::string out_dir;     // outputs written here when non-empty
  std::string input_path;  // recorded in the manifest
};

struct PipelineResult {
  ShotBoundaryList shots;
  std::vector<Detection> detections;  // fused, all frames
  std::vector<Tracklet> tracklets;
  std::vector<Trajectory> trajectories;
  std::vector<TrajectoryFeature> trajectory_features;
  std::vector<TrajectoryFeature> majors;
  QuerySet query_set;
  RunManifest manifest;
};

// Shot split -> per-shot fusion -> per-shot tracking -> cross-shot linking
// with query updates -> major selection. Writes detections.csv,
// tracks.csv, trajectories.jsonl, majors.jsonl, shots.csv and
// manifest.json into out_dir when set. Any stage failure is rethrown with
// the stage name and frame index attached.
PipelineResult run_pipeline(const std::vector<FrameBundle>& frames, const PipelineOptions& opt,
                            const FaceProvider& faces = {});

// Re-runs a recorded manifest (same config, seed and kernel backend, same
// input file) into out_dir; outputs are byte-identical to the original run.
PipelineResult replay_manifest(const std::string& manifest_path, const std::string& out_dir);

// Runs the pipeline for one input file, reusing out_dir's previous results
// when its manifest matches the input digest and config. Returns the
// majors (loaded from disk on a cache hit).
std::vector<TrajectoryFeature> run_pipeline_cached(const std::string& input_path,
                                                   const PipelineOptions& opt);

// FNV-1a 64 digest of a file's bytes, hex-encoded.
std::string file_digest(const std::string& path);

// Line-delimited records {object_id, category, shots:[{shot_id, frames,
// boxes}], feature:[...]}; features must align with trajectories.
std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajectories,
                                  const std::vector<TrajectoryFeature>& features);
std::string majors_to_jsonl(const std::vector<TrajectoryFeature>& majors);
std::vector<TrajectoryFeature> load_majors_jsonl(const std::string& path);

}  // namespace svreid
