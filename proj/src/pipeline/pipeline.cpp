// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "svreid/core/errors.hpp"
#include "svreid/kernels/kernels.hpp"
#include "svreid/tifn/attention.hpp"
#include "svreid/tifn/stage.hpp"

namespace svreid {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// CPSN uses the two finer pyramid levels.
constexpr int kCpsnLevels[2] = {0, 1};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

[[noreturn]] void rethrow_with_stage(const Error& e, const std::string& stage, int frame) {
  throw Error(e.code(), "stage " + stage + " (frame " + std::to_string(frame) +
                            "): " + e.what());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void configure_backend(const std::string& requested) {
  if (requested == "auto" || requested.empty()) return;
  if (requested == "scalar") {
    kernels::set_backend(kernels::Backend::scalar);
  } else if (requested == "avx2") {
    kernels::set_backend(kernels::Backend::avx2);
  } else {
    throw ConfigError("unknown kernel backend '" + requested + "'");
  }
}

json trajectory_to_json(const Trajectory& traj, const TrajectoryFeature& feat) {
  json shots = json::array();
  for (const auto& t : traj.tracklets) {
    json frames = json::array();
    json boxes = json::array();
    for (const auto& e : t.entries) {
      frames.push_back(e.frame_index);
      boxes.push_back({e.box.cx, e.box.cy, e.box.w, e.box.h});
    }
    shots.push_back({{"shot_id", t.shot_id}, {"frames", frames}, {"boxes", boxes}});
  }
  return {{"object_id", traj.object_id},
          {"category", category_name(feat.category)},
          {"shots", shots},
          {"feature", feat.feature}};
}

json major_to_json(const TrajectoryFeature& m) {
  json j = {{"object_id", m.object_id},
            {"category", category_name(m.category)},
            {"duration_frames", m.duration_frames},
            {"mean_area_frac", m.mean_area_frac},
            {"feature", m.feature}};
  if (!m.face.empty()) j["face"] = m.face;
  return j;
}

}  // namespace

std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajectories,
                                  const std::vector<TrajectoryFeature>& features) {
  if (trajectories.size() != features.size()) {
    throw DimensionError("trajectories_to_jsonl: feature count mismatch");
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    os << trajectory_to_json(trajectories[i], features[i]).dump() << "\n";
  }
  return os.str();
}

std::string majors_to_jsonl(const std::vector<TrajectoryFeature>& majors) {
  std::ostringstream os;
  for (const auto& m : majors) os << major_to_json(m).dump() << "\n";
  return os.str();
}

namespace {

void dump_attention(const std::string& path, const std::vector<FrameAttention>& records) {
  std::ostringstream os(std::ios::binary);
  const char magic[4] = {'S', 'V', 'R', 'A'};
  os.write(magic, 4);
  auto u32 = [&](std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
  u32(1);
  u32(static_cast<std::uint32_t>(records.size()));
  for (const auto& rec : records) {
    u32(static_cast<std::uint32_t>(rec.frame_index));
    u32(static_cast<std::uint32_t>(rec.level));
    u32(static_cast<std::uint32_t>(rec.ls.height));
    u32(static_cast<std::uint32_t>(rec.ls.width));
    for (const Grid* g : {&rec.ls, &rec.ll, &rec.gs}) {
      os.write(reinterpret_cast<const char*>(g->values.data()),
               static_cast<std::streamsize>(g->values.size() * 4));
    }
  }
  atomic_write_text(path, os.str());
}

}  // namespace

std::string RunManifest::to_json() const {
  json j;
  j["version"] = 1;
  j["input_path"] = input_path;
  j["input_digest"] = input_digest;
  j["seed"] = seed;
  j["config"] = config_text;
  j["kernel_backend"] = kernel_backend;
  j["n_frames"] = n_frames;
  j["n_shots"] = n_shots;
  j["timings_ms"] = timings_ms;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open manifest: " + path, 0);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw FormatError("bad manifest JSON: " + std::string(e.what()), 0);
  }
  RunManifest m;
  try {
    m.input_path = j.at("input_path").get<std::string>();
    m.input_digest = j.value("input_digest", "");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_text = j.at("config").get<std::string>();
    m.kernel_backend = j.value("kernel_backend", "auto");
    m.n_frames = j.value("n_frames", 0);
    m.n_shots = j.value("n_shots", 0);
    if (j.contains("timings_ms")) m.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
    if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw FormatError("manifest missing field: " + std::string(e.what()), 0);
  }
  return m;
}

std::string file_digest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for digest: " + path, 0);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (f) {
    f.read(buf, sizeof(buf));
    const std::streamsize n = f.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

PipelineResult run_pipeline(const std::vector<FrameBundle>& frames, const PipelineOptions& opt,
                            const FaceProvider& faces) {
  opt.cfg.validate();
  configure_backend(opt.cfg.kernel_backend);
  if (frames.empty()) {
    throw DegenerateInputError("run_pipeline: no frames");
  }
  const int n_frames = static_cast<int>(frames.size());
  const int frame_size = frames[0].frame_size_hint();

  PipelineResult result;
  result.manifest.input_path = opt.input_path;
  result.manifest.seed = opt.seed;
  result.manifest.config_text = opt.cfg.serialize();
  result.manifest.kernel_backend = kernels::backend_name(kernels::active_backend());
  result.manifest.n_frames = n_frames;
  if (!opt.input_path.empty() && std::filesystem::exists(opt.input_path)) {
    result.manifest.input_digest = file_digest(opt.input_path);
  }

  // Shot detection.
  auto t0 = Clock::now();
  try {
    result.shots = detect_shot_boundaries(frames, opt.cfg.shot_hist_threshold);
  } catch (const Error& e) {
    rethrow_with_stage(e, "shots", 0);
  }
  result.manifest.n_shots = result.shots.shot_count();
  result.manifest.timings_ms["shots"] = ms_since(t0);

  // Per-shot fusion.
  t0 = Clock::now();
  std::vector<std::vector<Detection>> fused_per_frame(static_cast<std::size_t>(n_frames));
  std::vector<FrameAttention> attention_records;
  if (opt.cfg.fusion == FusionMode::off) {
    for (int t = 0; t < n_frames; ++t) {
      fused_per_frame[static_cast<std::size_t>(t)] = frames[static_cast<std::size_t>(t)].candidates;
    }
  } else {
    TifnStage stage(opt.cfg, frame_size);
    for (int t = 0; t < n_frames; ++t) {
      if (result.shots.shot_of_frame(t) != (t > 0 ? result.shots.shot_of_frame(t - 1) : 0)) {
        stage.reset_shot();
      }
      try {
        fused_per_frame[static_cast<std::size_t>(t)] = stage.process_frame(
            frames[static_cast<std::size_t>(t)],
            opt.dump_intermediates ? &attention_records : nullptr);
      } catch (const Error& e) {
        rethrow_with_stage(e, "tifn", t);
      }
    }
  }
  for (const auto& dets : fused_per_frame) {
    result.detections.insert(result.detections.end(), dets.begin(), dets.end());
  }
  result.manifest.timings_ms["fusion"] = ms_since(t0);

  // Per-shot tracking.
  t0 = Clock::now();
  TrackIdAllocator ids;
  for (int shot = 0; shot < result.shots.shot_count(); ++shot) {
    const auto [begin, end] = result.shots.shot_range(shot, n_frames);
    ShotTracker tracker(opt.cfg, shot, begin, end, ids);
    for (int t = begin; t < end; ++t) {
      const auto& dets = fused_per_frame[static_cast<std::size_t>(t)];
      std::vector<MultiScaleCrop> crops;
      std::vector<std::vector<float>> face_vectors;
      crops.reserve(dets.size());
      try {
        for (const auto& det : dets) {
          MultiScaleCrop crop;
          for (int level : kCpsnLevels) {
            crop.push_back(crop_feature(
                frames[static_cast<std::size_t>(t)].pyramid[static_cast<std::size_t>(level)], det,
                level));
          }
          crops.push_back(std::move(crop));
          std::vector<float> face;
          if (faces) {
            if (auto f = faces(t, det.box)) face = std::move(*f);
          }
          face_vectors.push_back(std::move(face));
        }
        tracker.step(t, dets, crops, face_vectors);
      } catch (const Error& e) {
        rethrow_with_stage(e, "tracker", t);
      }
    }
    auto tracklets = tracker.finish();
    result.tracklets.insert(result.tracklets.end(), tracklets.begin(), tracklets.end());
  }
  result.manifest.timings_ms["tracking"] = ms_since(t0);

  // Cross-shot linking and majors.
  t0 = Clock::now();
  try {
    LinkResult linked = link_tracklets(result.tracklets, opt.cfg.link_threshold,
                                       opt.cfg.query_match_threshold, opt.cfg.query_update_delta);
    result.trajectories = std::move(linked.trajectories);
    result.query_set = std::move(linked.query_set);
    const double frame_area = static_cast<double>(frame_size) * frame_size;
    for (const auto& traj : result.trajectories) {
      result.trajectory_features.push_back(trajectory_feature(
          traj, opt.cfg.sample_stride, frame_area, opt.cfg.person_classes));
    }
    result.majors = select_major_objects(result.trajectory_features, opt.cfg.major_duration_frac,
                                         opt.cfg.major_area_frac, n_frames);
  } catch (const Error& e) {
    rethrow_with_stage(e, "reid", 0);
  }
  result.manifest.timings_ms["reid"] = ms_since(t0);

  // Outputs.
  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    const std::string det_path = join_path(opt.out_dir, "detections.csv");
    save_detections_csv(det_path, result.detections);
    result.manifest.outputs["detections"] = det_path;

    std::vector<TrackRecord> track_records;
    for (const auto& t : result.tracklets) {
      for (const auto& e : t.entries) {
        track_records.push_back({e.frame_index, t.track_id, e.box, e.confidence, t.class_id,
                                 t.shot_id});
      }
    }
    std::sort(track_records.begin(), track_records.end(),
              [](const TrackRecord& a, const TrackRecord& b) {
                if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
                return a.track_id < b.track_id;
              });
    const std::string tracks_path = join_path(opt.out_dir, "tracks.csv");
    save_tracks_csv(tracks_path, track_records);
    result.manifest.outputs["tracks"] = tracks_path;

    const std::string traj_path = join_path(opt.out_dir, "trajectories.jsonl");
    atomic_write_text(traj_path,
                      trajectories_to_jsonl(result.trajectories, result.trajectory_features));
    result.manifest.outputs["trajectories"] = traj_path;

    const std::string majors_path = join_path(opt.out_dir, "majors.jsonl");
    atomic_write_text(majors_path, majors_to_jsonl(result.majors));
    result.manifest.outputs["majors"] = majors_path;

    std::ostringstream shots_os;
    shots_os << "cut_frame\n";
    for (int cut : result.shots.cuts) shots_os << cut << "\n";
    const std::string shots_path = join_path(opt.out_dir, "shots.csv");
    atomic_write_text(shots_path, shots_os.str());
    result.manifest.outputs["shots"] = shots_path;

    if (opt.dump_intermediates) {
      const std::string attn_path = join_path(opt.out_dir, "attention.bin");
      dump_attention(attn_path, attention_records);
      result.manifest.outputs["attention"] = attn_path;
    }

    const std::string manifest_path = join_path(opt.out_dir, "manifest.json");
    atomic_write_text(manifest_path, result.manifest.to_json());
  }
  return result;
}

PipelineResult replay_manifest(const std::string& manifest_path, const std::string& out_dir) {
  const RunManifest m = RunManifest::from_json_file(manifest_path);
  PipelineOptions opt;
  opt.cfg = PipelineConfig::from_string(m.config_text);
  // Pin the exact kernels the original run used, even if it picked them
  // automatically.
  opt.cfg.kernel_backend = m.kernel_backend;
  opt.seed = m.seed;
  opt.out_dir = out_dir;
  opt.input_path = m.input_path;
  opt.dump_intermediates = m.outputs.count("attention") > 0;
  if (!m.input_digest.empty()) {
    const std::string digest = file_digest(m.input_path);
    if (digest != m.input_digest) {
      throw FormatError("replay input digest mismatch for " + m.input_path, 0);
    }
  }
  const std::vector<FrameBundle> frames = load_frames(m.input_path);
  return run_pipeline(frames, opt);
}

std::vector<TrajectoryFeature> load_majors_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open majors file: " + path, 0);
  std::vector<TrajectoryFeature> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError("bad majors JSONL: " + std::string(e.what()), 0);
    }
    TrajectoryFeature m;
    m.object_id = j.at("object_id").get<int>();
    m.category = parse_category(j.at("category").get<std::string>());
    m.duration_frames = j.at("duration_frames").get<int>();
    m.mean_area_frac = j.at("mean_area_frac").get<double>();
    m.feature = j.at("feature").get<std::vector<float>>();
    if (j.contains("face")) m.face = j.at("face").get<std::vector<float>>();
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<TrajectoryFeature> run_pipeline_cached(const std::string& input_path,
                                                   const PipelineOptions& opt) {
  const std::string manifest_path = join_path(opt.out_dir, "manifest.json");
  const std::string majors_path = join_path(opt.out_dir, "majors.jsonl");
  if (std::filesystem::exists(manifest_path) && std::filesystem::exists(majors_path)) {
    try {
      const RunManifest m = RunManifest::from_json_file(manifest_path);
      if (m.config_text == opt.cfg.serialize() && m.input_path == input_path &&
          !m.input_digest.empty() && m.input_digest == file_digest(input_path)) {
        return load_majors_jsonl(majors_path);
      }
    } catch (const Error&) {
      // fall through to a fresh run
    }
  }
  PipelineOptions local = opt;
  local.input_path = input_path;
  const std::vector<FrameBundle> frames = load_frames(input_path);
  return run_pipeline(frames, local).majors;
}

}  // namespace svreid
