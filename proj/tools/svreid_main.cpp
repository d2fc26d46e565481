// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

// Command-line surface of the pipeline: scenario simulation, per-stage
// runs, end-to-end runs, retrieval and the evaluation metrics.
//
// Exit codes: 0 success, 2 usage/config, 3 format, 4 numerical.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "svreid/core/config.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/eval/metrics.hpp"
#include "svreid/pipeline/pipeline.hpp"
#include "svreid/providers/io.hpp"
#include "svreid/providers/scenario.hpp"
#include "svreid/tifn/stage.hpp"
#include "svreid/tracker/shots.hpp"

namespace fs = std::filesystem;
using namespace svreid;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string fusion;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool dump_intermediates = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_fusion = true) {
  cmd->add_option("--config", opts.config_path, "flat key=value config file");
  cmd->add_option("--seed", opts.seed, "seed recorded in the manifest");
  cmd->add_option("--jobs", opts.jobs, "parallel videos")->check(CLI::PositiveNumber);
  cmd->add_flag("--dump-intermediates", opts.dump_intermediates,
                "dump per-frame attention grids");
  if (with_fusion) {
    cmd->add_option("--fusion", opts.fusion, "off|none|ls|ls+ll|ls+gs|full");
  }
}

PipelineConfig load_config(const CommonOpts& opts) {
  PipelineConfig cfg = opts.config_path.empty() ? PipelineConfig{}
                                                : PipelineConfig::from_file(opts.config_path);
  if (!opts.fusion.empty()) {
    cfg.fusion = parse_fusion_mode(opts.fusion);
  }
  cfg.validate();
  return cfg;
}

// obj:a:b[:c] option triplets used by simulate.
std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) out.push_back(item);
  return out;
}

int object_index(const std::string& field, int n_objects) {
  const int idx = std::stoi(field);
  if (idx < 0 || idx >= n_objects) {
    throw ConfigError("object index " + field + " out of range");
  }
  return idx;
}

int run_simulate(const std::string& out_path, const std::string& gt_path, ScenarioSpec spec,
                 const std::vector<std::string>& degrade, const std::vector<std::string>& faces,
                 const std::vector<std::string>& classes, const std::vector<std::string>& sizes) {
  spec.objects.resize(static_cast<std::size_t>(spec.n_objects));
  for (const auto& d : degrade) {
    const auto f = split_fields(d);
    if (f.size() != 4) throw ConfigError("--degrade expects obj:begin:end:gain");
    const int idx = object_index(f[0], spec.n_objects);
    spec.objects[static_cast<std::size_t>(idx)].degrade.push_back(
        {std::stoi(f[1]), std::stoi(f[2]), std::stof(f[3])});
  }
  for (const auto& s : faces) {
    spec.objects[static_cast<std::size_t>(object_index(s, spec.n_objects))].face_visible = true;
  }
  for (const auto& c : classes) {
    const auto f = split_fields(c);
    if (f.size() != 2) throw ConfigError("--class expects obj:class_id");
    spec.objects[static_cast<std::size_t>(object_index(f[0], spec.n_objects))].class_id =
        std::stoi(f[1]);
  }
  for (const auto& s : sizes) {
    const auto f = split_fields(s);
    if (f.size() != 3) throw ConfigError("--size expects obj:w:h");
    const int idx = object_index(f[0], spec.n_objects);
    spec.objects[static_cast<std::size_t>(idx)].w = std::stof(f[1]);
    spec.objects[static_cast<std::size_t>(idx)].h = std::stof(f[2]);
  }

  const Scenario sc = generate_scenario(spec);
  save_frames(out_path, sc.frames);
  if (!gt_path.empty()) {
    save_ground_truth_csv(gt_path, sc.truth);
  }
  std::cout << "wrote " << sc.frames.size() << " frames to " << out_path << " ("
            << sc.spec.shot_count() << " shots, " << spec.n_objects << " objects)\n";
  return 0;
}

std::vector<std::vector<Detection>> group_by_frame(const std::vector<Detection>& dets,
                                                   int n_frames) {
  std::vector<std::vector<Detection>> out(static_cast<std::size_t>(n_frames));
  for (const auto& d : dets) {
    if (d.frame_index < 0 || d.frame_index >= n_frames) {
      throw FormatError("detection frame index out of range", 0);
    }
    out[static_cast<std::size_t>(d.frame_index)].push_back(d);
  }
  return out;
}

int run_fuse(const std::string& in_path, const std::string& out_path, const PipelineConfig& cfg) {
  const auto frames = load_frames(in_path);
  if (frames.empty()) throw DegenerateInputError("fuse: no frames");
  const ShotBoundaryList shots = detect_shot_boundaries(frames, cfg.shot_hist_threshold);

  std::vector<Detection> all;
  if (cfg.fusion == FusionMode::off) {
    for (const auto& f : frames) {
      all.insert(all.end(), f.candidates.begin(), f.candidates.end());
    }
  } else {
    TifnStage stage(cfg, frames[0].frame_size_hint());
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const int ft = static_cast<int>(t);
      if (ft > 0 && shots.shot_of_frame(ft) != shots.shot_of_frame(ft - 1)) {
        stage.reset_shot();
      }
      const auto dets = stage.process_frame(frames[t]);
      all.insert(all.end(), dets.begin(), dets.end());
    }
  }
  save_detections_csv(out_path, all);
  std::cout << "wrote " << all.size() << " detections to " << out_path << "\n";
  return 0;
}

int run_track(const std::string& in_path, const std::string& dets_path,
              const std::string& out_path, const PipelineConfig& cfg) {
  const auto frames = load_frames(in_path);
  if (frames.empty()) throw DegenerateInputError("track: no frames");
  const int n_frames = static_cast<int>(frames.size());
  const ShotBoundaryList shots = detect_shot_boundaries(frames, cfg.shot_hist_threshold);

  std::vector<std::vector<Detection>> per_frame;
  if (!dets_path.empty()) {
    per_frame = group_by_frame(load_detections_csv(dets_path), n_frames);
  } else {
    PipelineOptions opt;
    opt.cfg = cfg;
    opt.input_path = in_path;
    per_frame = group_by_frame(run_pipeline(frames, opt).detections, n_frames);
  }

  TrackIdAllocator ids;
  std::vector<TrackRecord> records;
  for (int shot = 0; shot < shots.shot_count(); ++shot) {
    const auto [begin, end] = shots.shot_range(shot, n_frames);
    ShotTracker tracker(cfg, shot, begin, end, ids);
    for (int t = begin; t < end; ++t) {
      std::vector<MultiScaleCrop> crops;
      for (const auto& det : per_frame[static_cast<std::size_t>(t)]) {
        MultiScaleCrop crop;
        crop.push_back(crop_feature(frames[static_cast<std::size_t>(t)].pyramid[0], det, 0));
        crop.push_back(crop_feature(frames[static_cast<std::size_t>(t)].pyramid[1], det, 1));
        crops.push_back(std::move(crop));
      }
      tracker.step(t, per_frame[static_cast<std::size_t>(t)], crops);
    }
    for (const auto& tl : tracker.finish()) {
      for (const auto& e : tl.entries) {
        records.push_back({e.frame_index, tl.track_id, e.box, e.confidence, tl.class_id,
                           tl.shot_id});
      }
    }
  }
  std::sort(records.begin(), records.end(), [](const TrackRecord& a, const TrackRecord& b) {
    if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
    return a.track_id < b.track_id;
  });
  save_tracks_csv(out_path, records);
  std::cout << "wrote " << records.size() << " track records to " << out_path << "\n";
  return 0;
}

int run_reid(const std::string& in_path, const std::string& tracks_path,
             const std::string& out_dir, const PipelineConfig& cfg) {
  const auto frames = load_frames(in_path);
  if (frames.empty()) throw DegenerateInputError("reid: no frames");
  const auto records = load_tracks_csv(tracks_path);

  // Rebuild per-shot tracklets; entry features come from level-0 crops at
  // the recorded boxes.
  std::map<std::pair<int, int>, Tracklet> by_track;
  for (const auto& r : records) {
    if (r.frame_index < 0 || r.frame_index >= static_cast<int>(frames.size())) {
      throw FormatError("track record frame out of range", 0);
    }
    Tracklet& t = by_track[{r.shot_id, r.track_id}];
    t.track_id = r.track_id;
    t.shot_id = r.shot_id;
    t.class_id = r.class_id;
    t.state = TrackState::deleted;
    Detection det;
    det.box = r.box;
    det.confidence = r.confidence;
    det.frame_index = r.frame_index;
    const FeatureCrop crop =
        crop_feature(frames[static_cast<std::size_t>(r.frame_index)].pyramid[0], det, 0);
    TrackletEntry e;
    e.frame_index = r.frame_index;
    e.box = r.box;
    e.confidence = r.confidence;
    e.feature = pooled_unit_vector(crop.data);
    t.entries.push_back(std::move(e));
  }
  std::vector<Tracklet> tracklets;
  for (auto& [_, t] : by_track) {
    std::sort(t.entries.begin(), t.entries.end(),
              [](const TrackletEntry& a, const TrackletEntry& b) {
                return a.frame_index < b.frame_index;
              });
    tracklets.push_back(std::move(t));
  }

  LinkResult linked = link_tracklets(tracklets, cfg.link_threshold, cfg.query_match_threshold,
                                     cfg.query_update_delta);
  const double frame_area = static_cast<double>(frames[0].frame_size_hint()) *
                            frames[0].frame_size_hint();
  std::vector<TrajectoryFeature> features;
  for (const auto& traj : linked.trajectories) {
    features.push_back(
        trajectory_feature(traj, cfg.sample_stride, frame_area, cfg.person_classes));
  }
  const auto majors = select_major_objects(features, cfg.major_duration_frac, cfg.major_area_frac,
                                           static_cast<int>(frames.size()));

  fs::create_directories(out_dir);
  atomic_write_text((fs::path(out_dir) / "trajectories.jsonl").string(),
                    trajectories_to_jsonl(linked.trajectories, features));
  atomic_write_text((fs::path(out_dir) / "majors.jsonl").string(), majors_to_jsonl(majors));
  std::cout << "wrote " << linked.trajectories.size() << " trajectories (" << majors.size()
            << " major) to " << out_dir << "\n";
  return 0;
}

int run_pipeline_cmd(const std::string& in_path, const std::string& out_dir,
                     const std::string& replay_path, const CommonOpts& common) {
  if (!replay_path.empty()) {
    replay_manifest(replay_path, out_dir);
    std::cout << "replayed " << replay_path << " into " << out_dir << "\n";
    return 0;
  }
  PipelineOptions opt;
  opt.cfg = load_config(common);
  opt.seed = common.seed;
  opt.dump_intermediates = common.dump_intermediates;
  opt.out_dir = out_dir;
  opt.input_path = in_path;
  const auto frames = load_frames(in_path);
  const PipelineResult result = run_pipeline(frames, opt);
  std::cout << "pipeline: " << result.manifest.n_frames << " frames, "
            << result.manifest.n_shots << " shots, " << result.tracklets.size() << " tracklets, "
            << result.trajectories.size() << " trajectories, " << result.majors.size()
            << " major objects\n";
  return 0;
}

std::vector<std::string> gallery_files(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& g : inputs) {
    if (fs::is_directory(g)) {
      for (const auto& entry : fs::directory_iterator(g)) {
        if (entry.path().extension() == ".svrb") files.push_back(entry.path().string());
      }
    } else {
      files.push_back(g);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_retrieve(const std::vector<std::string>& query_paths,
                 const std::vector<std::string>& gallery_inputs, const std::string& out_path,
                 const std::string& cache_dir, const CommonOpts& common) {
  const PipelineConfig cfg = load_config(common);
  const auto gallery_paths = gallery_files(gallery_inputs);
  if (gallery_paths.empty()) {
    throw ConfigError("retrieve: empty gallery");
  }

  // One pipeline run per video, parallel up to --jobs, deterministic by
  // index.
  std::vector<std::string> all_paths = query_paths;
  all_paths.insert(all_paths.end(), gallery_paths.begin(), gallery_paths.end());
  std::vector<std::vector<TrajectoryFeature>> majors(all_paths.size());
  std::vector<std::string> errors(all_paths.size());
  std::atomic<std::size_t> next{0};
  const int jobs = std::max(1, common.jobs);
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= all_paths.size()) return;
      try {
        PipelineOptions opt;
        opt.cfg = cfg;
        opt.seed = common.seed;
        const fs::path base = cache_dir.empty() ? fs::path(all_paths[i]).parent_path()
                                                : fs::path(cache_dir);
        opt.out_dir = (base / (fs::path(all_paths[i]).stem().string() + ".run")).string();
        majors[i] = run_pipeline_cached(all_paths[i], opt);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw Error(ErrorCode::numerical, all_paths[i] + ": " + errors[i]);
    }
  }

  std::vector<VideoMajors> gallery;
  for (std::size_t g = 0; g < gallery_paths.size(); ++g) {
    gallery.push_back({static_cast<int>(g), majors[query_paths.size() + g]});
  }

  RetrieveOptions ropt;
  ropt.reid_weight = cfg.reid_weight;
  ropt.face_weight = cfg.face_weight;
  ropt.query_update = cfg.query_update;
  ropt.match_threshold = cfg.query_match_threshold;
  ropt.delta = cfg.query_update_delta;

  std::ostringstream os;
  os << "query_video,rank,gallery_video,score,no_match\n";
  for (std::size_t q = 0; q < query_paths.size(); ++q) {
    const auto& query_majors = majors[q];
    if (query_majors.empty()) continue;
    const auto ranked = retrieve_videos(query_majors, gallery, ropt);
    const std::string qname = fs::path(query_paths[q]).stem().string();
    // One ranking per query video: best score over its major objects.
    std::map<int, RankedItem> best;
    for (const auto& list : ranked) {
      for (const auto& item : list) {
        auto it = best.find(item.gallery_video_id);
        if (it == best.end() || item.score > it->second.score) {
          best[item.gallery_video_id] = item;
        }
      }
    }
    std::vector<RankedItem> items;
    for (const auto& [_, item] : best) items.push_back(item);
    std::stable_sort(items.begin(), items.end(), [](const RankedItem& a, const RankedItem& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.gallery_video_id < b.gallery_video_id;
    });
    for (std::size_t r = 0; r < items.size(); ++r) {
      os << qname << "," << (r + 1) << ","
         << fs::path(gallery_paths[static_cast<std::size_t>(items[r].gallery_video_id)])
                .stem()
                .string()
         << "," << items[r].score << "," << (items[r].no_match ? 1 : 0) << "\n";
    }
  }
  atomic_write_text(out_path, os.str());
  std::cout << "wrote retrieval ranking to " << out_path << "\n";
  return 0;
}

int run_eval_mot(const std::string& gt_path, const std::string& tracks_path, double iou_min) {
  const GroundTruth gt = load_ground_truth_csv(gt_path);
  const auto tracks = load_tracks_csv(tracks_path);
  const MotReport report = clear_mot(gt, tracks, iou_min);
  std::cout << "MOTA " << report.mota << "\n";
  std::cout << "FP " << report.fp << " (" << report.fp_frac() << ")\n";
  std::cout << "FN " << report.fn << " (" << report.fn_frac() << ")\n";
  std::cout << "IDS " << report.ids << " (" << report.ids_frac() << ")\n";
  std::cout << "GT " << report.gt_total << "\n";
  return 0;
}

int run_eval_map(const std::string& gt_path, const std::string& dets_path, double iou_min) {
  const GroundTruth gt = load_ground_truth_csv(gt_path);
  const auto dets = load_detections_csv(dets_path);
  const ApReport report = average_precision(gt, dets, iou_min);
  for (const auto& [cls, ap] : report.per_class) {
    std::cout << "AP class " << cls << " " << ap << "\n";
  }
  std::cout << "mAP " << report.mean_ap << "\n";
  return 0;
}

int run_eval_rank(const std::string& ranked_path, const std::string& labels_path,
                  const std::vector<int>& ks) {
  // labels: CSV `video,identity`
  std::map<std::string, int> labels;
  {
    std::ifstream f(labels_path);
    if (!f) throw FormatError("cannot open labels: " + labels_path, 0);
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw FormatError("labels line " + std::to_string(line_no) + ": expected video,identity",
                          static_cast<std::uint64_t>(line_no));
      }
      const std::string video = line.substr(0, comma);
      if (video == "video") continue;  // header
      labels[video] = std::stoi(line.substr(comma + 1));
    }
  }

  // ranked CSV from `retrieve`: query_video,rank,gallery_video,score[,no_match]
  std::map<std::string, std::vector<std::pair<int, std::string>>> per_query;
  {
    std::ifstream f(ranked_path);
    if (!f) throw FormatError("cannot open ranking: " + ranked_path, 0);
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
      ++line_no;
      if (line.empty() || line.rfind("query_video", 0) == 0) continue;
      std::stringstream ss(line);
      std::string q, rank, g;
      std::getline(ss, q, ',');
      std::getline(ss, rank, ',');
      std::getline(ss, g, ',');
      per_query[q].emplace_back(std::stoi(rank), g);
    }
  }

  for (const auto& [q, items] : per_query) {
    const auto ql = labels.find(q);
    if (ql == labels.end()) {
      throw ConfigError("no label for query video '" + q + "'");
    }
    bool present = false;
    for (const auto& [rank, g] : items) {
      const auto gl = labels.find(g);
      if (g != q && gl != labels.end() && gl->second == ql->second) {
        present = true;
        break;
      }
    }
    if (!present) {
      throw ContractError("query '" + q + "' has no same-identity video in the gallery");
    }
  }

  for (int k : ks) {
    int hits = 0;
    int total = 0;
    for (const auto& [q, items] : per_query) {
      const int label = labels.at(q);
      ++total;
      int considered = 0;
      bool hit = false;
      std::vector<std::pair<int, std::string>> sorted = items;
      std::sort(sorted.begin(), sorted.end());
      for (const auto& [rank, g] : sorted) {
        if (g == q) continue;  // self
        if (++considered > k) break;
        const auto gl = labels.find(g);
        if (gl != labels.end() && gl->second == label) {
          hit = true;
          break;
        }
      }
      if (hit) ++hits;
    }
    std::cout << "rank-" << k << " "
              << (total > 0 ? static_cast<double>(hits) / total : 0.0) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajectory extraction and generic object re-identification for short videos"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic scenario");
  std::string sim_out;
  std::string sim_gt;
  ScenarioSpec spec;
  std::vector<std::string> sim_degrade, sim_faces, sim_classes, sim_sizes;
  std::vector<int> sim_cuts;
  sim->add_option("--out", sim_out, "output bundle file")->required();
  sim->add_option("--gt", sim_gt, "ground-truth CSV");
  sim->add_option("--objects", spec.n_objects, "object count")->required();
  sim->add_option("--frames", spec.n_frames, "frame count")->required();
  sim->add_option("--cuts", sim_cuts, "shot cut frames");
  sim->add_option("--dim", spec.appearance_dim, "appearance dimension");
  sim->add_option("--frame-size", spec.frame_size, "nominal frame edge, pixels");
  sim->add_option("--drift", spec.drift_rate, "appearance drift, radians/frame");
  sim->add_option("--noise", spec.noise_sigma, "background noise sigma");
  sim->add_option("--hist-jitter", spec.hist_jitter, "within-shot histogram jitter");
  std::uint64_t sim_seed = 1;
  sim->add_option("--seed", sim_seed, "scenario seed");
  sim->add_option("--degrade", sim_degrade, "obj:begin:end:gain")->take_all();
  sim->add_option("--face", sim_faces, "object index with a visible face")->take_all();
  sim->add_option("--class", sim_classes, "obj:class_id")->take_all();
  sim->add_option("--size", sim_sizes, "obj:w:h in pixels")->take_all();

  // fuse
  auto* fuse = app.add_subcommand("fuse", "temporal-fusion detection");
  std::string fuse_in, fuse_out;
  CommonOpts fuse_common;
  fuse->add_option("--in", fuse_in, "bundle file")->required();
  fuse->add_option("--out", fuse_out, "detections CSV")->required();
  add_common(fuse, fuse_common);

  // track
  auto* track = app.add_subcommand("track", "per-shot tracking");
  std::string track_in, track_dets, track_out;
  CommonOpts track_common;
  track->add_option("--in", track_in, "bundle file")->required();
  track->add_option("--dets", track_dets, "detections CSV (default: run fusion)");
  track->add_option("--out", track_out, "tracks CSV")->required();
  add_common(track, track_common);

  // reid
  auto* reid = app.add_subcommand("reid", "cross-shot linking and majors");
  std::string reid_in, reid_tracks, reid_out;
  CommonOpts reid_common;
  reid->add_option("--in", reid_in, "bundle file")->required();
  reid->add_option("--tracks", reid_tracks, "tracks CSV")->required();
  reid->add_option("--out-dir", reid_out, "output directory")->required();
  add_common(reid, reid_common, false);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "full run with manifest");
  std::string pipe_in, pipe_out, pipe_replay;
  CommonOpts pipe_common;
  pipe->add_option("--in", pipe_in, "bundle file");
  pipe->add_option("--out-dir", pipe_out, "output directory")->required();
  pipe->add_option("--replay", pipe_replay, "manifest to replay");
  add_common(pipe, pipe_common);

  // retrieve
  auto* retr = app.add_subcommand("retrieve", "cross-video retrieval");
  std::vector<std::string> retr_query, retr_gallery;
  std::string retr_out, retr_cache;
  CommonOpts retr_common;
  retr->add_option("--query", retr_query, "query bundle files")->required()->take_all();
  retr->add_option("--gallery", retr_gallery, "gallery files or directories")
      ->required()
      ->take_all();
  retr->add_option("--out", retr_out, "ranking CSV")->required();
  retr->add_option("--cache-dir", retr_cache, "per-video pipeline cache directory");
  add_common(retr, retr_common, false);

  // eval-mot / eval-map / eval-rank
  auto* emot = app.add_subcommand("eval-mot", "CLEAR-MOT metrics");
  std::string emot_gt, emot_tracks;
  double emot_iou = 0.5;
  emot->add_option("--gt", emot_gt, "ground-truth CSV")->required();
  emot->add_option("--tracks", emot_tracks, "tracks CSV")->required();
  emot->add_option("--iou", emot_iou, "match IoU threshold");

  auto* emap = app.add_subcommand("eval-map", "detection mAP");
  std::string emap_gt, emap_dets;
  double emap_iou = 0.5;
  emap->add_option("--gt", emap_gt, "ground-truth CSV")->required();
  emap->add_option("--dets", emap_dets, "detections CSV")->required();
  emap->add_option("--iou", emap_iou, "match IoU threshold");

  auto* erank = app.add_subcommand("eval-rank", "retrieval rank-k");
  std::string erank_ranked, erank_labels;
  std::vector<int> erank_ks{1};
  erank->add_option("--ranked", erank_ranked, "ranking CSV from retrieve")->required();
  erank->add_option("--labels", erank_labels, "labels CSV video,identity")->required();
  erank->add_option("--k", erank_ks, "k values")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      spec.seed = sim_seed;
      spec.shot_cuts = sim_cuts;
      return run_simulate(sim_out, sim_gt, spec, sim_degrade, sim_faces, sim_classes, sim_sizes);
    }
    if (fuse->parsed()) return run_fuse(fuse_in, fuse_out, load_config(fuse_common));
    if (track->parsed()) {
      return run_track(track_in, track_dets, track_out, load_config(track_common));
    }
    if (reid->parsed()) return run_reid(reid_in, reid_tracks, reid_out, load_config(reid_common));
    if (pipe->parsed()) {
      if (pipe_replay.empty() && pipe_in.empty()) {
        throw ConfigError("pipeline: need --in or --replay");
      }
      return run_pipeline_cmd(pipe_in, pipe_out, pipe_replay, pipe_common);
    }
    if (retr->parsed()) {
      return run_retrieve(retr_query, retr_gallery, retr_out, retr_cache, retr_common);
    }
    if (emot->parsed()) return run_eval_mot(emot_gt, emot_tracks, emot_iou);
    if (emap->parsed()) return run_eval_map(emap_gt, emap_dets, emap_iou);
    if (erank->parsed()) return run_eval_rank(erank_ranked, erank_labels, erank_ks);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
