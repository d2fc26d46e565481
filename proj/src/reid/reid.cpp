// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/reid/reid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svreid/core/errors.hpp"
#include "svreid/core/ops.hpp"
#include "svreid/kernels/kernels.hpp"

namespace svreid {

namespace {

std::vector<float> mean_unit_vector(const std::vector<const std::vector<float>*>& parts,
                                    const char* what) {
  std::size_t dim = 0;
  for (const auto* p : parts) {
    if (!p->empty()) {
      dim = p->size();
      break;
    }
  }
  if (dim == 0) {
    throw DegenerateInputError(std::string(what) + ": no feature vectors to average");
  }
  std::vector<double> acc(dim, 0.0);
  int count = 0;
  for (const auto* p : parts) {
    if (p->empty()) continue;
    if (p->size() != dim) {
      throw DimensionError(std::string(what) + ": feature dimensions differ");
    }
    for (std::size_t i = 0; i < dim; ++i) acc[i] += (*p)[i];
    ++count;
  }
  std::vector<float> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = static_cast<float>(acc[i] / static_cast<double>(count));
  }
  normalize_vector(out);
  return out;
}

std::vector<float> tracklet_mean_feature(const Tracklet& t) {
  std::vector<const std::vector<float>*> parts;
  for (const auto& e : t.entries) parts.push_back(&e.feature);
  return mean_unit_vector(parts, "tracklet feature");
}

double unit_cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) {
    throw DimensionError("cosine of unit features: dimensions differ");
  }
  return std::clamp(static_cast<double>(kernels::dot(a.data(), b.data(), a.size())), -1.0, 1.0);
}

}  // namespace

const char* category_name(Category c) {
  return c == Category::person ? "person" : "nonperson";
}

Category parse_category(const std::string& s) {
  if (s == "person") return Category::person;
  if (s == "nonperson") return Category::nonperson;
  throw ConfigError("unknown category '" + s + "'");
}

TrajectoryFeature trajectory_feature(const Trajectory& traj, int sample_stride, double frame_area,
                                     const std::set<int>& person_classes) {
  if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
  std::vector<const TrackletEntry*> entries;
  for (const auto& t : traj.tracklets) {
    for (const auto& e : t.entries) entries.push_back(&e);
  }
  if (entries.empty()) {
    throw DegenerateInputError("trajectory_feature: empty trajectory");
  }
  std::sort(entries.begin(), entries.end(), [](const TrackletEntry* a, const TrackletEntry* b) {
    return a->frame_index < b->frame_index;
  });

  std::vector<const std::vector<float>*> sampled;
  std::vector<const std::vector<float>*> sampled_faces;
  for (std::size_t i = 0; i < entries.size(); i += static_cast<std::size_t>(sample_stride)) {
    sampled.push_back(&entries[i]->feature);
    if (!entries[i]->face_feature.empty()) {
      sampled_faces.push_back(&entries[i]->face_feature);
    }
  }

  TrajectoryFeature out;
  out.object_id = traj.object_id;
  out.feature = mean_unit_vector(sampled, "trajectory feature");
  out.duration_frames = static_cast<int>(entries.size());
  double area = 0.0;
  for (const auto* e : entries) area += static_cast<double>(e->box.area());
  out.mean_area_frac = frame_area > 0.0 ? area / static_cast<double>(entries.size()) / frame_area : 0.0;
  const int class_id = traj.tracklets.empty() ? 0 : traj.tracklets.front().class_id;
  out.category = person_classes.count(class_id) > 0 ? Category::person : Category::nonperson;
  if (!sampled_faces.empty()) {
    out.face = mean_unit_vector(sampled_faces, "trajectory face feature");
  }
  return out;
}

double person_similarity(double reid_sim, std::optional<double> face_sim, double lambda1,
                         double lambda2) {
  if (std::fabs(lambda1 + lambda2 - 1.0) > 1e-9) {
    throw ConfigError("person_similarity: lambda1 + lambda2 must equal 1");
  }
  if (!face_sim.has_value()) return reid_sim;
  return lambda1 * reid_sim + lambda2 * *face_sim;
}

double nonperson_similarity(const TrajectoryFeature& a, const TrajectoryFeature& b) {
  if (a.category != b.category) {
    throw ContractError("nonperson_similarity: category mismatch");
  }
  return unit_cosine(a.feature, b.feature);
}

bool update_query_set(QuerySet& q, const std::vector<float>& gallery_feature,
                      double match_threshold, double delta) {
  if (q.identities.empty()) return false;

  std::vector<double> sims(q.identities.size(), -1.0);
  for (std::size_t i = 0; i < q.identities.size(); ++i) {
    for (const auto& f : q.identities[i].bank) {
      sims[i] = std::max(sims[i], unit_cosine(f, gallery_feature));
    }
  }

  double matched_sum = 0.0;
  double unmatched_sum = 0.0;
  int matched_n = 0;
  int unmatched_n = 0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (sims[i] >= match_threshold) {
      matched_sum += sims[i];
      ++matched_n;
    } else {
      unmatched_sum += sims[i];
      ++unmatched_n;
    }
    if (sims[i] > sims[best]) best = i;
  }
  if (matched_n == 0) return false;
  const double matched_mean = matched_sum / matched_n;
  const double unmatched_mean = unmatched_n > 0 ? unmatched_sum / unmatched_n : 0.0;
  if (matched_mean - unmatched_mean > delta) {
    q.identities[best].bank.push_back(gallery_feature);
    return true;
  }
  return false;
}

LinkResult link_tracklets(const std::vector<Tracklet>& tracklets, double link_threshold,
                          double query_match_threshold, double delta) {
  const std::size_t n = tracklets.size();
  LinkResult result;
  if (n == 0) return result;

  std::vector<std::vector<float>> features(n);
  std::vector<std::vector<int>> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    features[i] = tracklet_mean_feature(tracklets[i]);
    for (const auto& e : tracklets[i].entries) frames[i].push_back(e.frame_index);
    std::sort(frames[i].begin(), frames[i].end());
  }

  // Greedy agglomeration on a union-find; component frame sets stay sorted
  // so the co-occurrence veto is a merge-style intersection test.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::vector<int>> comp_frames = frames;

  struct Pair {
    double sim;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (tracklets[i].class_id != tracklets[j].class_id) continue;
      const double s = unit_cosine(features[i], features[j]);
      if (s >= link_threshold) pairs.push_back({s, i, j});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  for (const auto& p : pairs) {
    const std::size_t ra = find(p.a);
    const std::size_t rb = find(p.b);
    if (ra == rb) continue;
    const auto& fa = comp_frames[ra];
    const auto& fb = comp_frames[rb];
    bool overlap = false;
    for (std::size_t i = 0, j = 0; i < fa.size() && j < fb.size();) {
      if (fa[i] == fb[j]) {
        overlap = true;
        break;
      }
      fa[i] < fb[j] ? ++i : ++j;
    }
    if (overlap) continue;  // the same object cannot appear twice in one frame
    std::vector<int> merged;
    merged.reserve(fa.size() + fb.size());
    std::merge(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(merged));
    parent[rb] = ra;
    comp_frames[ra] = std::move(merged);
  }

  // Assemble trajectories, ordered by first appearance.
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[find(i)].push_back(i);
  struct Group {
    int first_frame;
    std::vector<std::size_t> tracklet_indices;
  };
  std::vector<Group> groups;
  for (std::size_t r = 0; r < n; ++r) {
    if (members[r].empty()) continue;
    int first = frames[members[r][0]].empty() ? 0 : frames[members[r][0]][0];
    for (std::size_t idx : members[r]) {
      if (!frames[idx].empty()) first = std::min(first, frames[idx][0]);
    }
    groups.push_back({first, members[r]});
  }
  std::sort(groups.begin(), groups.end(), [&](const Group& a, const Group& b) {
    if (a.first_frame != b.first_frame) return a.first_frame < b.first_frame;
    return a.tracklet_indices[0] < b.tracklet_indices[0];
  });
  int next_object = 0;
  for (auto& g : groups) {
    Trajectory traj;
    traj.object_id = next_object++;
    std::sort(g.tracklet_indices.begin(), g.tracklet_indices.end(),
              [&](std::size_t a, std::size_t b) {
                const int fa = frames[a].empty() ? 0 : frames[a][0];
                const int fb = frames[b].empty() ? 0 : frames[b][0];
                if (fa != fb) return fa < fb;
                return a < b;
              });
    for (std::size_t idx : g.tracklet_indices) traj.tracklets.push_back(tracklets[idx]);
    result.trajectories.push_back(std::move(traj));
  }

  // Query-set threading: the tracklets present at the video start seed the
  // identities; the rest are accessed in shot order.
  int video_start = frames.empty() || frames[0].empty() ? 0 : frames[0][0];
  for (const auto& f : frames) {
    if (!f.empty()) video_start = std::min(video_start, f[0]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tracklets[a].shot_id != tracklets[b].shot_id) {
      return tracklets[a].shot_id < tracklets[b].shot_id;
    }
    const int fa = frames[a].empty() ? 0 : frames[a][0];
    const int fb = frames[b].empty() ? 0 : frames[b][0];
    if (fa != fb) return fa < fb;
    return tracklets[a].track_id < tracklets[b].track_id;
  });
  int next_identity = 0;
  for (std::size_t idx : order) {
    const bool at_start = !frames[idx].empty() && frames[idx][0] == video_start;
    if (at_start) {
      result.query_set.identities.push_back({next_identity++, {features[idx]}});
    } else {
      update_query_set(result.query_set, features[idx], query_match_threshold, delta);
    }
  }
  return result;
}

std::vector<TrajectoryFeature> select_major_objects(const std::vector<TrajectoryFeature>& trajs,
                                                    double duration_frac, double area_frac,
                                                    int video_length) {
  std::vector<TrajectoryFeature> out;
  if (trajs.empty()) return out;
  const double min_duration = duration_frac * static_cast<double>(video_length);
  for (const auto& t : trajs) {
    if (static_cast<double>(t.duration_frames) >= min_duration && t.mean_area_frac >= area_frac) {
      out.push_back(t);
    }
  }
  if (!out.empty()) return out;

  // Fallback: the single best trajectory by duration x area score.
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const double score = (video_length > 0
                              ? static_cast<double>(trajs[i].duration_frames) / video_length
                              : 0.0) *
                         trajs[i].mean_area_frac;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  out.push_back(trajs[best]);
  return out;
}

namespace {

double pair_similarity(const TrajectoryFeature& q, const std::vector<float>& q_bank_best_source,
                       const TrajectoryFeature& g, const RetrieveOptions& opt) {
  const double reid_sim = unit_cosine(q_bank_best_source, g.feature);
  if (q.category == Category::person) {
    std::optional<double> face_sim;
    if (!q.face.empty() && !g.face.empty()) {
      face_sim = unit_cosine(q.face, g.face);
    }
    return person_similarity(reid_sim, face_sim, opt.reid_weight, opt.face_weight);
  }
  return reid_sim;
}

}  // namespace

std::vector<std::vector<RankedItem>> retrieve_videos(
    const std::vector<TrajectoryFeature>& query_majors, const std::vector<VideoMajors>& gallery,
    const RetrieveOptions& opt) {
  if (gallery.empty()) {
    throw ConfigError("retrieve_videos: empty gallery");
  }
  std::vector<VideoMajors> sorted_gallery = gallery;
  std::sort(sorted_gallery.begin(), sorted_gallery.end(),
            [](const VideoMajors& a, const VideoMajors& b) { return a.video_id < b.video_id; });

  // Shared query set per category: every query major is one identity, so
  // the delta rule contrasts the matched identities against the rest.
  QuerySet sets[2];
  std::vector<std::size_t> identity_index(query_majors.size(), 0);
  for (std::size_t qi = 0; qi < query_majors.size(); ++qi) {
    QuerySet& set = sets[query_majors[qi].category == Category::person ? 0 : 1];
    identity_index[qi] = set.identities.size();
    set.identities.push_back({static_cast<int>(qi), {query_majors[qi].feature}});
  }

  std::vector<std::vector<RankedItem>> ranked(query_majors.size());
  for (const auto& video : sorted_gallery) {
    for (std::size_t qi = 0; qi < query_majors.size(); ++qi) {
      const TrajectoryFeature& q = query_majors[qi];
      const QuerySet& set = sets[q.category == Category::person ? 0 : 1];
      const auto& bank = set.identities[identity_index[qi]].bank;
      double best = -1.0;
      bool comparable = false;
      for (const auto& major : video.majors) {
        if (major.category != q.category) continue;
        comparable = true;
        for (const auto& bank_feature : bank) {
          best = std::max(best, pair_similarity(q, bank_feature, major, opt));
        }
      }
      RankedItem item;
      item.gallery_video_id = video.video_id;
      item.score = comparable ? best : -1.0;
      item.no_match = !comparable || best < opt.match_threshold;
      ranked[qi].push_back(item);
    }
    if (opt.query_update) {
      // Scores above were taken before this video's features entered any bank.
      for (const auto& major : video.majors) {
        QuerySet& set = sets[major.category == Category::person ? 0 : 1];
        update_query_set(set, major.feature, opt.match_threshold, opt.delta);
      }
    }
  }

  for (auto& list : ranked) {
    std::stable_sort(list.begin(), list.end(), [](const RankedItem& a, const RankedItem& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.gallery_video_id < b.gallery_video_id;
    });
  }
  return ranked;
}

}  // namespace svreid
