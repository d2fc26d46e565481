// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "svreid/core/types.hpp"

namespace svreid {

enum class Category { person, nonperson };

const char* category_name(Category c);
Category parse_category(const std::string& s);

// Averaged, unit-norm appearance of one cross-shot trajectory.
struct TrajectoryFeature {
  int object_id = 0;
  std::vector<float> feature;  // unit norm
  Category category = Category::nonperson;
  int duration_frames = 0;
  double mean_area_frac = 0.0;
  std::vector<float> face;  // empty when no face was ever observed
};

struct QueryIdentity {
  int identity_id = 0;
  std::vector<std::vector<float>> bank;  // non-empty, unit vectors
};

struct QuerySet {
  std::vector<QueryIdentity> identities;
};

// Entry features sampled every `sample_stride` entries, averaged and
// unit-normalized; duration and mean area fraction cover all entries.
// Throws DegenerateInputError for an empty trajectory.
TrajectoryFeature trajectory_feature(const Trajectory& traj, int sample_stride, double frame_area,
                                     const std::set<int>& person_classes);

// lambda1 * reid + lambda2 * face when a face similarity exists, plain
// reid otherwise. lambda1 + lambda2 must be 1.
double person_similarity(double reid_sim, std::optional<double> face_sim, double lambda1,
                         double lambda2);

// Cosine of the two unit features; both must share the category.
double nonperson_similarity(const TrajectoryFeature& a, const TrajectoryFeature& b);

// Query-set update rule: identities whose best-of-bank similarity reaches
// match_threshold form the matched set; the feature is appended to the
// best-matching identity's bank iff the matched set is non-empty and
// mean(matched) - mean(unmatched) > delta (unmatched mean is 0 when every
// identity matched). Returns whether an append happened. Banks only grow.
bool update_query_set(QuerySet& q, const std::vector<float>& gallery_feature,
                      double match_threshold, double delta);

struct LinkResult {
  std::vector<Trajectory> trajectories;
  QuerySet query_set;
};

// Greedy agglomerative linking in descending pairwise similarity order; a
// link is taken iff similarity >= link_threshold, the classes agree and
// the merged tracklets never share a frame. The query set is seeded with
// the tracklets present at the video start and threaded through
// update_query_set as the remaining tracklets are accessed in shot order.
LinkResult link_tracklets(const std::vector<Tracklet>& tracklets, double link_threshold,
                          double query_match_threshold, double delta);

// Trajectories passing both the duration and the area threshold; when
// none do, the single best by (duration fraction x mean area fraction).
std::vector<TrajectoryFeature> select_major_objects(const std::vector<TrajectoryFeature>& trajs,
                                                    double duration_frac, double area_frac,
                                                    int video_length);

struct VideoMajors {
  int video_id = 0;
  std::vector<TrajectoryFeature> majors;
};

struct RankedItem {
  int gallery_video_id = 0;
  double score = 0.0;
  bool no_match = false;
};

struct RetrieveOptions {
  double reid_weight = 0.5;
  double face_weight = 0.5;
  // Appends matching gallery features to the query banks as the gallery is
  // scanned in ascending video order.
  bool query_update = false;
  double match_threshold = 0.7;
  double delta = 0.1;
};

// Per query major, gallery videos ranked by descending best-pair
// similarity (person branch for person queries, cosine otherwise); ties
// break by ascending video id. Scores below match_threshold are flagged
// no_match. Throws ConfigError on an empty gallery.
std::vector<std::vector<RankedItem>> retrieve_videos(
    const std::vector<TrajectoryFeature>& query_majors, const std::vector<VideoMajors>& gallery,
    const RetrieveOptions& opt);

}  // namespace svreid
