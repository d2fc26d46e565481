// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/reid/reid.hpp"

using namespace svreid;

namespace {

std::vector<float> unit(std::initializer_list<float> values) {
  std::vector<float> v(values);
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  const float inv = static_cast<float>(1.0 / std::sqrt(sq));
  for (auto& x : v) x *= inv;
  return v;
}

Tracklet tracklet_with(int shot, int track, const std::vector<int>& frames,
                       const std::vector<float>& feature, int class_id = 0) {
  Tracklet t;
  t.shot_id = shot;
  t.track_id = track;
  t.class_id = class_id;
  for (int f : frames) {
    TrackletEntry e;
    e.frame_index = f;
    e.box = {100.0f, 100.0f, 50.0f, 50.0f};
    e.feature = feature;
    t.entries.push_back(e);
  }
  return t;
}

Trajectory traj_of(std::vector<Tracklet> tracklets) {
  Trajectory traj;
  traj.tracklets = std::move(tracklets);
  return traj;
}

TrajectoryFeature feature_of(int id, const std::vector<float>& f, Category cat, int duration,
                             double area) {
  TrajectoryFeature t;
  t.object_id = id;
  t.feature = f;
  t.category = cat;
  t.duration_frames = duration;
  t.mean_area_frac = area;
  return t;
}

}  // namespace

TEST_CASE("trajectory_feature: identical vectors average to themselves") {
  const auto v = unit({1.0f, 2.0f, 2.0f});
  const Trajectory traj = traj_of({tracklet_with(0, 1, {0, 1, 2}, v)});
  const TrajectoryFeature f = trajectory_feature(traj, 1, 1000.0 * 1000.0, {});
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(f.feature[i] == doctest::Approx(v[i]).epsilon(1e-6));
  }
  CHECK(f.duration_frames == 3);
  CHECK(f.mean_area_frac == doctest::Approx(2500.0 / 1e6));
}

TEST_CASE("trajectory_feature: orthonormal pair averages to the diagonal") {
  Tracklet t = tracklet_with(0, 1, {0}, {1.0f, 0.0f});
  TrackletEntry e;
  e.frame_index = 1;
  e.box = {100.0f, 100.0f, 50.0f, 50.0f};
  e.feature = {0.0f, 1.0f};
  t.entries.push_back(e);
  const TrajectoryFeature f = trajectory_feature(traj_of({t}), 1, 1e6, {});
  const float inv_sqrt2 = 1.0f / std::sqrt(2.0f);
  CHECK(f.feature[0] == doctest::Approx(inv_sqrt2));
  CHECK(f.feature[1] == doctest::Approx(inv_sqrt2));
}

TEST_CASE("trajectory_feature: stride 10 over 31 entries samples {0,10,20,30}") {
  Tracklet t;
  t.shot_id = 0;
  t.track_id = 1;
  for (int i = 0; i < 31; ++i) {
    TrackletEntry e;
    e.frame_index = i;
    e.box = {10.0f, 10.0f, 5.0f, 5.0f};
    e.feature = {static_cast<float>(i), 1.0f};
    t.entries.push_back(e);
  }
  const TrajectoryFeature f = trajectory_feature(traj_of({t}), 10, 1e6, {});
  // Index-set oracle: mean of entries {0,10,20,30}, then normalized.
  double m0 = (0.0 + 10.0 + 20.0 + 30.0) / 4.0;
  double m1 = 1.0;
  const double norm = std::sqrt(m0 * m0 + m1 * m1);
  CHECK(f.feature[0] == doctest::Approx(m0 / norm).epsilon(1e-6));
  CHECK(f.feature[1] == doctest::Approx(m1 / norm).epsilon(1e-6));
  CHECK(f.duration_frames == 31);
}

TEST_CASE("trajectory_feature: empty trajectory is an error; category table works") {
  CHECK_THROWS_AS(trajectory_feature(Trajectory{}, 1, 1e6, {}), DegenerateInputError);
  const Trajectory person = traj_of({tracklet_with(0, 1, {0}, unit({1.0f, 1.0f}), 7)});
  CHECK(trajectory_feature(person, 1, 1e6, {7}).category == Category::person);
  CHECK(trajectory_feature(person, 1, 1e6, {3}).category == Category::nonperson);
}

TEST_CASE("person_similarity branches on face presence") {
  CHECK(person_similarity(0.8, std::nullopt, 0.5, 0.5) == doctest::Approx(0.8));
  CHECK(person_similarity(0.8, 0.6, 0.5, 0.5) == doctest::Approx(0.7));
  CHECK(person_similarity(0.8, 0.123, 1.0, 0.0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(person_similarity(0.8, 0.6, 0.7, 0.7), ConfigError);
}

TEST_CASE("person_similarity stays within the input bracket") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double reid = u(rng);
    const double face = u(rng);
    const double l1 = u(rng);
    const double s = person_similarity(reid, face, l1, 1.0 - l1);
    CHECK(s >= std::min(reid, face) - 1e-12);
    CHECK(s <= std::max(reid, face) + 1e-12);
  }
}

TEST_CASE("nonperson_similarity is cosine with a category guard") {
  const auto a = feature_of(0, unit({1.0f, 0.0f}), Category::nonperson, 10, 0.1);
  const auto b = feature_of(1, unit({1.0f, 0.0f}), Category::nonperson, 10, 0.1);
  const auto c = feature_of(2, unit({0.0f, 1.0f}), Category::nonperson, 10, 0.1);
  auto p = feature_of(3, unit({1.0f, 0.0f}), Category::person, 10, 0.1);
  CHECK(nonperson_similarity(a, b) == doctest::Approx(1.0));
  CHECK(nonperson_similarity(a, c) == doctest::Approx(0.0));
  CHECK_THROWS_AS(nonperson_similarity(a, p), ContractError);
}

TEST_CASE("nonperson_similarity recovers the synthetic drift angle") {
  // Drift is a rotation in a fixed 2-plane: cos(theta) exactly.
  const double theta = 0.35;
  const auto base = unit({1.0f, 0.0f, 0.0f});
  const std::vector<float> drifted{static_cast<float>(std::cos(theta)),
                                   static_cast<float>(std::sin(theta)), 0.0f};
  const auto a = feature_of(0, base, Category::nonperson, 10, 0.1);
  const auto b = feature_of(1, drifted, Category::nonperson, 10, 0.1);
  CHECK(nonperson_similarity(a, b) == doctest::Approx(std::cos(theta)).epsilon(1e-4));
}

TEST_CASE("update_query_set: the three specified cases") {
  // Identical feature, single identity, empty unmatched set.
  QuerySet q;
  q.identities.push_back({0, {unit({1.0f, 0.0f})}});
  CHECK(update_query_set(q, unit({1.0f, 0.0f}), 0.7, 0.5));
  CHECK(q.identities[0].bank.size() == 2);

  // Orthogonal feature: no match, no change.
  QuerySet q2;
  q2.identities.push_back({0, {unit({1.0f, 0.0f})}});
  CHECK(!update_query_set(q2, unit({0.0f, 1.0f}), 0.7, 0.0));
  CHECK(q2.identities[0].bank.size() == 1);

  // Two identities with sims {0.9, 0.4}: delta decides.
  const std::vector<float> g{0.9f, std::sqrt(1.0f - 0.81f)};
  const std::vector<float> id0{1.0f, 0.0f};
  const float c = 0.4f / 0.9f;  // makes cos(id1, g) = 0.4 with id1 below
  std::vector<float> id1{c, -std::sqrt(1.0f - c * c)};
  // cos(id1, g) = 0.9c - sqrt(1-0.81)*sqrt(1-c^2)
  const double sim1 = 0.9 * c - std::sqrt(1.0 - 0.81) * std::sqrt(1.0 - c * c);
  QuerySet q3;
  q3.identities.push_back({0, {id0}});
  q3.identities.push_back({1, {id1}});
  const double matched_minus_unmatched = 0.9 - sim1;
  CHECK(!update_query_set(q3, g, 0.7, matched_minus_unmatched + 0.01));
  CHECK(q3.identities[0].bank.size() == 1);
  CHECK(update_query_set(q3, g, 0.7, matched_minus_unmatched - 0.01));
  CHECK(q3.identities[0].bank.size() == 2);  // appended to the best match
  CHECK(q3.identities[1].bank.size() == 1);

  QuerySet empty;
  CHECK(!update_query_set(empty, unit({1.0f, 0.0f}), 0.7, 0.1));
}

TEST_CASE("update_query_set never shrinks banks") {
  std::mt19937 rng(43);
  QuerySet q;
  for (int i = 0; i < 4; ++i) {
    auto v = oracle::random_vector(rng, 8);
    double sq = 0.0;
    for (float x : v) sq += static_cast<double>(x) * x;
    for (auto& x : v) x = static_cast<float>(x / std::sqrt(sq));
    q.identities.push_back({i, {v}});
  }
  std::vector<std::size_t> sizes;
  for (const auto& id : q.identities) sizes.push_back(id.bank.size());
  for (int rep = 0; rep < 200; ++rep) {
    auto g = oracle::random_vector(rng, 8);
    double sq = 0.0;
    for (float x : g) sq += static_cast<double>(x) * x;
    for (auto& x : g) x = static_cast<float>(x / std::sqrt(sq));
    update_query_set(q, g, 0.5, 0.05);
    for (std::size_t i = 0; i < q.identities.size(); ++i) {
      CHECK(q.identities[i].bank.size() >= sizes[i]);
      sizes[i] = q.identities[i].bank.size();
    }
  }
}

TEST_CASE("link_tracklets: single, cross-shot merge, overlap veto") {
  const auto v = unit({1.0f, 1.0f, 0.0f});

  const LinkResult single = link_tracklets({tracklet_with(0, 1, {0, 1}, v)}, 0.6, 0.7, 0.1);
  CHECK(single.trajectories.size() == 1);

  const LinkResult merged = link_tracklets(
      {tracklet_with(0, 1, {0, 1, 2}, v), tracklet_with(1, 2, {10, 11}, v)}, 0.6, 0.7, 0.1);
  REQUIRE(merged.trajectories.size() == 1);
  CHECK(merged.trajectories[0].tracklets.size() == 2);

  // Same frames in both tracklets: the co-occurrence veto splits them.
  const LinkResult vetoed = link_tracklets(
      {tracklet_with(0, 1, {0, 1}, v), tracklet_with(0, 2, {1, 2}, v)}, 0.6, 0.7, 0.1);
  CHECK(vetoed.trajectories.size() == 2);
}

TEST_CASE("link_tracklets: threshold and class guards; partition property") {
  const auto a = unit({1.0f, 0.0f});
  const auto b = unit({0.0f, 1.0f});
  const LinkResult below = link_tracklets(
      {tracklet_with(0, 1, {0}, a), tracklet_with(1, 2, {5}, b)}, 0.6, 0.7, 0.1);
  CHECK(below.trajectories.size() == 2);

  const LinkResult classes = link_tracklets(
      {tracklet_with(0, 1, {0}, a, 0), tracklet_with(1, 2, {5}, a, 1)}, 0.6, 0.7, 0.1);
  CHECK(classes.trajectories.size() == 2);

  // Random instances: every tracklet lands in exactly one trajectory.
  std::mt19937 rng(44);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Tracklet> tracklets;
    const int n = 2 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      auto v = oracle::random_vector(rng, 4);
      double sq = 0.0;
      for (float x : v) sq += static_cast<double>(x) * x;
      if (sq == 0.0) v[0] = 1.0f;
      for (auto& x : v) x = static_cast<float>(x / std::sqrt(std::max(sq, 1e-12)));
      const int start = static_cast<int>(rng() % 40);
      tracklets.push_back(tracklet_with(static_cast<int>(rng() % 3), i,
                                        {start, start + 1, start + 2}, v));
    }
    const LinkResult result = link_tracklets(tracklets, 0.6, 0.7, 0.1);
    std::size_t total = 0;
    for (const auto& traj : result.trajectories) total += traj.tracklets.size();
    CHECK(total == tracklets.size());
    // No trajectory holds two tracklets sharing a frame.
    for (const auto& traj : result.trajectories) {
      std::set<int> frames;
      for (const auto& t : traj.tracklets) {
        for (const auto& e : t.entries) {
          CHECK(frames.insert(e.frame_index).second);
        }
      }
    }
  }
}

TEST_CASE("link_tracklets threads the query set in shot order") {
  const auto v = unit({1.0f, 0.2f});
  const auto w = unit({0.1f, 1.0f});
  // Two identities at the video start, one matching gallery tracklet later.
  const LinkResult result = link_tracklets(
      {tracklet_with(0, 1, {0, 1}, v), tracklet_with(0, 2, {0, 1}, w),
       tracklet_with(1, 3, {10, 11}, v)},
      0.6, 0.7, 0.1);
  REQUIRE(result.query_set.identities.size() == 2);
  // The gallery tracklet matched identity 0 and was appended to its bank.
  CHECK(result.query_set.identities[0].bank.size() == 2);
  CHECK(result.query_set.identities[1].bank.size() == 1);
}

TEST_CASE("select_major_objects: thresholds and fallback") {
  const auto big = feature_of(0, unit({1.0f, 0.0f}), Category::nonperson, 100, 0.10);
  const auto small = feature_of(1, unit({0.0f, 1.0f}), Category::nonperson, 1, 0.001);
  const auto mid = feature_of(2, unit({1.0f, 1.0f}), Category::nonperson, 40, 0.05);

  const auto selected = select_major_objects({big, small, mid}, 0.2, 0.02, 100);
  REQUIRE(selected.size() == 2);
  CHECK(selected[0].object_id == 0);
  CHECK(selected[1].object_id == 2);

  // Nothing qualifies: the best-scoring one comes back.
  const auto fallback = select_major_objects({small, mid}, 0.9, 0.5, 100);
  REQUIRE(fallback.size() == 1);
  CHECK(fallback[0].object_id == 2);

  CHECK(select_major_objects({}, 0.2, 0.02, 100).empty());
}

TEST_CASE("select_major_objects output is a subset and never empty") {
  std::mt19937 rng(45);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<TrajectoryFeature> trajs;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      trajs.push_back(feature_of(i, unit({1.0f, static_cast<float>(i)}), Category::nonperson,
                                 static_cast<int>(rng() % 100),
                                 static_cast<double>(rng() % 100) / 1000.0));
    }
    const auto selected = select_major_objects(trajs, 0.3, 0.03, 100);
    CHECK(!selected.empty());
    for (const auto& s : selected) {
      CHECK(s.object_id >= 0);
      CHECK(s.object_id < n);
    }
  }
}

TEST_CASE("retrieve_videos: exact copy ranks first with score 1") {
  const auto q = feature_of(0, unit({1.0f, 2.0f, 0.5f}), Category::nonperson, 50, 0.1);
  std::vector<VideoMajors> gallery;
  gallery.push_back({0, {feature_of(0, unit({0.3f, -1.0f, 0.2f}), Category::nonperson, 50, 0.1)}});
  gallery.push_back({1, {q}});
  gallery.push_back({2, {feature_of(0, unit({-1.0f, 0.1f, 0.9f}), Category::nonperson, 50, 0.1)}});

  RetrieveOptions opt;
  const auto ranked = retrieve_videos({q}, gallery, opt);
  REQUIRE(ranked.size() == 1);
  CHECK(ranked[0][0].gallery_video_id == 1);
  CHECK(ranked[0][0].score == doctest::Approx(1.0));
  CHECK(!ranked[0][0].no_match);

  CHECK_THROWS_AS(retrieve_videos({q}, {}, opt), ConfigError);
}

TEST_CASE("retrieve_videos: ranking follows descending drift cosine") {
  // Gallery features drift by known angles; ranking must follow cos(theta).
  const auto base = unit({1.0f, 0.0f, 0.0f});
  const double angles[5] = {1.2, 0.3, 0.9, 0.05, 0.6};
  std::vector<VideoMajors> gallery;
  for (int v = 0; v < 5; ++v) {
    const std::vector<float> f{static_cast<float>(std::cos(angles[v])),
                               static_cast<float>(std::sin(angles[v])), 0.0f};
    gallery.push_back({v, {feature_of(0, f, Category::nonperson, 50, 0.1)}});
  }
  RetrieveOptions opt;
  const auto ranked =
      retrieve_videos({feature_of(0, base, Category::nonperson, 50, 0.1)}, gallery, opt);
  const std::vector<int> expected{3, 1, 4, 2, 0};  // ascending angle
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(ranked[0][i].gallery_video_id == expected[i]);
  }
}

TEST_CASE("retrieve_videos: person branch uses the face when both sides have one") {
  auto q = feature_of(0, unit({1.0f, 0.0f}), Category::person, 50, 0.1);
  q.face = unit({0.0f, 1.0f});
  auto g_face = feature_of(0, unit({0.0f, 1.0f}), Category::person, 50, 0.1);
  g_face.face = q.face;  // same face, different clothes: reid 0, face 1
  auto g_noface = feature_of(0, unit({1.0f, 0.0f}), Category::person, 50, 0.1);

  RetrieveOptions opt;
  opt.reid_weight = 0.5;
  opt.face_weight = 0.5;
  const auto ranked = retrieve_videos({q}, {{0, {g_face}}, {1, {g_noface}}}, opt);
  // Face match: 0.5*0 + 0.5*1 = 0.5; no-face video: plain reid 1.0.
  CHECK(ranked[0][0].gallery_video_id == 1);
  CHECK(ranked[0][0].score == doctest::Approx(1.0));
  CHECK(ranked[0][1].score == doctest::Approx(0.5));
}

TEST_CASE("retrieve_videos: no same-category major flags no_match") {
  const auto q = feature_of(0, unit({1.0f, 0.0f}), Category::person, 50, 0.1);
  const auto g = feature_of(0, unit({1.0f, 0.0f}), Category::nonperson, 50, 0.1);
  RetrieveOptions opt;
  const auto ranked = retrieve_videos({q}, {{0, {g}}}, opt);
  CHECK(ranked[0][0].no_match);
  CHECK(ranked[0][0].score == doctest::Approx(-1.0));
}

TEST_CASE("retrieve_videos: query update recovers progressive drift") {
  // Videos drift further per id; with updates the bank follows the drift.
  const int dim = 16;
  std::vector<float> base(dim, 0.0f);
  base[0] = 1.0f;
  std::vector<float> axis(dim, 0.0f);
  axis[1] = 1.0f;
  auto drifted = [&](double theta) {
    std::vector<float> f(dim, 0.0f);
    f[0] = static_cast<float>(std::cos(theta));
    f[1] = static_cast<float>(std::sin(theta));
    return f;
  };
  std::vector<VideoMajors> gallery;
  for (int v = 0; v < 5; ++v) {
    gallery.push_back(
        {v, {feature_of(0, drifted(0.35 * (v + 1)), Category::nonperson, 50, 0.1)}});
  }

  RetrieveOptions without;
  without.query_update = false;
  RetrieveOptions with;
  with.query_update = true;
  with.match_threshold = 0.7;
  with.delta = 0.1;

  const auto q = feature_of(0, base, Category::nonperson, 50, 0.1);
  const auto r_without = retrieve_videos({q}, gallery, without);
  const auto r_with = retrieve_videos({q}, gallery, with);

  // Last video drifted 1.75 rad: nearly orthogonal without updates.
  double score_far_without = 0.0;
  double score_far_with = 0.0;
  for (const auto& item : r_without[0]) {
    if (item.gallery_video_id == 4) score_far_without = item.score;
  }
  for (const auto& item : r_with[0]) {
    if (item.gallery_video_id == 4) score_far_with = item.score;
  }
  CHECK(score_far_without == doctest::Approx(std::cos(1.75)).epsilon(1e-4));
  CHECK(score_far_with == doctest::Approx(std::cos(0.35)).epsilon(1e-4));
}
