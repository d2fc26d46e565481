// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/tracker/assignment.hpp"
#include "svreid/tracker/cpsn.hpp"
#include "svreid/tracker/kalman.hpp"
#include "svreid/tracker/shots.hpp"
#include "svreid/tracker/tracker.hpp"

using namespace svreid;

namespace {

FeatureCrop crop_from(const FeatureMap& data) {
  FeatureCrop crop;
  crop.data = data;
  crop.spatial.w = static_cast<float>(data.width());
  crop.spatial.h = static_cast<float>(data.height());
  return crop;
}

FeatureCrop random_crop(std::mt19937& rng, int c, int h, int w) {
  return crop_from(FeatureMap::from_values(
      c, h, w, oracle::random_vector(rng, static_cast<std::size_t>(c) * h * w)));
}

// Crop whose every cell is a positive multiple of directions drawn from a
// shared orthonormal-ish pool; cross-scale top-k self-entries are exact 1s.
FeatureCrop pooled_direction_crop(std::mt19937& rng, const std::vector<std::vector<float>>& dirs,
                                  int h, int w) {
  const int c = static_cast<int>(dirs[0].size());
  FeatureMap m(c, h, w);
  std::uniform_real_distribution<float> gain(0.5f, 2.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto& d = dirs[rng() % dirs.size()];
      const float g = gain(rng);
      for (int cc = 0; cc < c; ++cc) m.at(cc, y, x) = g * d[static_cast<std::size_t>(cc)];
    }
  }
  return crop_from(m);
}

std::vector<std::vector<float>> orthonormal_dirs(int dim, int count) {
  std::vector<std::vector<float>> dirs;
  for (int i = 0; i < count; ++i) {
    std::vector<float> d(static_cast<std::size_t>(dim), 0.0f);
    d[static_cast<std::size_t>(i % dim)] = 1.0f;
    dirs.push_back(d);
  }
  return dirs;
}

}  // namespace

TEST_CASE("pointwise response: orthonormal identity pattern") {
  const int dim = 4;
  FeatureMap m(dim, 2, 2);
  for (int i = 0; i < 4; ++i) m.at(i, i / 2, i % 2) = 2.0f;  // distinct scaled basis cells
  const Grid a = pointwise_response(crop_from(m), crop_from(m));
  REQUIRE(a.height == 4);
  REQUIRE(a.width == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(a.at(i, j) == doctest::Approx(i == j ? 1.0f : 0.0f));
    }
  }
}

TEST_CASE("pointwise response: orthogonal crops give zeros") {
  FeatureMap d(2, 1, 2);
  d.at(0, 0, 0) = 1.0f;
  d.at(0, 0, 1) = 1.0f;
  FeatureMap t(2, 1, 2);
  t.at(1, 0, 0) = 1.0f;
  t.at(1, 0, 1) = 1.0f;
  const Grid a = pointwise_response(crop_from(d), crop_from(t));
  for (float v : a.values) CHECK(v == doctest::Approx(0.0f));
}

TEST_CASE("pointwise response matches the cell-pair oracle") {
  std::mt19937 rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const int c = 2 + static_cast<int>(rng() % 3);
    const int dh = 1 + static_cast<int>(rng() % 3);
    const int dw = 1 + static_cast<int>(rng() % 3);
    const int th = 1 + static_cast<int>(rng() % 3);
    const int tw = 1 + static_cast<int>(rng() % 3);
    const FeatureCrop d = random_crop(rng, c, dh, dw);
    const FeatureCrop t = random_crop(rng, c, th, tw);
    const Grid a = pointwise_response(d, t);
    const auto expected =
        oracle::pointwise_response_brute(d.data.values(), c, dh, dw, t.data.values(), th, tw);
    REQUIRE(a.values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(std::fabs(a.values[i] - expected[i]) < 1e-5);
    }
  }
}

TEST_CASE("pointwise response transposes under argument swap") {
  std::mt19937 rng(22);
  const FeatureCrop d = random_crop(rng, 3, 2, 2);
  const FeatureCrop t = random_crop(rng, 3, 2, 3);
  const Grid a = pointwise_response(d, t);
  const Grid b = pointwise_response(t, d);
  for (int i = 0; i < a.height; ++i) {
    for (int j = 0; j < a.width; ++j) {
      CHECK(a.at(i, j) == doctest::Approx(b.at(j, i)));
    }
  }
}

TEST_CASE("topk_mean basics") {
  Grid ones(3, 3);
  for (auto& v : ones.values) v = 1.0f;
  CHECK(topk_mean(ones, 1) == doctest::Approx(1.0));
  CHECK(topk_mean(ones, 9) == doctest::Approx(1.0));
  CHECK(topk_mean(ones, 50) == doctest::Approx(1.0));  // fewer entries than k

  Grid three(1, 3);
  three.values = {0.9f, 0.5f, 0.1f};
  CHECK(topk_mean(three, 2) == doctest::Approx(0.7));

  CHECK_THROWS_AS(topk_mean(Grid(0, 0), 1), DegenerateInputError);
  CHECK_THROWS_AS(topk_mean(three, 0), ConfigError);
}

TEST_CASE("topk_mean matches a full-sort oracle") {
  std::mt19937 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    Grid g(20, 20);
    const auto values = oracle::random_vector(rng, 400);
    g.values = values;
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end(), std::greater<float>());
    double expected = 0.0;
    for (int i = 0; i < 10; ++i) expected += sorted[static_cast<std::size_t>(i)];
    expected /= 10.0;
    CHECK(topk_mean(g, 10) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("topk_mean: monotone and insensitive to non-top-k entries") {
  std::mt19937 rng(24);
  for (int rep = 0; rep < 100; ++rep) {
    Grid g(5, 5);
    g.values = oracle::random_vector(rng, 25);
    const int k = 1 + static_cast<int>(rng() % 10);
    const double base = topk_mean(g, k);

    // Raising any entry never lowers the mean.
    Grid raised = g;
    const std::size_t idx = rng() % 25;
    raised.values[idx] += 0.5f;
    CHECK(topk_mean(raised, k) >= base - 1e-9);

    // Lowering an entry that is strictly below the k-th leaves it unchanged.
    auto sorted = g.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<float>());
    const float kth = sorted[static_cast<std::size_t>(k - 1)];
    Grid lowered = g;
    bool changed = false;
    for (auto& v : lowered.values) {
      if (v < kth - 1e-4f) {
        v -= 0.3f;
        changed = true;
      }
    }
    if (changed) {
      CHECK(topk_mean(lowered, k) == doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("project_channels averages contiguous groups") {
  FeatureMap m(4, 1, 1);
  m.at(0, 0, 0) = 1.0f;
  m.at(1, 0, 0) = 3.0f;
  m.at(2, 0, 0) = 5.0f;
  m.at(3, 0, 0) = 7.0f;
  const FeatureCrop out = project_channels(crop_from(m), 2);
  CHECK(out.data.channels() == 2);
  CHECK(out.data.at(0, 0, 0) == doctest::Approx(2.0f));
  CHECK(out.data.at(1, 0, 0) == doctest::Approx(6.0f));
  CHECK_THROWS_AS(project_channels(crop_from(m), 5), DimensionError);
}

TEST_CASE("cpsn similarity: N=1 reduces to topk_mean; orthogonal gives 0") {
  std::mt19937 rng(25);
  const FeatureCrop d = random_crop(rng, 3, 2, 2);
  const FeatureCrop t = random_crop(rng, 3, 2, 2);
  const double direct = topk_mean(pointwise_response(d, t), 2);
  CHECK(cpsn_similarity({d}, {t}, 2) == doctest::Approx(direct));

  FeatureMap a(2, 1, 1);
  a.at(0, 0, 0) = 1.0f;
  FeatureMap b(2, 1, 1);
  b.at(1, 0, 0) = 1.0f;
  CHECK(cpsn_similarity({crop_from(a)}, {crop_from(b)}, 1) == doctest::Approx(0.0));
}

TEST_CASE("cpsn similarity: self similarity is 1 for shared-direction scales") {
  std::mt19937 rng(26);
  const auto dirs = orthonormal_dirs(6, 4);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<FeatureCrop> scales = {pooled_direction_crop(rng, dirs, 3, 3),
                                             pooled_direction_crop(rng, dirs, 2, 3)};
    CHECK(cpsn_similarity(scales, scales, 2) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("cpsn similarity: symmetric and scale invariant") {
  std::mt19937 rng(27);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<FeatureCrop> d = {random_crop(rng, 3, 2, 2), random_crop(rng, 3, 3, 2)};
    const std::vector<FeatureCrop> t = {random_crop(rng, 3, 2, 3), random_crop(rng, 3, 2, 2)};
    CHECK(cpsn_similarity(d, t, 2) == doctest::Approx(cpsn_similarity(t, d, 2)).epsilon(1e-9));

    // Positive per-cell scaling of one input changes nothing.
    std::vector<FeatureCrop> scaled = d;
    for (auto& crop : scaled) {
      for (int y = 0; y < crop.data.height(); ++y) {
        for (int x = 0; x < crop.data.width(); ++x) {
          const float g = 0.25f + static_cast<float>(rng() % 100) / 25.0f;
          for (int c = 0; c < crop.data.channels(); ++c) {
            crop.data.at(c, y, x) *= g;
          }
        }
      }
    }
    CHECK(cpsn_similarity(scaled, t, 2) ==
          doctest::Approx(cpsn_similarity(d, t, 2)).epsilon(1e-5));
  }
}

TEST_CASE("cpsn similarity: hand-computed 4-pair average for N=2") {
  const auto dirs = orthonormal_dirs(4, 4);
  std::mt19937 rng(28);
  const std::vector<FeatureCrop> x = {pooled_direction_crop(rng, dirs, 2, 2),
                                      pooled_direction_crop(rng, dirs, 3, 2)};
  const int k = 2;
  double expected = 0.0;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      expected += topk_mean(pointwise_response(x[static_cast<std::size_t>(m)],
                                               x[static_cast<std::size_t>(n)]),
                            k);
    }
  }
  expected /= 4.0;
  CHECK(cpsn_similarity(x, x, k) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("kalman: predict keeps position, grows covariance") {
  const BoundingBox box{100.0f, 50.0f, 40.0f, 80.0f};
  const KalmanState s0 = kalman_initiate(box);
  const KalmanState s1 = kalman_predict(s0);
  CHECK(s1.mean(0) == doctest::Approx(100.0));
  CHECK(s1.mean(1) == doctest::Approx(50.0));
  CHECK(s1.covariance.trace() > s0.covariance.trace());
  CHECK((s1.covariance - s1.covariance.transpose()).norm() < 1e-9);
}

TEST_CASE("kalman: zero-innovation update keeps the mean") {
  const BoundingBox box{100.0f, 50.0f, 40.0f, 80.0f};
  KalmanState s = kalman_initiate(box);
  s = kalman_predict(s);
  const BoundingBox predicted = measurement_to_box(s.mean.head<4>());
  const KalmanState updated = kalman_update(s, predicted);
  CHECK((updated.mean - s.mean).norm() < 1e-9);
}

TEST_CASE("kalman agrees with the textbook oracle over 50 noisy steps") {
  std::mt19937 rng(31);
  std::normal_distribution<double> noise(0.0, 1.5);

  const BoundingBox start{50.0f, 60.0f, 30.0f, 60.0f};
  KalmanState s = kalman_initiate(start);
  oracle::TextbookKalman ref;
  ref.initiate(start);

  for (int step = 1; step <= 50; ++step) {
    BoundingBox z;
    z.cx = 50.0f + 2.0f * static_cast<float>(step) + static_cast<float>(noise(rng));
    z.cy = 60.0f + 1.0f * static_cast<float>(step) + static_cast<float>(noise(rng));
    z.w = 30.0f + static_cast<float>(0.5 * noise(rng));
    z.h = 60.0f + static_cast<float>(0.5 * noise(rng));
    s = kalman_predict(s);
    ref.predict();
    s = kalman_update(s, z);
    ref.update(z);
    for (int i = 0; i < 8; ++i) {
      CHECK(std::fabs(s.mean(i) - ref.mean[i]) < 1e-6);
    }
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        CHECK(std::fabs(s.covariance(i, j) - ref.cov[i][j]) < 1e-6);
      }
    }
  }
}

TEST_CASE("gating distance: zero at the predicted measurement") {
  const BoundingBox box{10.0f, 20.0f, 30.0f, 60.0f};
  KalmanState s = kalman_initiate(box);
  s = kalman_predict(s);
  const BoundingBox predicted = measurement_to_box(s.mean.head<4>());
  CHECK(gating_distance(s, predicted) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mahalanobis: hand-computed diagonal case") {
  Eigen::VectorXd innov(2);
  innov << 1.0, 2.0;
  Eigen::MatrixXd s(2, 2);
  s << 1.0, 0.0, 0.0, 4.0;
  CHECK(mahalanobis_sq(innov, s) == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(mahalanobis_sq(innov, bad), NumericalError);
}

TEST_CASE("mahalanobis is invariant under linear reparameterization") {
  std::mt19937 rng(32);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd a(3, 3);
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = n01(rng);
    const Eigen::MatrixXd s = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd innov(3);
    for (int i = 0; i < 3; ++i) innov(i) = n01(rng);

    Eigen::MatrixXd t(3, 3);
    do {
      for (int i = 0; i < 9; ++i) t(i / 3, i % 3) = n01(rng);
    } while (std::fabs(t.determinant()) < 0.1);

    const double base = mahalanobis_sq(innov, s);
    const double mapped = mahalanobis_sq(t * innov, t * s * t.transpose());
    CHECK(mapped == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("hungarian: identity and 1x1 cases") {
  CostMatrix ident(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) ident.at(i, j) = i == j ? 0.0 : 1.0;
  }
  const auto assign = hungarian_assign(ident);
  for (int i = 0; i < 3; ++i) CHECK(assign[static_cast<std::size_t>(i)] == i);

  CostMatrix single(1, 1);
  single.at(0, 0) = 3.5;
  CHECK(hungarian_assign(single)[0] == 0);
}

TEST_CASE("hungarian matches the permutation oracle on random 5x5 matrices") {
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  for (int seed = 0; seed < 100; ++seed) {
    CostMatrix m(5, 5);
    for (auto& v : m.values) v = cost(rng);
    const auto assign = hungarian_assign(m);
    double total = 0.0;
    std::vector<bool> used(5, false);
    for (int i = 0; i < 5; ++i) {
      const int j = assign[static_cast<std::size_t>(i)];
      REQUIRE(j >= 0);
      CHECK(!used[static_cast<std::size_t>(j)]);
      used[static_cast<std::size_t>(j)] = true;
      total += m.at(i, j);
    }
    CHECK(total == doctest::Approx(oracle::assignment_cost_brute(m.values, 5, 5)).epsilon(1e-9));
  }
}

TEST_CASE("hungarian handles rectangular matrices and sentinels") {
  std::mt19937 rng(34);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int rows = 1 + static_cast<int>(rng() % 5);
    const int cols = 1 + static_cast<int>(rng() % 5);
    CostMatrix m(rows, cols);
    for (auto& v : m.values) v = cost(rng);
    const auto assign = hungarian_assign(m);
    int assigned = 0;
    double total = 0.0;
    for (int i = 0; i < rows; ++i) {
      const int j = assign[static_cast<std::size_t>(i)];
      if (j >= 0) {
        ++assigned;
        total += m.at(i, j);
      }
    }
    CHECK(assigned == std::min(rows, cols));
    CHECK(total ==
          doctest::Approx(oracle::assignment_cost_brute(m.values, rows, cols)).epsilon(1e-9));
  }

  CostMatrix gated(2, 2);
  gated.at(0, 0) = kDisallowedCost;
  gated.at(0, 1) = kDisallowedCost;
  gated.at(1, 0) = 1.0;
  gated.at(1, 1) = kDisallowedCost;
  const auto assign = hungarian_assign(gated);
  CHECK(assign[0] == -1);  // only reachable through sentinels
  CHECK(assign[1] == 0);
}

TEST_CASE("shot boundaries: constant, single cut, impossible threshold") {
  std::array<float, kHistogramChannels * kHistogramBins> a{};
  std::array<float, kHistogramChannels * kHistogramBins> b{};
  for (int ch = 0; ch < kHistogramChannels; ++ch) {
    a[static_cast<std::size_t>(ch * kHistogramBins)] = 1.0f;
    b[static_cast<std::size_t>(ch * kHistogramBins + 1)] = 1.0f;
  }
  CHECK(histogram_l1(a, b) == doctest::Approx(6.0));

  const std::vector hists_const(10, a);
  CHECK(detect_shot_boundaries(hists_const, 0.5).cuts.empty());

  std::vector hists_cut(4, a);
  hists_cut.insert(hists_cut.end(), 4, b);
  const auto cuts = detect_shot_boundaries(hists_cut, 0.5);
  REQUIRE(cuts.cuts.size() == 1);
  CHECK(cuts.cuts[0] == 4);

  CHECK(detect_shot_boundaries(hists_cut, 6.01).cuts.empty());
  CHECK_THROWS_AS(detect_shot_boundaries(
                      std::vector<std::array<float, kHistogramChannels * kHistogramBins>>{}, 0.5),
                  DegenerateInputError);
}

TEST_CASE("shot boundaries: consecutive jumps respect the minimum shot length") {
  std::array<float, kHistogramChannels * kHistogramBins> h0{};
  std::array<float, kHistogramChannels * kHistogramBins> h1{};
  std::array<float, kHistogramChannels * kHistogramBins> h2{};
  for (int ch = 0; ch < kHistogramChannels; ++ch) {
    h0[static_cast<std::size_t>(ch * kHistogramBins)] = 1.0f;
    h1[static_cast<std::size_t>(ch * kHistogramBins + 1)] = 1.0f;
    h2[static_cast<std::size_t>(ch * kHistogramBins + 2)] = 1.0f;
  }
  // Jumps at t=2 and t=3; the second cut would create a 1-frame shot.
  const std::vector hists{h0, h0, h1, h2, h2, h2};
  const auto cuts = detect_shot_boundaries(hists, 0.5);
  REQUIRE(cuts.cuts.size() == 1);
  CHECK(cuts.cuts[0] == 2);
}

namespace {

// Detections with appearance-coded crops at the two CPSN scales.
struct SyntheticDet {
  Detection det;
  MultiScaleCrop crop;
};

SyntheticDet det_at(float cx, float cy, int frame, const std::vector<float>& dir) {
  SyntheticDet out;
  out.det.box = {cx, cy, 32.0f, 32.0f};
  out.det.confidence = 0.9f;
  out.det.frame_index = frame;
  const int dim = static_cast<int>(dir.size());
  for (int scale = 0; scale < 2; ++scale) {
    FeatureMap m(dim, 2, 2);
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        for (int c = 0; c < dim; ++c) m.at(c, y, x) = dir[static_cast<std::size_t>(c)];
      }
    }
    FeatureCrop crop;
    crop.data = std::move(m);
    crop.spatial.confidence = 0.9f;
    crop.spatial.frame_index = frame;
    out.crop.push_back(std::move(crop));
  }
  return out;
}

}  // namespace

TEST_CASE("tracker: cold start spawns tentative tracks") {
  PipelineConfig cfg;
  TrackIdAllocator ids;
  ShotTracker tracker(cfg, 0, 0, 100, ids);
  const std::vector<float> dir_a{1.0f, 0.0f};
  const std::vector<float> dir_b{0.0f, 1.0f};
  const auto a = det_at(50.0f, 50.0f, 0, dir_a);
  const auto b = det_at(200.0f, 200.0f, 0, dir_b);
  const StepResult r = tracker.step(0, {a.det, b.det}, {a.crop, b.crop});
  CHECK(r.new_track_ids.size() == 2);
  CHECK(r.matches.empty());
  CHECK(tracker.tracks().size() == 2);
  for (const auto& t : tracker.tracks()) CHECK(t.state == TrackState::tentative);
}

TEST_CASE("tracker: perfect continuation matches and confirms") {
  PipelineConfig cfg;
  cfg.n_init = 3;
  TrackIdAllocator ids;
  ShotTracker tracker(cfg, 0, 0, 100, ids);
  const std::vector<float> dir{1.0f, 0.5f};
  for (int t = 0; t < 5; ++t) {
    const auto d = det_at(50.0f + 2.0f * static_cast<float>(t), 50.0f, t, dir);
    const StepResult r = tracker.step(t, {d.det}, {d.crop});
    if (t == 0) {
      CHECK(r.new_track_ids.size() == 1);
    } else {
      REQUIRE(r.matches.size() == 1);
      CHECK(r.matches[0].second == 1);
    }
  }
  REQUIRE(tracker.tracks().size() == 1);
  const Track& track = tracker.tracks()[0];
  CHECK(track.state == TrackState::confirmed);
  CHECK(track.age_since_update == 0);
  CHECK(track.hits == 5);
  // Entries recorded from the confirming frame (hit 3 at t=2) onward.
  CHECK(track.entries.size() == 3);
  CHECK(track.entries.front().frame_index == 2);
}

TEST_CASE("tracker: gate vetoes an appearance match far away") {
  PipelineConfig cfg;
  cfg.n_init = 1;
  TrackIdAllocator ids;
  ShotTracker tracker(cfg, 0, 0, 100, ids);
  const std::vector<float> dir{0.7f, 0.7f};
  const auto d0 = det_at(50.0f, 50.0f, 0, dir);
  tracker.step(0, {d0.det}, {d0.crop});
  // Identical appearance, teleported across the frame: gating must refuse.
  const auto d1 = det_at(500.0f, 500.0f, 1, dir);
  const StepResult r = tracker.step(1, {d1.det}, {d1.crop});
  CHECK(r.matches.empty());
  CHECK(r.new_track_ids.size() == 1);
  CHECK(tracker.tracks().size() == 2);
}

TEST_CASE("tracker: lifecycle has no resurrection and ids never recycle") {
  PipelineConfig cfg;
  cfg.n_init = 2;
  cfg.max_age = 2;
  TrackIdAllocator ids;
  ShotTracker tracker(cfg, 0, 0, 100, ids);
  const std::vector<float> dir{1.0f, 0.0f};

  // Confirm a track, then starve it past max_age.
  for (int t = 0; t < 3; ++t) {
    const auto d = det_at(50.0f + static_cast<float>(t), 50.0f, t, dir);
    tracker.step(t, {d.det}, {d.crop});
  }
  CHECK(tracker.tracks()[0].state == TrackState::confirmed);
  for (int t = 3; t < 6; ++t) tracker.step(t, {}, {});
  CHECK(tracker.tracks()[0].state == TrackState::deleted);

  // A new detection at the same place starts a new id.
  const auto d = det_at(50.0f, 50.0f, 6, dir);
  const StepResult r = tracker.step(6, {d.det}, {d.crop});
  REQUIRE(r.new_track_ids.size() == 1);
  CHECK(r.new_track_ids[0] == 2);

  // Tentative track dies on its first miss.
  tracker.step(7, {}, {});
  CHECK(tracker.tracks()[1].state == TrackState::deleted);
}

TEST_CASE("tracker: rejects cross-shot and non-monotone frames") {
  PipelineConfig cfg;
  TrackIdAllocator ids;
  ShotTracker tracker(cfg, 0, 10, 20, ids);
  CHECK_THROWS_AS(tracker.step(5, {}, {}), ContractError);
  tracker.step(10, {}, {});
  CHECK_THROWS_AS(tracker.step(10, {}, {}), ContractError);
  Detection wrong_frame;
  wrong_frame.box = {50.0f, 50.0f, 10.0f, 10.0f};
  wrong_frame.frame_index = 12;
  CHECK_THROWS_AS(tracker.step(11, {wrong_frame}, {MultiScaleCrop{}}), ContractError);
}

TEST_CASE("tracker: deterministic across repeated runs") {
  auto run = [] {
    PipelineConfig cfg;
    cfg.n_init = 2;
    TrackIdAllocator ids;
    ShotTracker tracker(cfg, 0, 0, 50, ids);
    std::mt19937 rng(99);
    const std::vector<float> dir_a{1.0f, 0.1f};
    const std::vector<float> dir_b{0.1f, 1.0f};
    std::vector<std::tuple<int, int, float, float>> log;
    for (int t = 0; t < 20; ++t) {
      const auto a = det_at(50.0f + 2.0f * static_cast<float>(t), 60.0f, t, dir_a);
      const auto b = det_at(250.0f - 2.0f * static_cast<float>(t), 200.0f, t, dir_b);
      tracker.step(t, {a.det, b.det}, {a.crop, b.crop});
    }
    std::vector<std::tuple<int, int, int>> out;
    for (const auto& tl : tracker.finish()) {
      out.emplace_back(tl.track_id, tl.entries.front().frame_index,
                       static_cast<int>(tl.entries.size()));
    }
    return out;
  };
  CHECK(run() == run());
}
