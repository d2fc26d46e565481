// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "svreid/core/cell_grid.hpp"
#include "svreid/core/config.hpp"
#include "svreid/core/errors.hpp"
#include "svreid/core/ops.hpp"

using namespace svreid;

TEST_CASE("iou: identical boxes give 1") {
  const BoundingBox a{5.0f, 5.0f, 4.0f, 3.0f};
  CHECK(iou(a, a) == doctest::Approx(1.0));
}

TEST_CASE("iou: disjoint boxes give 0") {
  const BoundingBox a{0.0f, 0.0f, 2.0f, 2.0f};
  const BoundingBox b{10.0f, 10.0f, 2.0f, 2.0f};
  CHECK(iou(a, b) == 0.0);
}

TEST_CASE("iou: hand-computed overlap") {
  // Unit-offset 2x2 squares: intersection 2, union 6.
  const BoundingBox a{1.0f, 1.0f, 2.0f, 2.0f};
  const BoundingBox b{2.0f, 1.0f, 2.0f, 2.0f};
  CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("iou is symmetric and bounded") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> pos(0.0f, 50.0f);
  std::uniform_real_distribution<float> size(0.5f, 20.0f);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox a{pos(rng), pos(rng), size(rng), size(rng)};
    const BoundingBox b{pos(rng), pos(rng), size(rng), size(rng)};
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("cosine similarity basics") {
  const std::vector<float> u{1.0f, 0.0f};
  const std::vector<float> v{0.0f, 1.0f};
  const std::vector<float> w{1.0f, 1.0f};
  CHECK(cosine_similarity(u, u) == doctest::Approx(1.0));
  CHECK(cosine_similarity(u, v) == doctest::Approx(0.0));
  CHECK(cosine_similarity(w, u) == doctest::Approx(0.7071).epsilon(1e-4));
}

TEST_CASE("cosine similarity errors") {
  const std::vector<float> u{1.0f, 2.0f};
  const std::vector<float> zero{0.0f, 0.0f};
  const std::vector<float> three{1.0f, 2.0f, 3.0f};
  CHECK_THROWS_AS(cosine_similarity(u, zero), DegenerateInputError);
  CHECK_THROWS_AS(cosine_similarity(u, three), DimensionError);
}

TEST_CASE("cosine similarity is scale invariant") {
  // Power-of-two scales keep the float32 storage exact; arbitrary scales
  // would perturb the stored values themselves.
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto u = oracle::random_vector(rng, 16);
    auto v = oracle::random_vector(rng, 16);
    const double base = cosine_similarity(u, v);
    auto us = u;
    auto vs = v;
    for (auto& x : us) x *= 4.0f;
    for (auto& x : vs) x *= 0.5f;
    CHECK(cosine_similarity(us, vs) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("l2_normalize_cells: zero map stays zero") {
  const FeatureMap m(3, 2, 2);
  const FeatureMap n = l2_normalize_cells(m);
  for (float v : n.values()) CHECK(v == 0.0f);
}

TEST_CASE("l2_normalize_cells: 3-4-5 cell") {
  FeatureMap m(2, 1, 1);
  m.at(0, 0, 0) = 3.0f;
  m.at(1, 0, 0) = 4.0f;
  const FeatureMap n = l2_normalize_cells(m);
  CHECK(n.at(0, 0, 0) == doctest::Approx(0.6f));
  CHECK(n.at(1, 0, 0) == doctest::Approx(0.8f));
}

TEST_CASE("l2_normalize_cells: random map cell norms and oracle") {
  std::mt19937 rng(9);
  const auto values = oracle::random_vector(rng, 4 * 3 * 3);
  const FeatureMap m = FeatureMap::from_values(4, 3, 3, values);
  const FeatureMap n = l2_normalize_cells(m);
  const auto expected = oracle::normalize_cells_chw(values, 4, 3, 3);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(n.values()[i] == doctest::Approx(expected[i]).epsilon(1e-5));
  }
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      double sq = 0.0;
      for (int c = 0; c < 4; ++c) sq += static_cast<double>(n.at(c, y, x)) * n.at(c, y, x);
      const double norm = std::sqrt(sq);
      CHECK((norm == 0.0 || std::fabs(norm - 1.0) < 1e-6));
    }
  }
}

TEST_CASE("l2_normalize_cells is idempotent") {
  std::mt19937 rng(13);
  const auto values = oracle::random_vector(rng, 3 * 4 * 5);
  const FeatureMap m = FeatureMap::from_values(3, 4, 5, values);
  const FeatureMap once = l2_normalize_cells(m);
  const FeatureMap twice = l2_normalize_cells(once);
  for (std::size_t i = 0; i < once.values().size(); ++i) {
    CHECK(std::fabs(once.values()[i] - twice.values()[i]) < 1e-9f);
  }
}

TEST_CASE("FeatureMap validates size and finiteness") {
  CHECK_THROWS_AS(FeatureMap::from_values(2, 2, 2, std::vector<float>(7, 0.0f)), DimensionError);
  std::vector<float> bad(8, 0.0f);
  bad[3] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(FeatureMap::from_values(2, 2, 2, bad), DegenerateInputError);
}

TEST_CASE("cell grid round trip") {
  std::mt19937 rng(17);
  const auto values = oracle::random_vector(rng, 5 * 3 * 7);
  const FeatureMap m = FeatureMap::from_values(5, 3, 7, values);
  const FeatureMap back = to_feature_map(to_cells(m));
  CHECK(back.values() == m.values());
}

TEST_CASE("nms keeps the strongest of overlapping same-class boxes") {
  std::vector<Detection> dets;
  dets.push_back({{10.0f, 10.0f, 8.0f, 8.0f}, 0.8f, 0, 0});
  dets.push_back({{11.0f, 10.0f, 8.0f, 8.0f}, 0.9f, 0, 0});
  dets.push_back({{11.0f, 10.0f, 8.0f, 8.0f}, 0.7f, 1, 0});  // other class survives
  const auto kept = nms(dets, 0.45f);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].confidence == doctest::Approx(0.9f));
  CHECK(kept[1].class_id == 1);
}

TEST_CASE("config defaults validate and round-trip") {
  PipelineConfig cfg;
  cfg.validate();
  const PipelineConfig back = PipelineConfig::from_string(cfg.serialize());
  CHECK(back.serialize() == cfg.serialize());
}

TEST_CASE("config rejects unknown keys and bad invariants") {
  CHECK_THROWS_AS(PipelineConfig::from_string("no_such_key=1\n"), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_string("pool_capacity=4\nglobal_capacity=8\n"),
                  ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_string("reid_weight=0.9\nface_weight=0.2\n"), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_string("tau=abc\n"), ConfigError);
  CHECK_NOTHROW(PipelineConfig::from_string("# comment\n\ntau=5\n"));
}

TEST_CASE("config parses person classes and fusion modes") {
  const PipelineConfig cfg = PipelineConfig::from_string("person_classes=1,3\nfusion=ls+ll\n");
  CHECK(cfg.person_classes.count(1) == 1);
  CHECK(cfg.person_classes.count(3) == 1);
  CHECK(cfg.person_classes.count(0) == 0);
  CHECK(cfg.fusion == FusionMode::ls_ll);
  CHECK_THROWS_AS(parse_fusion_mode("bogus"), ConfigError);
}
