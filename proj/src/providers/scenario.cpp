// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/providers/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "svreid/core/errors.hpp"
#include "svreid/core/ops.hpp"
#include "svreid/kernels/kernels.hpp"
#include "svreid/providers/candidates.hpp"

namespace svreid {

namespace {

// Base candidates are deduplicated at the stock NMS threshold; the fusion
// stage reproduces them exactly when run with default config and zero
// attention (stage-isolation contract).
constexpr float kGeneratorNmsIou = 0.45f;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                       std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed ^ tag) ^ a) ^ b);
}

// Portable deterministic draws (std:: distributions are not pinned across
// library implementations).
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

double normal01(std::mt19937_64& rng) {
  const double u1 = 1.0 - u01(rng);
  const double u2 = u01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<float> random_unit_vector(std::mt19937_64& rng, int dim) {
  std::vector<float> v(static_cast<std::size_t>(dim));
  while (true) {
    for (auto& x : v) x = static_cast<float>(normal01(rng));
    const float sq = kernels::sumsq(v.data(), v.size());
    if (sq > 1e-12f) {
      kernels::scale_inplace(v.data(), v.size(), 1.0f / std::sqrt(sq));
      return v;
    }
  }
}

float reflect_into(float p, float lo, float hi) {
  if (hi <= lo) return lo;
  const float range = 2.0f * (hi - lo);
  float q = std::fmod(p - lo, range);
  if (q < 0.0f) q += range;
  return q <= (hi - lo) ? lo + q : hi - (q - (hi - lo));
}

// Orthonormal companion of the object's appearance vector; spans the fixed
// 2-plane in which drift rotates.
std::vector<float> drift_axis(const ScenarioSpec& spec, int object_id) {
  const auto& u = spec.objects[static_cast<std::size_t>(object_id)].appearance;
  std::mt19937_64 rng(sub_seed(spec.seed, 0xd21f7, static_cast<std::uint64_t>(object_id)));
  while (true) {
    std::vector<float> v = random_unit_vector(rng, spec.appearance_dim);
    const float proj = kernels::dot(v.data(), u.data(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * u[i];
    const float sq = kernels::sumsq(v.data(), v.size());
    if (sq > 1e-6f) {
      kernels::scale_inplace(v.data(), v.size(), 1.0f / std::sqrt(sq));
      return v;
    }
  }
}

std::vector<float> appearance_at(const ScenarioSpec& spec, int object_id, int frame) {
  const auto& obj = spec.objects[static_cast<std::size_t>(object_id)];
  if (spec.drift_rate == 0.0f || frame == 0) return obj.appearance;
  const std::vector<float> axis = drift_axis(spec, object_id);
  const double theta = static_cast<double>(spec.drift_rate) * frame;
  const float c = static_cast<float>(std::cos(theta));
  const float s = static_cast<float>(std::sin(theta));
  std::vector<float> out(obj.appearance.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = c * obj.appearance[i] + s * axis[i];
  }
  return out;
}

float degrade_gain(const ObjectSpec& obj, int frame) {
  for (const auto& w : obj.degrade) {
    if (frame >= w.begin && frame < w.end) return w.gain;
  }
  return 1.0f;
}

BoundingBox object_box(const ScenarioSpec& spec, const ObjectSpec& obj, int frame) {
  const int shot = spec.shot_of_frame(frame);
  const ShotMotion& m = obj.shot_motion[static_cast<std::size_t>(shot)];
  const int local_t = frame - spec.shot_start(shot);
  const float margin_x = 0.5f * obj.w + 2.0f;
  const float margin_y = 0.5f * obj.h + 2.0f;
  BoundingBox box;
  box.cx = reflect_into(m.cx0 + m.vx * static_cast<float>(local_t), margin_x,
                        static_cast<float>(spec.frame_size) - margin_x);
  box.cy = reflect_into(m.cy0 + m.vy * static_cast<float>(local_t), margin_y,
                        static_cast<float>(spec.frame_size) - margin_y);
  box.w = obj.w;
  box.h = obj.h;
  return box;
}

void render_blob(FeatureMap& map, int level, const BoundingBox& box,
                 const std::vector<float>& appearance, float gain) {
  const float s = static_cast<float>(kPyramidStrides[static_cast<std::size_t>(level)]);
  const float cx = box.cx / s;
  const float cy = box.cy / s;
  const float sigma_x = std::max(0.5f, box.w / s / 4.0f);
  const float sigma_y = std::max(0.5f, box.h / s / 4.0f);
  const int x_lo = std::max(0, static_cast<int>(std::floor(cx - 3.0f * sigma_x - 0.5f)));
  const int x_hi = std::min(map.width() - 1, static_cast<int>(std::ceil(cx + 3.0f * sigma_x)));
  const int y_lo = std::max(0, static_cast<int>(std::floor(cy - 3.0f * sigma_y - 0.5f)));
  const int y_hi = std::min(map.height() - 1, static_cast<int>(std::ceil(cy + 3.0f * sigma_y)));
  for (int y = y_lo; y <= y_hi; ++y) {
    const float dy = (static_cast<float>(y) + 0.5f - cy) / sigma_y;
    for (int x = x_lo; x <= x_hi; ++x) {
      const float dx = (static_cast<float>(x) + 0.5f - cx) / sigma_x;
      const float g = gain * std::exp(-0.5f * (dx * dx + dy * dy));
      if (g < 1e-6f) continue;
      for (int c = 0; c < map.channels(); ++c) {
        map.at(c, y, x) += g * appearance[static_cast<std::size_t>(c)];
      }
    }
  }
}

std::array<float, kHistogramChannels * kHistogramBins> make_histogram(const ScenarioSpec& spec,
                                                                      int shot, int frame) {
  std::array<float, kHistogramChannels * kHistogramBins> hist{};
  std::mt19937_64 palette_rng(sub_seed(spec.seed, 0x4157, static_cast<std::uint64_t>(shot)));
  std::mt19937_64 jitter_rng(sub_seed(spec.seed, 0x91e77, static_cast<std::uint64_t>(frame)));
  const float j = spec.hist_jitter;
  for (int ch = 0; ch < kHistogramChannels; ++ch) {
    std::array<double, kHistogramBins> palette{};
    std::array<double, kHistogramBins> jitter{};
    double ps = 0.0;
    double js = 0.0;
    for (int b = 0; b < kHistogramBins; ++b) {
      palette[static_cast<std::size_t>(b)] = u01(palette_rng) + 0.05;
      ps += palette[static_cast<std::size_t>(b)];
      jitter[static_cast<std::size_t>(b)] = u01(jitter_rng) + 0.05;
      js += jitter[static_cast<std::size_t>(b)];
    }
    double sum = 0.0;
    std::array<double, kHistogramBins> mixed{};
    for (int b = 0; b < kHistogramBins; ++b) {
      mixed[static_cast<std::size_t>(b)] =
          (1.0 - j) * palette[static_cast<std::size_t>(b)] / ps +
          j * jitter[static_cast<std::size_t>(b)] / js;
      sum += mixed[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < kHistogramBins; ++b) {
      hist[static_cast<std::size_t>(ch * kHistogramBins + b)] =
          static_cast<float>(mixed[static_cast<std::size_t>(b)] / sum);
    }
  }
  return hist;
}

ScenarioSpec resolve(ScenarioSpec spec) {
  spec.objects.resize(static_cast<std::size_t>(spec.n_objects));
  const int shots = spec.shot_count();
  for (int i = 0; i < spec.n_objects; ++i) {
    ObjectSpec& obj = spec.objects[static_cast<std::size_t>(i)];
    if (obj.appearance.empty()) {
      std::mt19937_64 rng(sub_seed(spec.seed, 0xa99e4, static_cast<std::uint64_t>(i)));
      obj.appearance = random_unit_vector(rng, spec.appearance_dim);
    }
    if (obj.shot_motion.empty()) {
      obj.shot_motion.resize(static_cast<std::size_t>(shots));
      for (int k = 0; k < shots; ++k) {
        std::mt19937_64 rng(sub_seed(spec.seed, 0x307213, static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(k)));
        ShotMotion& m = obj.shot_motion[static_cast<std::size_t>(k)];
        const float margin = 0.5f * std::max(obj.w, obj.h) + 8.0f;
        const float span = static_cast<float>(spec.frame_size) - 2.0f * margin;
        // Spread objects apart at the shot start; retry a few times before
        // accepting whatever came out.
        for (int attempt = 0; attempt < 16; ++attempt) {
          m.cx0 = margin + static_cast<float>(u01(rng)) * span;
          m.cy0 = margin + static_cast<float>(u01(rng)) * span;
          bool ok = true;
          for (int p = 0; p < i; ++p) {
            const ShotMotion& q = spec.objects[static_cast<std::size_t>(p)]
                                      .shot_motion[static_cast<std::size_t>(k)];
            const float min_gap = 0.75f * (std::max(obj.w, obj.h) +
                                           std::max(spec.objects[static_cast<std::size_t>(p)].w,
                                                    spec.objects[static_cast<std::size_t>(p)].h));
            if (std::hypot(m.cx0 - q.cx0, m.cy0 - q.cy0) < min_gap) {
              ok = false;
              break;
            }
          }
          if (ok) break;
        }
        m.vx = static_cast<float>(u01(rng) * 4.0 - 2.0);
        m.vy = static_cast<float>(u01(rng) * 4.0 - 2.0);
      }
    }
  }
  return spec;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (n_objects < 0) throw ConfigError("scenario: n_objects must be >= 0");
  if (n_frames < 1) throw ConfigError("scenario: n_frames must be >= 1");
  if (appearance_dim < 1) throw ConfigError("scenario: appearance_dim must be >= 1");
  if (frame_size < 32) throw ConfigError("scenario: frame_size must be >= 32");
  if (drift_rate < 0.0f) throw ConfigError("scenario: drift_rate must be >= 0");
  if (noise_sigma < 0.0f) throw ConfigError("scenario: noise_sigma must be >= 0");
  if (!(hist_jitter >= 0.0f && hist_jitter <= 1.0f))
    throw ConfigError("scenario: hist_jitter must be in [0,1]");
  int prev = 0;
  for (int cut : shot_cuts) {
    if (cut <= prev || cut >= n_frames) {
      throw ConfigError("scenario: shot_cuts must be strictly increasing within (0, n_frames)");
    }
    prev = cut;
  }
  if (static_cast<int>(objects.size()) > n_objects) {
    throw ConfigError("scenario: more object specs than n_objects");
  }
  for (const auto& obj : objects) {
    if (!(obj.w > 0.0f && obj.h > 0.0f)) throw ConfigError("scenario: object size must be positive");
    if (!obj.appearance.empty() && static_cast<int>(obj.appearance.size()) != appearance_dim) {
      throw ConfigError("scenario: object appearance length must equal appearance_dim");
    }
    if (!obj.shot_motion.empty() && static_cast<int>(obj.shot_motion.size()) != shot_count()) {
      throw ConfigError("scenario: shot_motion must have one entry per shot");
    }
    for (const auto& w : obj.degrade) {
      if (w.begin < 0 || w.end > n_frames || w.begin >= w.end) {
        throw ConfigError("scenario: degrade window out of range");
      }
      if (!(w.gain >= 0.0f && w.gain < 1.0f)) {
        throw ConfigError("scenario: degrade gain must be in [0,1)");
      }
    }
  }
}

int ScenarioSpec::shot_of_frame(int frame) const {
  int shot = 0;
  for (int cut : shot_cuts) {
    if (frame >= cut) ++shot;
  }
  return shot;
}

int ScenarioSpec::shot_start(int shot) const {
  return shot == 0 ? 0 : shot_cuts[static_cast<std::size_t>(shot - 1)];
}

Scenario generate_scenario(const ScenarioSpec& raw) {
  raw.validate();
  Scenario sc;
  sc.spec = resolve(raw);
  const ScenarioSpec& spec = sc.spec;

  // Per-shot background noise fields, regenerated at each cut and static
  // within a shot.
  std::vector<std::array<FeatureMap, kPyramidLevels>> noise(
      static_cast<std::size_t>(spec.shot_count()));
  for (int shot = 0; shot < spec.shot_count(); ++shot) {
    for (int level = 0; level < kPyramidLevels; ++level) {
      const int ext = level_extent(spec.frame_size, level);
      FeatureMap m(spec.appearance_dim, ext, ext);
      if (spec.noise_sigma > 0.0f) {
        std::mt19937_64 rng(sub_seed(spec.seed, 0xb06, static_cast<std::uint64_t>(shot),
                                     static_cast<std::uint64_t>(level)));
        for (auto& v : m.values()) {
          v = static_cast<float>(normal01(rng)) * spec.noise_sigma;
        }
      }
      noise[static_cast<std::size_t>(shot)][static_cast<std::size_t>(level)] = std::move(m);
    }
  }

  sc.frames.reserve(static_cast<std::size_t>(spec.n_frames));
  for (int t = 0; t < spec.n_frames; ++t) {
    const int shot = spec.shot_of_frame(t);
    FrameBundle fb;
    fb.frame_index = t;
    fb.rgb_histogram = make_histogram(spec, shot, t);
    for (int level = 0; level < kPyramidLevels; ++level) {
      fb.pyramid[static_cast<std::size_t>(level)] =
          noise[static_cast<std::size_t>(shot)][static_cast<std::size_t>(level)];
    }
    for (int i = 0; i < spec.n_objects; ++i) {
      const ObjectSpec& obj = spec.objects[static_cast<std::size_t>(i)];
      const float gain = degrade_gain(obj, t);
      const BoundingBox box = object_box(spec, obj, t);

      GroundTruthRecord rec;
      rec.frame_index = t;
      rec.object_id = i;
      rec.box = box;
      rec.visible = gain > 0.05f;
      rec.class_id = obj.class_id;
      sc.truth.records.push_back(rec);

      if (gain <= 0.0f) continue;
      const std::vector<float> app = appearance_at(spec, i, t);
      for (int level = 0; level < kPyramidLevels; ++level) {
        render_blob(fb.pyramid[static_cast<std::size_t>(level)], level, box, app, gain);
      }
    }
    fb.candidates = extract_pyramid_candidates(fb.pyramid, t, spec.frame_size, kGeneratorNmsIou);
    sc.frames.push_back(std::move(fb));
  }
  return sc;
}

std::vector<float> scenario_appearance_at(const Scenario& sc, int object_id, int frame) {
  if (object_id < 0 || object_id >= sc.spec.n_objects) {
    throw ContractError("scenario_appearance_at: unknown object id");
  }
  return appearance_at(sc.spec, object_id, frame);
}

std::optional<std::vector<float>> face_features(const Scenario& sc, int frame_index,
                                                const BoundingBox& box) {
  for (const auto& rec : sc.truth.records) {
    if (rec.frame_index != frame_index || !rec.visible) continue;
    const ObjectSpec& obj = sc.spec.objects[static_cast<std::size_t>(rec.object_id)];
    if (!obj.face_visible) continue;
    if (iou(rec.box, box) > 0.3) {
      return obj.appearance;  // the stable "face" of the object
    }
  }
  return std::nullopt;
}

}  // namespace svreid
