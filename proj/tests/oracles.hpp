// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

// Test-side reference implementations, deliberately independent of the
// library code paths they check: plain loops, no shared kernels, no Eigen.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "svreid/core/types.hpp"

namespace svreid::oracle {

// Per-cell L2 normalization of a channel-major grid, naive loops.
inline std::vector<float> normalize_cells_chw(const std::vector<float>& values, int channels,
                                              int height, int width) {
  std::vector<float> out(values.size(), 0.0f);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double sq = 0.0;
      for (int c = 0; c < channels; ++c) {
        const double v = values[(static_cast<std::size_t>(c) * height + y) * width + x];
        sq += v * v;
      }
      const double norm = std::sqrt(sq);
      if (norm == 0.0) continue;
      for (int c = 0; c < channels; ++c) {
        const std::size_t idx = (static_cast<std::size_t>(c) * height + y) * width + x;
        out[idx] = static_cast<float>(values[idx] / norm);
      }
    }
  }
  return out;
}

// Valid-mode normalized sliding correlation, zero-padded to map size with
// the valid region centered; quintuple loop.
inline std::vector<double> xcorr_brute(const std::vector<float>& crop, int cc, int ch, int cw,
                                       const std::vector<float>& map, int mc, int mh, int mw) {
  const std::vector<float> ncrop = normalize_cells_chw(crop, cc, ch, cw);
  const std::vector<float> nmap = normalize_cells_chw(map, mc, mh, mw);
  std::vector<double> out(static_cast<std::size_t>(mh) * mw, 0.0);
  const int off_y = (ch - 1) / 2;
  const int off_x = (cw - 1) / 2;
  for (int y = 0; y + ch <= mh; ++y) {
    for (int x = 0; x + cw <= mw; ++x) {
      double acc = 0.0;
      for (int c = 0; c < cc; ++c) {
        for (int i = 0; i < ch; ++i) {
          for (int j = 0; j < cw; ++j) {
            acc += static_cast<double>(
                       ncrop[(static_cast<std::size_t>(c) * ch + i) * cw + j]) *
                   nmap[(static_cast<std::size_t>(c) * mh + (y + i)) * mw + (x + j)];
          }
        }
      }
      acc /= static_cast<double>(ch * cw);
      out[static_cast<std::size_t>(y + off_y) * mw + (x + off_x)] =
          std::clamp(acc, -1.0, 1.0);
    }
  }
  return out;
}

// Cell-pair cosine matrix, double loop over cells.
inline std::vector<double> pointwise_response_brute(const std::vector<float>& d, int c, int dh,
                                                    int dw, const std::vector<float>& t, int th,
                                                    int tw) {
  const int nd = dh * dw;
  const int nt = th * tw;
  std::vector<double> out(static_cast<std::size_t>(nd) * nt, 0.0);
  auto cell_of = [c](const std::vector<float>& values, int h, int w, int idx) {
    std::vector<double> v(static_cast<std::size_t>(c));
    const int y = idx / w;
    const int x = idx % w;
    for (int ch = 0; ch < c; ++ch) {
      v[static_cast<std::size_t>(ch)] =
          values[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
    return v;
  };
  for (int i = 0; i < nd; ++i) {
    const auto di = cell_of(d, dh, dw, i);
    double dn = 0.0;
    for (double v : di) dn += v * v;
    for (int j = 0; j < nt; ++j) {
      const auto tj = cell_of(t, th, tw, j);
      double tn = 0.0;
      double dot = 0.0;
      for (std::size_t k = 0; k < tj.size(); ++k) {
        tn += tj[k] * tj[k];
        dot += di[k] * tj[k];
      }
      if (dn > 0.0 && tn > 0.0) {
        out[static_cast<std::size_t>(i) * nt + j] = dot / std::sqrt(dn * tn);
      }
    }
  }
  return out;
}

// Minimum assignment cost by full permutation enumeration (square or
// rectangular, n! on the smaller side).
inline double assignment_cost_brute(const std::vector<double>& cost, int rows, int cols) {
  const bool transpose = rows > cols;
  const int n = transpose ? cols : rows;
  const int m = transpose ? rows : cols;
  auto at = [&](int r, int c) {
    return transpose ? cost[static_cast<std::size_t>(c) * cols + r]
                     : cost[static_cast<std::size_t>(r) * cols + c];
  };
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += at(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Plain-array constant-velocity Kalman filter on (cx, cy, aspect, h) with
// the DeepSort noise scaling; Gauss-Jordan inverse instead of Cholesky.
class TextbookKalman {
 public:
  static constexpr int N = 8;
  double mean[N] = {};
  double cov[N][N] = {};

  void initiate(const BoundingBox& box) {
    mean[0] = box.cx;
    mean[1] = box.cy;
    mean[2] = static_cast<double>(box.w) / box.h;
    mean[3] = box.h;
    for (int i = 4; i < N; ++i) mean[i] = 0.0;
    const double h = box.h;
    const double std[N] = {2 * kWp * h, 2 * kWp * h, 1e-2,    2 * kWp * h,
                           10 * kWv * h, 10 * kWv * h, 1e-5, 10 * kWv * h};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) cov[i][j] = 0.0;
      cov[i][i] = std[i] * std[i];
    }
  }

  void predict() {
    const double h = mean[3];
    double f[N][N] = {};
    for (int i = 0; i < N; ++i) f[i][i] = 1.0;
    for (int i = 0; i < 4; ++i) f[i][i + 4] = 1.0;

    double nm[N] = {};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) nm[i] += f[i][j] * mean[j];
    }
    std::copy(nm, nm + N, mean);

    double fp[N][N] = {};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) fp[i][j] += f[i][k] * cov[k][j];
      }
    }
    double fpf[N][N] = {};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) fpf[i][j] += fp[i][k] * f[j][k];
      }
    }
    const double qs[N] = {kWp * h, kWp * h, 1e-2, kWp * h, kWv * h, kWv * h, 1e-5, kWv * h};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) cov[i][j] = fpf[i][j];
      cov[i][i] += qs[i] * qs[i];
    }
    symmetrize();
  }

  void update(const BoundingBox& box) {
    const double z[4] = {box.cx, box.cy, static_cast<double>(box.w) / box.h, box.h};
    const double h = mean[3];
    const double rs[4] = {kWp * h, kWp * h, 1e-1, kWp * h};

    double s[4][4];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) s[i][j] = cov[i][j];
      s[i][i] += rs[i] * rs[i];
    }
    double sinv[4][4];
    invert4(s, sinv);

    double k[N][4] = {};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int l = 0; l < 4; ++l) k[i][j] += cov[i][l] * sinv[l][j];
      }
    }
    double innov[4];
    for (int i = 0; i < 4; ++i) innov[i] = z[i] - mean[i];
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < 4; ++j) mean[i] += k[i][j] * innov[j];
    }
    // P' = P - K S K^T
    double ks[N][4] = {};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int l = 0; l < 4; ++l) ks[i][j] += k[i][l] * s[l][j];
      }
    }
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 4; ++l) acc += ks[i][l] * k[j][l];
        cov[i][j] -= acc;
      }
    }
    symmetrize();
  }

 private:
  static constexpr double kWp = 1.0 / 20.0;
  static constexpr double kWv = 1.0 / 160.0;

  void symmetrize() {
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        const double v = 0.5 * (cov[i][j] + cov[j][i]);
        cov[i][j] = v;
        cov[j][i] = v;
      }
    }
  }

  static void invert4(const double a[4][4], double out[4][4]) {
    double aug[4][8];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        aug[i][j] = a[i][j];
        aug[i][j + 4] = i == j ? 1.0 : 0.0;
      }
    }
    for (int col = 0; col < 4; ++col) {
      int pivot = col;
      for (int r = col + 1; r < 4; ++r) {
        if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
      }
      for (int j = 0; j < 8; ++j) std::swap(aug[col][j], aug[pivot][j]);
      const double p = aug[col][col];
      for (int j = 0; j < 8; ++j) aug[col][j] /= p;
      for (int r = 0; r < 4; ++r) {
        if (r == col) continue;
        const double f = aug[r][col];
        for (int j = 0; j < 8; ++j) aug[r][j] -= f * aug[col][j];
      }
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out[i][j] = aug[i][j + 4];
    }
  }
};

// Deterministic test RNG helpers.
inline std::vector<float> random_vector(std::mt19937& rng, std::size_t n, float lo = -1.0f,
                                        float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace svreid::oracle
