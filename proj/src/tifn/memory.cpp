// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tifn/memory.hpp"

#include <algorithm>
#include <cmath>

#include "svreid/kernels/kernels.hpp"
#include "svreid/tifn/attention.hpp"

namespace svreid {

namespace {

// Index of the minimum-confidence entry; first on ties.
std::size_t min_confidence_index(const std::vector<PoolEntry>& entries) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].confidence < entries[best].confidence) best = i;
  }
  return best;
}

// Cosine of two pooled vectors; either being zero yields 0.
float pooled_cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size() || a.empty()) return 0.0f;
  return kernels::dot(a.data(), b.data(), a.size());
}

}  // namespace

std::vector<float> pooled_crop_vector(const FeatureCrop& crop) {
  return pooled_unit_vector(crop.data);
}

void update_candidate_pool(CandidatePool& pool, const std::vector<FeatureCrop>& new_crops,
                           float match_threshold) {
  for (const auto& crop : new_crops) {
    PoolEntry incoming;
    incoming.crop = crop;
    incoming.frequency = 1;
    incoming.confidence = crop.spatial.confidence;
    incoming.pooled = pooled_crop_vector(crop);

    int matched = -1;
    float best_sim = -2.0f;
    for (std::size_t i = 0; i < pool.entries.size(); ++i) {
      const float sim = pooled_cosine(incoming.pooled, pool.entries[i].pooled);
      if (sim > best_sim) {
        best_sim = sim;
        matched = static_cast<int>(i);
      }
    }
    if (matched >= 0 && best_sim >= match_threshold) {
      PoolEntry& entry = pool.entries[static_cast<std::size_t>(matched)];
      entry.frequency += 1;
      if (incoming.confidence > entry.confidence) {
        entry.crop = incoming.crop;
        entry.confidence = incoming.confidence;
        entry.pooled = incoming.pooled;
      }
    } else if (static_cast<int>(pool.entries.size()) < pool.capacity) {
      pool.entries.push_back(std::move(incoming));
    } else if (!pool.entries.empty()) {
      const std::size_t victim = min_confidence_index(pool.entries);
      if (incoming.confidence > pool.entries[victim].confidence) {
        pool.entries[victim] = std::move(incoming);
      }
    }
  }
}

void promote_to_global(CandidatePool& pool, GlobalSet& global, int gamma) {
  for (std::size_t i = 0; i < pool.entries.size();) {
    PoolEntry& entry = pool.entries[i];
    if (entry.frequency <= gamma) {
      ++i;
      continue;
    }
    if (static_cast<int>(global.entries.size()) < global.capacity) {
      global.entries.push_back(std::move(entry));
      pool.entries.erase(pool.entries.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    const std::size_t victim = min_confidence_index(global.entries);
    const PoolEntry& incumbent = global.entries[victim];
    if (entry.confidence > incumbent.confidence && entry.frequency > incumbent.frequency) {
      global.entries[victim] = std::move(entry);
      pool.entries.erase(pool.entries.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    ++i;  // stays in the pool, keeps accumulating frequency
  }
}

Grid global_semantic_attention(const GlobalSet& global, const CellGrid& current_cells) {
  Grid out(current_cells.height, current_cells.width);
  for (const auto& entry : global.entries) {
    Grid g = xcorr_prenormalized(entry.crop, current_cells);
    kernels::add_inplace(out.values.data(), g.values.data(), out.values.size());
  }
  kernels::clip01_inplace(out.values.data(), out.values.size());
  return out;
}

Grid global_semantic_attention(const GlobalSet& global, const FeatureMap& current) {
  return global_semantic_attention(global, normalized_cells(current));
}

}  // namespace svreid
