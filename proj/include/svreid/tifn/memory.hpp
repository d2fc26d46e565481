// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <vector>

#include "svreid/core/cell_grid.hpp"
#include "svreid/core/types.hpp"

namespace svreid {

struct PoolEntry {
  FeatureCrop crop;
  int frequency = 1;
  float confidence = 0.0f;
  std::vector<float> pooled;  // unit-normalized average-pooled crop vector
};

// Bounded store of recent object crops. Update rules, applied per incoming
// crop after cosine-matching its pooled vector against the entries:
//   (a) unmatched, pool not full          -> append, frequency 1
//   (b) unmatched, full, conf > min conf  -> replace the min-confidence
//       entry, frequency resets to 1
//   (c) matched                           -> frequency += 1; crop and
//       confidence replaced when the new confidence is higher
struct CandidatePool {
  int capacity = 0;
  std::vector<PoolEntry> entries;
};

// Bounded store of frequently seen crops; fed from the pool when an
// entry's frequency exceeds gamma.
struct GlobalSet {
  int capacity = 0;
  std::vector<PoolEntry> entries;
};

// Average-pool + unit-normalize; zero crops yield a zero vector (which
// never matches anything).
std::vector<float> pooled_crop_vector(const FeatureCrop& crop);

void update_candidate_pool(CandidatePool& pool, const std::vector<FeatureCrop>& new_crops,
                           float match_threshold);

// Moves pool entries with frequency > gamma into the global set. When the
// set is full, the minimum-confidence member is replaced only by a
// candidate with both higher confidence and higher frequency; candidates
// that fail stay in the pool.
void promote_to_global(CandidatePool& pool, GlobalSet& global, int gamma);

// clip(sum over set entries of xcorr against the current map).
Grid global_semantic_attention(const GlobalSet& global, const FeatureMap& current);
Grid global_semantic_attention(const GlobalSet& global, const CellGrid& current_cells);

}  // namespace svreid
