#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "poixa/compressor.hpp"
#include "poixa/recommender.hpp"

namespace poixa {

// The two built-in explanation artifacts for one recommendation: the ranked
// influential input timesteps (from the recommended candidate's row of W)
// and the ranked most-similar users (from the compressor logits).
struct Explanation {
  std::int64_t user_id = 0;
  std::int64_t recommended_poi = 0;  // external POI id
  int recommended_index = 0;
  int valid_T = 0;
  std::vector<std::pair<int, double>> timestep_ranking;  // (timestep, weight), weight descending
  std::vector<ScoredUser> similar;
};

// Top-k entries of row `row` of W over the valid columns; weight descending,
// ties broken by the smaller timestep index. row < 0 selects the recommended
// candidate's row.
std::vector<std::pair<int, double>> important_timesteps(const Prediction& pred, int k,
                                                        int row = -1);

Explanation explain(const RecommenderState& rec, const CompressorState& comp, const Dataset& ds,
                    std::int64_t user_id, int k_steps, int k_users, int row = -1);

}  // namespace poixa
