#include "poixa/explain.hpp"

#include <algorithm>

namespace poixa {

std::vector<std::pair<int, double>> important_timesteps(const Prediction& pred, int k, int row) {
  require(k >= 1 && k <= pred.valid_T, errc::bad_k,
          "k must be in [1, valid_T], got " + std::to_string(k));
  if (row < 0) row = pred.recommended;
  require(row < pred.weight_matrix.rows(), errc::bad_index, "candidate row out of range");
  std::vector<std::pair<int, double>> entries;
  entries.reserve(static_cast<std::size_t>(pred.valid_T));
  for (int t = 0; t < pred.valid_T; ++t)
    entries.emplace_back(t, static_cast<double>(pred.weight_matrix.at(row, t)));
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  entries.resize(static_cast<std::size_t>(k));
  return entries;
}

Explanation explain(const RecommenderState& rec, const CompressorState& comp, const Dataset& ds,
                    std::int64_t user_id, int k_steps, int k_users, int row) {
  const int user = ds.user_index(user_id);
  DatasetSplit split = split_last(ds.trajectories[static_cast<std::size_t>(user)], rec.config.t_max);
  Prediction pred = predict(rec, ds.registry, user, split.input_steps);

  Explanation ex;
  ex.user_id = user_id;
  ex.recommended_index = pred.recommended;
  ex.recommended_poi = ds.registry.id_at(pred.recommended);
  ex.valid_T = pred.valid_T;
  ex.timestep_ranking = important_timesteps(pred, std::min(k_steps, pred.valid_T), row);
  ex.similar = similar_users(comp, rec, ds, user_id, k_users);
  return ex;
}

}  // namespace poixa
