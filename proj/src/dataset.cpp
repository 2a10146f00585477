#include "poixa/dataset.hpp"

#include <algorithm>

namespace poixa {

PoiRegistry PoiRegistry::from_pairs(std::vector<std::pair<std::int64_t, GeoPoint>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  PoiRegistry reg;
  reg.ids_.reserve(pairs.size());
  reg.coords_.reserve(pairs.size());
  for (const auto& [id, coord] : pairs) {
    require(reg.ids_.empty() || reg.ids_.back() != id, errc::corrupt_dataset,
            "duplicate poi id " + std::to_string(id));
    reg.index_.emplace(id, static_cast<int>(reg.ids_.size()));
    reg.ids_.push_back(id);
    reg.coords_.push_back(coord);
  }
  return reg;
}

int Dataset::user_index(std::int64_t user_id) const {
  auto it = std::lower_bound(trajectories.begin(), trajectories.end(), user_id,
                             [](const Trajectory& t, std::int64_t id) { return t.user_id < id; });
  require(it != trajectories.end() && it->user_id == user_id, errc::unknown_id,
          "user " + std::to_string(user_id));
  return static_cast<int>(it - trajectories.begin());
}

bool Dataset::has_user(std::int64_t user_id) const {
  auto it = std::lower_bound(trajectories.begin(), trajectories.end(), user_id,
                             [](const Trajectory& t, std::int64_t id) { return t.user_id < id; });
  return it != trajectories.end() && it->user_id == user_id;
}

}  // namespace poixa
