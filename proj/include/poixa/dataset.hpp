#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poixa/error.hpp"
#include "poixa/geo.hpp"

namespace poixa {

inline constexpr int kHoursPerWeek = 168;

struct CheckIn {
  std::int64_t user_id = 0;
  std::int64_t utc_time = 0;  // seconds since the Unix epoch
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t poi_id = 0;
};

struct Step {
  std::int64_t poi_id = 0;
  std::int64_t raw_hour = 0;  // whole hours since the dataset's earliest check-in
  int hour_of_week = 0;       // raw_hour mod 168

  bool operator==(const Step&) const = default;
};

struct Trajectory {
  std::int64_t user_id = 0;
  std::vector<Step> steps;
};

// POI id -> coordinates, with a contiguous internal index 0..L-1 assigned in
// ascending id order.
class PoiRegistry {
 public:
  PoiRegistry() = default;

  // Pairs need not be sorted; ids must be unique.
  static PoiRegistry from_pairs(std::vector<std::pair<std::int64_t, GeoPoint>> pairs);

  int size() const { return static_cast<int>(ids_.size()); }
  bool contains(std::int64_t poi_id) const { return index_.count(poi_id) != 0; }

  int index_of(std::int64_t poi_id) const {
    auto it = index_.find(poi_id);
    require(it != index_.end(), errc::unknown_poi, "poi " + std::to_string(poi_id));
    return it->second;
  }

  std::int64_t id_at(int index) const { return ids_.at(static_cast<std::size_t>(index)); }
  const GeoPoint& coord_at(int index) const { return coords_.at(static_cast<std::size_t>(index)); }
  const GeoPoint& coord(std::int64_t poi_id) const { return coord_at(index_of(poi_id)); }
  const std::vector<std::int64_t>& ids() const { return ids_; }

 private:
  std::vector<std::int64_t> ids_;  // ascending
  std::vector<GeoPoint> coords_;
  std::unordered_map<std::int64_t, int> index_;
};

// Trajectories in ascending user_id order plus the POI registry covering
// every POI they reference. The user's internal index is its position.
struct Dataset {
  std::vector<Trajectory> trajectories;
  PoiRegistry registry;

  int n_users() const { return static_cast<int>(trajectories.size()); }

  int user_index(std::int64_t user_id) const;
  bool has_user(std::int64_t user_id) const;
  const Trajectory& trajectory_of(std::int64_t user_id) const {
    return trajectories[static_cast<std::size_t>(user_index(user_id))];
  }
};

struct DatasetSplit {
  std::vector<Step> input_steps;  // all but the last step, most recent t_max kept
  std::int64_t target_poi = 0;    // the last step's POI
};

}  // namespace poixa
