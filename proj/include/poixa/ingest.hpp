#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "poixa/dataset.hpp"

namespace poixa {

struct BoundingBox {
  double lat_min = -90.0, lat_max = 90.0;
  double lon_min = -180.0, lon_max = 180.0;

  bool contains(double lat, double lon) const {
    return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
  }
};

// Default extraction window for the New York subset.
inline constexpr BoundingBox kNycBoundingBox{40.40, 41.00, -74.30, -73.60};

struct ParseStats {
  std::size_t valid = 0;
  std::size_t malformed = 0;
};

// Tab-separated lines: user \t iso8601-utc-time \t lat \t lon \t poi.
// Malformed lines are counted and skipped; raises EmptyDataset when nothing
// parses and CorruptDataset when more than half the lines are malformed.
std::vector<CheckIn> parse_checkins(std::istream& in, ParseStats* stats = nullptr);

// Groups check-ins into one trajectory per user: bbox filter, exact-duplicate
// drop, ascending time sort, raw_hour from the global minimum time, users
// shorter than min_len dropped.
Dataset build_trajectories(const std::vector<CheckIn>& checkins, const BoundingBox& bbox,
                           int min_len);

// Next-item split: last step is the target, the rest (truncated to the most
// recent t_max steps) is the model input.
DatasetSplit split_last(const Trajectory& traj, int t_max);

// Canonical dataset file, versioned line-oriented text:
//   PXD1 <n_users> <n_pois>
//   P <poi_id> <lat> <lon>
//   U <user_id> <k> <poi,raw_hour> ...
// Round-trips bit-exactly.
void save_dataset(const Dataset& ds, std::ostream& out);
Dataset load_dataset(std::istream& in);
void save_dataset_file(const Dataset& ds, const std::string& path);
Dataset load_dataset_file(const std::string& path);
std::string dataset_to_string(const Dataset& ds);

// Reads a whole file into memory, transparently inflating gzip.
std::string read_text_file_auto(const std::string& path);

// "2010-10-19T23:55:27Z" -> seconds since the Unix epoch. Returns false on
// malformed input.
bool parse_iso8601_utc(const std::string& text, std::int64_t& out_seconds);
std::string format_iso8601_utc(std::int64_t seconds);

}  // namespace poixa
