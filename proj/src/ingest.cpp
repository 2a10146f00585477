#include "poixa/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace poixa {

namespace {

// Howard Hinnant's civil-date algorithms; avoids timegm portability issues.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

bool parse_f64(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return false;
  out = v;
  return true;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

bool parse_iso8601_utc(const std::string& text, std::int64_t& out_seconds) {
  int y, mo, d, h, mi, s;
  char z;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &z) != 7)
    return false;
  if (z != 'Z') return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return false;
  if (h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return false;
  out_seconds = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 +
                h * 3600 + mi * 60 + s;
  return true;
}

std::string format_iso8601_utc(std::int64_t seconds) {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem % 3600) / 60), static_cast<long long>(rem % 60));
  return buf;
}

std::vector<CheckIn> parse_checkins(std::istream& in, ParseStats* stats) {
  std::vector<CheckIn> out;
  ParseStats local;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    CheckIn c;
    bool ok = fields.size() == 5 && parse_i64(fields[0], c.user_id) &&
              parse_iso8601_utc(fields[1], c.utc_time) && parse_f64(fields[2], c.lat) &&
              parse_f64(fields[3], c.lon) && parse_i64(fields[4], c.poi_id);
    ok = ok && c.user_id > 0 && c.poi_id > 0 && c.lat >= -90.0 && c.lat <= 90.0 &&
         c.lon >= -180.0 && c.lon <= 180.0;
    if (!ok) {
      ++local.malformed;
      continue;
    }
    ++local.valid;
    out.push_back(c);
  }
  if (stats) *stats = local;
  require(local.valid > 0, errc::empty_dataset, "no valid check-in lines");
  require(local.malformed * 2 <= local.valid + local.malformed, errc::corrupt_dataset,
          "more than half of the input lines are malformed (" + std::to_string(local.malformed) +
              " of " + std::to_string(local.valid + local.malformed) + ")");
  return out;
}

Dataset build_trajectories(const std::vector<CheckIn>& checkins, const BoundingBox& bbox,
                           int min_len) {
  require(min_len >= 3, errc::domain_error, "min_len must be >= 3");

  std::vector<CheckIn> kept;
  kept.reserve(checkins.size());
  std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> seen;  // exact-duplicate filter
  for (const CheckIn& c : checkins) {
    if (!bbox.contains(c.lat, c.lon)) continue;
    if (!seen.emplace(c.user_id, c.utc_time, c.poi_id).second) continue;
    kept.push_back(c);
  }
  require(!kept.empty(), errc::empty_dataset, "no check-ins inside the bounding box");

  std::int64_t min_utc = kept.front().utc_time;
  for (const CheckIn& c : kept) min_utc = std::min(min_utc, c.utc_time);

  std::map<std::int64_t, std::vector<CheckIn>> by_user;
  for (const CheckIn& c : kept) by_user[c.user_id].push_back(c);

  Dataset ds;
  std::map<std::int64_t, GeoPoint> poi_coords;  // first occurrence wins, scanned in user order
  for (auto& [user_id, rows] : by_user) {
    if (static_cast<int>(rows.size()) < min_len) continue;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const CheckIn& a, const CheckIn& b) { return a.utc_time < b.utc_time; });
    Trajectory traj;
    traj.user_id = user_id;
    traj.steps.reserve(rows.size());
    for (const CheckIn& c : rows) {
      Step s;
      s.poi_id = c.poi_id;
      s.raw_hour = (c.utc_time - min_utc) / 3600;
      s.hour_of_week = static_cast<int>(s.raw_hour % kHoursPerWeek);
      traj.steps.push_back(s);
      poi_coords.emplace(c.poi_id, GeoPoint{c.lat, c.lon});
    }
    ds.trajectories.push_back(std::move(traj));
  }
  require(!ds.trajectories.empty(), errc::empty_dataset,
          "no user has at least " + std::to_string(min_len) + " check-ins");

  std::vector<std::pair<std::int64_t, GeoPoint>> pairs(poi_coords.begin(), poi_coords.end());
  ds.registry = PoiRegistry::from_pairs(std::move(pairs));
  return ds;
}

DatasetSplit split_last(const Trajectory& traj, int t_max) {
  require(t_max >= 2, errc::domain_error, "t_max must be >= 2");
  require(traj.steps.size() >= 3, errc::trajectory_too_short,
          "user " + std::to_string(traj.user_id) + " has " + std::to_string(traj.steps.size()) +
              " steps");
  DatasetSplit split;
  split.target_poi = traj.steps.back().poi_id;
  const std::size_t n_inputs = traj.steps.size() - 1;
  const std::size_t keep = std::min<std::size_t>(n_inputs, static_cast<std::size_t>(t_max));
  split.input_steps.assign(traj.steps.begin() + static_cast<std::ptrdiff_t>(n_inputs - keep),
                           traj.steps.begin() + static_cast<std::ptrdiff_t>(n_inputs));
  return split;
}

void save_dataset(const Dataset& ds, std::ostream& out) {
  out << "PXD1 " << ds.n_users() << ' ' << ds.registry.size() << '\n';
  for (int i = 0; i < ds.registry.size(); ++i) {
    const GeoPoint& g = ds.registry.coord_at(i);
    out << "P " << ds.registry.id_at(i) << ' ' << format_double(g.lat) << ' '
        << format_double(g.lon) << '\n';
  }
  for (const Trajectory& t : ds.trajectories) {
    out << "U " << t.user_id << ' ' << t.steps.size();
    for (const Step& s : t.steps) out << ' ' << s.poi_id << ',' << s.raw_hour;
    out << '\n';
  }
}

Dataset load_dataset(std::istream& in) {
  std::string magic;
  int n_users = 0, n_pois = 0;
  in >> magic >> n_users >> n_pois;
  require(in.good() && magic == "PXD1", errc::corrupt_dataset, "bad dataset header");
  require(n_users > 0 && n_pois > 0, errc::corrupt_dataset, "bad dataset counts");

  Dataset ds;
  std::vector<std::pair<std::int64_t, GeoPoint>> pairs;
  pairs.reserve(static_cast<std::size_t>(n_pois));
  for (int i = 0; i < n_pois; ++i) {
    std::string tag;
    std::int64_t id;
    double lat, lon;
    in >> tag >> id >> lat >> lon;
    require(in.good() && tag == "P", errc::corrupt_dataset, "bad poi line");
    pairs.emplace_back(id, GeoPoint{lat, lon});
  }
  ds.registry = PoiRegistry::from_pairs(std::move(pairs));

  ds.trajectories.reserve(static_cast<std::size_t>(n_users));
  for (int i = 0; i < n_users; ++i) {
    std::string tag;
    std::int64_t user_id;
    std::size_t k;
    in >> tag >> user_id >> k;
    require(!in.fail() && tag == "U", errc::corrupt_dataset, "bad trajectory line");
    Trajectory traj;
    traj.user_id = user_id;
    traj.steps.reserve(k);
    std::int64_t prev_hour = -1;
    for (std::size_t j = 0; j < k; ++j) {
      std::string cell;
      in >> cell;
      require(!in.fail(), errc::corrupt_dataset, "truncated trajectory");
      auto comma = cell.find(',');
      require(comma != std::string::npos, errc::corrupt_dataset, "bad step cell");
      Step s;
      require(parse_i64(cell.substr(0, comma), s.poi_id) &&
                  parse_i64(cell.substr(comma + 1), s.raw_hour),
              errc::corrupt_dataset, "bad step cell");
      require(s.raw_hour >= prev_hour, errc::corrupt_dataset, "raw_hour not monotone");
      require(ds.registry.contains(s.poi_id), errc::corrupt_dataset,
              "step references unknown poi " + std::to_string(s.poi_id));
      prev_hour = s.raw_hour;
      s.hour_of_week = static_cast<int>(s.raw_hour % kHoursPerWeek);
      traj.steps.push_back(s);
    }
    require(traj.steps.size() >= 3, errc::corrupt_dataset, "trajectory shorter than 3 steps");
    require(ds.trajectories.empty() || ds.trajectories.back().user_id < user_id,
            errc::corrupt_dataset, "user ids not ascending");
    ds.trajectories.push_back(std::move(traj));
  }
  return ds;
}

std::string dataset_to_string(const Dataset& ds) {
  std::ostringstream os;
  save_dataset(ds, os);
  return os.str();
}

void save_dataset_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::missing_dataset, "cannot write " + path);
  save_dataset(ds, out);
  out.flush();
  require(out.good(), errc::missing_dataset, "write failed for " + path);
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::missing_dataset, path);
  return load_dataset(in);
}

std::string read_text_file_auto(const std::string& path) {
  {
    std::ifstream probe(path, std::ios::binary);
    require(probe.good(), errc::missing_dataset, path);
  }
  gzFile gz = gzopen(path.c_str(), "rb");  // reads plain files too
  require(gz != nullptr, errc::missing_dataset, path);
  std::string content;
  char buf[1 << 16];
  int n;
  while ((n = gzread(gz, buf, sizeof(buf))) > 0) content.append(buf, static_cast<std::size_t>(n));
  const bool ok = n == 0;
  gzclose(gz);
  require(ok, errc::corrupt_dataset, "failed to decompress " + path);
  return content;
}

}  // namespace poixa
