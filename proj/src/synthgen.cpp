#include "poixa/synthgen.hpp"

#include <algorithm>
#include <sstream>

#include "poixa/rng.hpp"

namespace poixa {

namespace {

struct Poi {
  std::int64_t id;
  double lat, lon;
};

constexpr std::int64_t kEpoch2010 = 1262304000;  // 2010-01-01T00:00:00Z

}  // namespace

void SynthConfig::validate() const {
  require(n_users >= 2, errc::config_error, "synth n_users must be >= 2");
  require(n_groups >= 1 && n_groups <= n_users, errc::config_error, "bad synth n_groups");
  require(route_len >= 3, errc::config_error, "synth route_len must be >= 3");
  require(min_steps >= 5 && max_steps >= min_steps, errc::config_error, "bad synth step bounds");
  require(noise_prob >= 0.0 && noise_prob < 1.0, errc::config_error, "bad synth noise_prob");
}

std::string synth_checkins(const SynthConfig& cfg) {
  cfg.validate();
  Rng layout = derive_rng(cfg.seed, StreamKey("synth_layout"));

  // Group clusters: centers spread over the box, route POIs within ~1 km.
  const double lat_span = cfg.bbox.lat_max - cfg.bbox.lat_min;
  const double lon_span = cfg.bbox.lon_max - cfg.bbox.lon_min;
  std::vector<std::vector<Poi>> routes(static_cast<std::size_t>(cfg.n_groups));
  std::int64_t next_id = 1;
  for (int g = 0; g < cfg.n_groups; ++g) {
    const double clat = cfg.bbox.lat_min + lat_span * (0.1 + 0.8 * layout.uniform());
    const double clon = cfg.bbox.lon_min + lon_span * (0.1 + 0.8 * layout.uniform());
    for (int j = 0; j < cfg.route_len; ++j) {
      routes[static_cast<std::size_t>(g)].push_back(
          {next_id++, clat + layout.uniform(-0.008, 0.008), clon + layout.uniform(-0.008, 0.008)});
    }
  }
  std::vector<Poi> extras;
  for (int e = 0; e < cfg.extra_pois; ++e) {
    extras.push_back({next_id++, cfg.bbox.lat_min + lat_span * (0.05 + 0.9 * layout.uniform()),
                      cfg.bbox.lon_min + lon_span * (0.05 + 0.9 * layout.uniform())});
  }

  std::ostringstream out;
  for (int u = 1; u <= cfg.n_users; ++u) {
    Rng rng = derive_rng(cfg.seed, StreamKey("synth_user", {u}));
    const int g = (u - 1) % cfg.n_groups;
    const auto& route = routes[static_cast<std::size_t>(g)];
    const int m = static_cast<int>(route.size());
    const int k = static_cast<int>(rng.uniform_int(cfg.min_steps, cfg.max_steps));
    const int phase = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(m)));

    std::int64_t raw_hour = rng.uniform_int(0, 167);
    std::vector<std::string> lines;
    lines.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const Poi* poi = &route[static_cast<std::size_t>((phase + i) % m)];
      // Keep the final transition clean so the target follows the route.
      const bool allow_noise = i < k - 2 && !extras.empty();
      if (allow_noise && rng.uniform() < cfg.noise_prob)
        poi = &extras[static_cast<std::size_t>(rng.bounded(extras.size()))];
      const std::int64_t secs =
          kEpoch2010 + raw_hour * 3600 + rng.uniform_int(0, 3599);
      std::ostringstream line;
      line.precision(10);
      line << u << '\t' << format_iso8601_utc(secs) << '\t' << poi->lat << '\t' << poi->lon
           << '\t' << poi->id;
      lines.push_back(line.str());
      raw_hour += rng.uniform_int(3, 9);
    }
    // Newest first, the common raw-export order; ingest re-sorts ascending.
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) out << *it << '\n';
  }
  return out.str();
}

Dataset synth_dataset(const SynthConfig& cfg, int min_len) {
  std::istringstream in(synth_checkins(cfg));
  std::vector<CheckIn> checkins = parse_checkins(in);
  return build_trajectories(checkins, cfg.bbox, min_len);
}

}  // namespace poixa
