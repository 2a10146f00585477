#include "poixa/geo.hpp"

#include <algorithm>
#include <cmath>

#include "poixa/dataset.hpp"
#include "poixa/error.hpp"

namespace poixa {

namespace {
inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
}  // namespace

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = deg2rad(a.lat);
  const double phi2 = deg2rad(b.lat);
  const double s_lat = std::sin(deg2rad(b.lat - a.lat) * 0.5);
  const double s_lon = std::sin(deg2rad(b.lon - a.lon) * 0.5);
  double h = s_lat * s_lat + std::cos(phi1) * std::cos(phi2) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

std::int64_t nearest_other_poi(const PoiRegistry& registry, std::int64_t poi_id) {
  const int query = registry.index_of(poi_id);
  require(registry.size() >= 2, errc::no_candidate, "registry has a single POI");
  const GeoPoint& origin = registry.coord_at(query);
  std::int64_t best_id = -1;
  double best_km = 0.0;
  for (int i = 0; i < registry.size(); ++i) {
    if (i == query) continue;
    const double km = haversine_km(origin, registry.coord_at(i));
    // ids() is ascending, so strict < keeps the smallest id on ties.
    if (best_id < 0 || km < best_km) {
      best_id = registry.id_at(i);
      best_km = km;
    }
  }
  return best_id;
}

}  // namespace poixa
