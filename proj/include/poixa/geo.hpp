#pragma once

#include <cstdint>

namespace poixa {

class PoiRegistry;

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

// Great-circle distance in kilometers (haversine, mean Earth radius).
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// The distinct POI nearest to `poi_id`; ties broken by smallest id.
std::int64_t nearest_other_poi(const PoiRegistry& registry, std::int64_t poi_id);

}  // namespace poixa
