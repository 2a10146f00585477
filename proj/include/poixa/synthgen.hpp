#pragma once

#include <cstdint>
#include <string>

#include "poixa/ingest.hpp"

namespace poixa {

// Synthetic check-in generator for desk-scale runs and tests. Users belong to
// groups; each group walks a cyclic route over a geographic cluster of POIs,
// so the next visit is predictable from the most recent ones and same-group
// users have similar trajectories.
struct SynthConfig {
  int n_users = 200;
  int n_groups = 20;
  int route_len = 6;      // POIs per group route
  int extra_pois = 60;    // scattered decoy POIs used by noise steps
  int min_steps = 12;
  int max_steps = 26;
  double noise_prob = 0.06;  // chance a step visits a random POI instead
  std::uint64_t seed = 1;
  BoundingBox bbox = kNycBoundingBox;

  void validate() const;
};

// Tab-separated check-in lines (user, iso8601 time, lat, lon, poi), newest
// first per user, ready for parse_checkins().
std::string synth_checkins(const SynthConfig& cfg);

// Convenience: generate, parse, and build in one go.
Dataset synth_dataset(const SynthConfig& cfg, int min_len = 5);

}  // namespace poixa
