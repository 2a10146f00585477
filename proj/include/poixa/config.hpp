#pragma once

#include <cstdint>
#include <string>

#include "poixa/compressor.hpp"
#include "poixa/ingest.hpp"
#include "poixa/recommender.hpp"

namespace poixa {

// Everything a pipeline run needs, collected in one place. Loaded from a flat
// key=value file; command-line flags override file values. One master seed
// feeds every derived random stream.
struct RunConfig {
  std::string data_path;
  std::string out_dir = "out";

  ModelConfig model;
  int compressor_epochs = 80;
  double compressor_lr = 3e-3;

  int trials = 10;         // experiment 1 perturbations per condition
  int random_trials = 30;  // experiment 2 random user swaps
  int n_random = 10;       // experiment 3 random comparison users
  int closest_k = 10;      // experiment 3 closest-pairs variant
  double threshold = 0.05;

  std::uint64_t master_seed = 42;

  BoundingBox bbox = kNycBoundingBox;
  int min_len = 10;

  void validate() const;
  CompressorConfig compressor_config() const;

  // Sorted key=value lines; the config hash is the FNV-1a64 of this text.
  std::string canonical() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

// Flat key=value text, '#' starts a comment. Unknown keys are a ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Applies a single key=value override; used for CLI flag handling.
void apply_config_override(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace poixa
