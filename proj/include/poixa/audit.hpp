#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poixa/compressor.hpp"
#include "poixa/dataset.hpp"
#include "poixa/recommender.hpp"
#include "poixa/rng.hpp"
#include "poixa/stats.hpp"

namespace poixa {

// The audit runners are written against these two call shapes rather than
// concrete model types so the null-model suites (constant-output model,
// user-blind model) and the plug-in oracle similarity can drive the same
// machinery as the trained models.
using PredictFn = std::function<Prediction(int user_index, const std::vector<Step>& steps)>;
using SimilarFn = std::function<std::vector<ScoredUser>(std::int64_t user_id, int k)>;

PredictFn make_predict_fn(const RecommenderState& state, const PoiRegistry& registry);
SimilarFn make_similar_fn(const CompressorState& comp, const RecommenderState& rec,
                          const Dataset& ds);

struct LabeledTest {
  std::string label;
  TestResult result;
};

// ---- Experiment 1: timestep-importance perturbation -------------------------

// Replaces the POI at t_index with a uniformly random different POI and
// redraws raw_hour uniformly between the neighboring timestamps (bounds 0 and
// raw_hour+168 at the sequence edges). hour_of_week is recomputed.
std::vector<Step> perturb_timestep(const std::vector<Step>& steps, int t_index,
                                   const PoiRegistry& registry, Rng& rng);

struct Exp1Report {
  int trials = 10;
  double threshold = 0.05;
  std::vector<std::int64_t> user_ids;
  // Per-user output-change counts in [0, trials] for the four conditions.
  std::vector<double> top1, top2, random_a, random_b;
  double mean_top1 = 0, mean_top2 = 0, mean_random_a = 0, mean_random_b = 0;
  std::vector<LabeledTest> tests;  // 4 pairwise ANOVA comparisons
};

Exp1Report run_exp1(const Dataset& ds, int t_max, const PredictFn& predict, int trials,
                    std::uint64_t seed, double threshold = 0.05);

// ---- Experiment 2: user-swap stability --------------------------------------

struct Exp2Report {
  int random_trials = 30;
  double threshold = 0.05;
  std::vector<std::int64_t> user_ids;
  // Per-user unchanged indicators: binary for the similar-user swaps,
  // fraction over random_trials for the random swaps.
  std::vector<double> most_similar, second_similar, random_a, random_b;
  double prop_most = 0, prop_second = 0, prop_random_a = 0, prop_random_b = 0;
  std::vector<LabeledTest> tests;  // 3 t-test comparisons
};

Exp2Report run_exp2(const Dataset& ds, int t_max, const PredictFn& predict,
                    const SimilarFn& similar, int random_trials, std::uint64_t seed,
                    double threshold = 0.05);

// ---- Experiment 3: what similarity means ------------------------------------

// Mean haversine distance over the product of the two users' distinct POI
// sets; with closest_k, the mean of the k smallest pair distances.
double avg_poi_distance(const Trajectory& a, const Trajectory& b, const PoiRegistry& registry,
                        std::optional<int> closest_k = std::nullopt);

// Mean |hour_of_week difference| over the product of the two users' timestamp
// multisets (no weekly wrap); closest_k as above.
double avg_time_difference(const Trajectory& a, const Trajectory& b,
                           std::optional<int> closest_k = std::nullopt);

inline constexpr std::array<const char*, 4> kExp3Variants = {
    "poi_distance_all_pairs",
    "time_difference_all_pairs",
    "poi_distance_closest_pairs",
    "time_difference_closest_pairs",
};

struct Exp3Report {
  int n_random = 10;
  int closest_k = 10;
  double threshold = 0.05;
  int n_users = 0;
  // [variant][rank]: rank 0 = most similar user, 1 = second most similar.
  std::array<std::array<int, 2>, 4> significant_counts{};
  std::array<std::array<double, 2>, 4> proportions{};
  std::vector<std::string> notes;
};

// For each user, compares the deterministic distance to the (2nd-)most
// similar user against the distances to n_random random users with a
// two-sided one-sample t-test; a user counts as significant when p <
// threshold and the deterministic distance is below the random mean.
Exp3Report run_exp3(const Dataset& ds, const SimilarFn& similar, int n_random,
                    std::uint64_t seed, double threshold = 0.05, int closest_k = 10);

// ---- Experiment 4: planted almost-clones ------------------------------------

struct CloneRecord {
  std::int64_t clone_id = 0;
  std::int64_t source_id = 0;
  int altered_index = 0;
  std::string kind;  // "poi" | "time"
};

struct CloneDataset {
  Dataset dataset;  // users re-indexed 1..n
  std::vector<CloneRecord> manifest;
};

// Re-indexes users to 1..n, then replaces users 101..200 with POI clones of
// users 1..100 (one timestep's POI swapped for its geographically nearest
// neighbor) and users 201..300 with time clones (one timestep shifted by one
// hour, preserving monotonicity).
CloneDataset build_clone_dataset(const Dataset& ds, std::uint64_t seed);

// Hits over source users 1..n_sources: a hit when the top-2 similar users
// intersect {i+100, i+200}.
int count_clone_hits(const SimilarFn& similar, int n_sources = 100);

struct Exp4Report {
  int hits = 0;
  int n_sources = 100;
  int n_users = 0;
  double chance_baseline = 0.0;  // n_sources * 4 / (n_users - 1)
  std::vector<CloneRecord> manifest;
  TrainLog recommender_log;
  TrainLog compressor_log;
};

// Retrains both models from scratch on the clone dataset (fresh seeds derived
// from master_seed) and counts clone hits with the trained compressor.
Exp4Report run_exp4(const CloneDataset& clones, ModelConfig model_cfg,
                    CompressorConfig comp_cfg, std::uint64_t master_seed,
                    std::ostream* progress = nullptr);

}  // namespace poixa
