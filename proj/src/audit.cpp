#include "poixa/audit.hpp"

#include <algorithm>
#include <set>

#include "poixa/geo.hpp"
#include "poixa/ingest.hpp"

namespace poixa {

namespace {

double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

// k distinct user indices in [0, n) excluding `self`, in draw order.
std::vector<int> draw_other_users(int n, int self, int k, Rng& rng) {
  require(k <= n - 1, errc::domain_error, "not enough users to sample from");
  std::vector<std::int64_t> picks = rng.sample_without_replacement(n - 1, k);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t p : picks) {
    int idx = static_cast<int>(p);
    if (idx >= self) ++idx;  // skip over the query user
    out.push_back(idx);
  }
  return out;
}

// Mean of the k smallest entries (all of them without k); values are sorted
// first so the result is independent of argument order.
double mean_smallest(std::vector<double> values, std::optional<int> closest_k) {
  require(!values.empty(), errc::empty_set, "no pairs to average");
  std::sort(values.begin(), values.end());
  std::size_t take = values.size();
  if (closest_k) {
    require(*closest_k >= 1, errc::domain_error, "closest_k must be >= 1");
    take = std::min<std::size_t>(take, static_cast<std::size_t>(*closest_k));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < take; ++i) acc += values[i];
  return acc / static_cast<double>(take);
}

std::vector<double> poi_pair_distances(const Trajectory& a, const Trajectory& b,
                                       const PoiRegistry& registry) {
  std::set<std::int64_t> pa, pb;
  for (const Step& s : a.steps) pa.insert(s.poi_id);
  for (const Step& s : b.steps) pb.insert(s.poi_id);
  require(!pa.empty() && !pb.empty(), errc::empty_set, "empty POI set");
  std::vector<double> out;
  out.reserve(pa.size() * pb.size());
  for (std::int64_t ia : pa) {
    const GeoPoint& ga = registry.coord(ia);
    for (std::int64_t ib : pb) out.push_back(haversine_km(ga, registry.coord(ib)));
  }
  return out;
}

std::vector<double> time_pair_differences(const Trajectory& a, const Trajectory& b) {
  require(!a.steps.empty() && !b.steps.empty(), errc::empty_set, "empty timestamp set");
  std::vector<double> out;
  out.reserve(a.steps.size() * b.steps.size());
  for (const Step& sa : a.steps)
    for (const Step& sb : b.steps)
      out.push_back(std::abs(static_cast<double>(sa.hour_of_week - sb.hour_of_week)));
  return out;
}

}  // namespace

PredictFn make_predict_fn(const RecommenderState& state, const PoiRegistry& registry) {
  return [&state, &registry](int user_index, const std::vector<Step>& steps) {
    return predict(state, registry, user_index, steps);
  };
}

SimilarFn make_similar_fn(const CompressorState& comp, const RecommenderState& rec,
                          const Dataset& ds) {
  return [&comp, &rec, &ds](std::int64_t user_id, int k) {
    return similar_users(comp, rec, ds, user_id, k);
  };
}

std::vector<Step> perturb_timestep(const std::vector<Step>& steps, int t_index,
                                   const PoiRegistry& registry, Rng& rng) {
  require(t_index >= 0 && t_index < static_cast<int>(steps.size()), errc::bad_index,
          "timestep " + std::to_string(t_index) + " out of range");
  require(registry.size() >= 2, errc::no_candidate, "need at least 2 POIs to redraw");
  std::vector<Step> out = steps;
  Step& s = out[static_cast<std::size_t>(t_index)];

  // Uniform over the other L-1 POIs.
  const int original = registry.index_of(s.poi_id);
  int drawn = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(registry.size() - 1)));
  if (drawn >= original) ++drawn;
  s.poi_id = registry.id_at(drawn);

  const std::size_t t = static_cast<std::size_t>(t_index);
  const std::int64_t lo = t == 0 ? 0 : steps[t - 1].raw_hour;
  const std::int64_t hi =
      t + 1 == steps.size() ? steps[t].raw_hour + kHoursPerWeek : steps[t + 1].raw_hour;
  s.raw_hour = rng.uniform_int(lo, hi);
  s.hour_of_week = static_cast<int>(s.raw_hour % kHoursPerWeek);
  return out;
}

Exp1Report run_exp1(const Dataset& ds, int t_max, const PredictFn& predict_fn, int trials,
                    std::uint64_t seed, double threshold) {
  require(trials >= 1, errc::config_error, "trials must be >= 1");
  Exp1Report report;
  report.trials = trials;
  report.threshold = threshold;

  std::array<std::vector<double>*, 4> conditions = {&report.top1, &report.top2, &report.random_a,
                                                    &report.random_b};
  for (int u = 0; u < ds.n_users(); ++u) {
    const Trajectory& traj = ds.trajectories[static_cast<std::size_t>(u)];
    report.user_ids.push_back(traj.user_id);
    const std::vector<Step> steps = split_last(traj, t_max).input_steps;
    const Prediction base = predict_fn(u, steps);

    std::vector<std::pair<int, double>> top;
    {
      // Two highest-weight timesteps of the recommended candidate's W row.
      std::vector<std::pair<int, double>> entries;
      for (int t = 0; t < base.valid_T; ++t)
        entries.emplace_back(t, static_cast<double>(base.weight_matrix.at(base.recommended, t)));
      std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      top.assign(entries.begin(), entries.begin() + 2);
    }

    for (int cond = 0; cond < 4; ++cond) {
      int changes = 0;
      for (int trial = 0; trial < trials; ++trial) {
        Rng rng = derive_rng(seed, StreamKey("exp1", {cond, u, trial}));
        int t_index;
        if (cond == 0) {
          t_index = top[0].first;
        } else if (cond == 1) {
          t_index = top[1].first;
        } else {
          t_index = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(base.valid_T)));
        }
        std::vector<Step> perturbed = perturb_timestep(steps, t_index, ds.registry, rng);
        if (predict_fn(u, perturbed).recommended != base.recommended) ++changes;
      }
      conditions[static_cast<std::size_t>(cond)]->push_back(static_cast<double>(changes));
    }
  }

  report.mean_top1 = mean_of(report.top1);
  report.mean_top2 = mean_of(report.top2);
  report.mean_random_a = mean_of(report.random_a);
  report.mean_random_b = mean_of(report.random_b);
  report.tests = {
      {"top1_vs_top2", anova_one_way({report.top1, report.top2}, threshold)},
      {"random_a_vs_random_b", anova_one_way({report.random_a, report.random_b}, threshold)},
      {"top1_vs_random_a", anova_one_way({report.top1, report.random_a}, threshold)},
      {"top2_vs_random_a", anova_one_way({report.top2, report.random_a}, threshold)},
  };
  return report;
}

Exp2Report run_exp2(const Dataset& ds, int t_max, const PredictFn& predict_fn,
                    const SimilarFn& similar, int random_trials, std::uint64_t seed,
                    double threshold) {
  require(random_trials >= 1, errc::config_error, "random_trials must be >= 1");
  require(ds.n_users() > random_trials, errc::not_enough_users,
          "need more than random_trials users");
  Exp2Report report;
  report.random_trials = random_trials;
  report.threshold = threshold;

  for (int u = 0; u < ds.n_users(); ++u) {
    const Trajectory& traj = ds.trajectories[static_cast<std::size_t>(u)];
    report.user_ids.push_back(traj.user_id);
    const std::vector<Step> steps = split_last(traj, t_max).input_steps;
    const int base = predict_fn(u, steps).recommended;

    const std::vector<ScoredUser> sims = similar(traj.user_id, 2);
    const int most = ds.user_index(sims[0].user_id);
    const int second = ds.user_index(sims[1].user_id);
    report.most_similar.push_back(predict_fn(most, steps).recommended == base ? 1.0 : 0.0);
    report.second_similar.push_back(predict_fn(second, steps).recommended == base ? 1.0 : 0.0);

    for (int cond = 0; cond < 2; ++cond) {
      Rng rng = derive_rng(seed, StreamKey("exp2_random", {cond, u}));
      // Replacement users drawn without replacement (random_trials distinct).
      std::vector<int> others = draw_other_users(ds.n_users(), u, random_trials, rng);
      int unchanged = 0;
      for (int other : others)
        if (predict_fn(other, steps).recommended == base) ++unchanged;
      double frac = static_cast<double>(unchanged) / static_cast<double>(random_trials);
      (cond == 0 ? report.random_a : report.random_b).push_back(frac);
    }
  }

  report.prop_most = mean_of(report.most_similar);
  report.prop_second = mean_of(report.second_similar);
  report.prop_random_a = mean_of(report.random_a);
  report.prop_random_b = mean_of(report.random_b);
  report.tests = {
      {"most_similar_vs_random_a",
       t_test_two_sample(report.most_similar, report.random_a, threshold)},
      {"second_similar_vs_random_a",
       t_test_two_sample(report.second_similar, report.random_a, threshold)},
      {"random_a_vs_random_b", t_test_two_sample(report.random_a, report.random_b, threshold)},
  };
  return report;
}

double avg_poi_distance(const Trajectory& a, const Trajectory& b, const PoiRegistry& registry,
                        std::optional<int> closest_k) {
  return mean_smallest(poi_pair_distances(a, b, registry), closest_k);
}

double avg_time_difference(const Trajectory& a, const Trajectory& b,
                           std::optional<int> closest_k) {
  return mean_smallest(time_pair_differences(a, b), closest_k);
}

Exp3Report run_exp3(const Dataset& ds, const SimilarFn& similar, int n_random,
                    std::uint64_t seed, double threshold, int closest_k) {
  require(n_random >= 2, errc::config_error, "n_random must be >= 2");
  require(ds.n_users() > n_random + 2, errc::not_enough_users, "too few users for exp3");
  Exp3Report report;
  report.n_random = n_random;
  report.closest_k = closest_k;
  report.threshold = threshold;
  report.n_users = ds.n_users();
  report.notes = {
      "comparison: two-sided one-sample t-test of the random-user distances against the "
      "deterministic similar-user distance",
      "significance additionally requires the similar-user distance to lie below the random mean",
      "random comparison users are drawn without replacement",
  };

  for (int u = 0; u < ds.n_users(); ++u) {
    const Trajectory& traj = ds.trajectories[static_cast<std::size_t>(u)];
    const std::vector<ScoredUser> sims = similar(traj.user_id, 2);
    Rng rng = derive_rng(seed, StreamKey("exp3_random", {u}));
    const std::vector<int> randoms = draw_other_users(ds.n_users(), u, n_random, rng);

    // Pair-value lists are shared between the all-pairs and closest-k variants.
    auto eval_user = [&](const Trajectory& other, int variant) -> double {
      switch (variant) {
        case 0: return avg_poi_distance(traj, other, ds.registry);
        case 1: return avg_time_difference(traj, other);
        case 2: return avg_poi_distance(traj, other, ds.registry, closest_k);
        default: return avg_time_difference(traj, other, closest_k);
      }
    };

    for (int variant = 0; variant < 4; ++variant) {
      std::vector<double> random_values;
      random_values.reserve(static_cast<std::size_t>(n_random));
      for (int r : randoms)
        random_values.push_back(eval_user(ds.trajectories[static_cast<std::size_t>(r)], variant));
      for (int rank = 0; rank < 2; ++rank) {
        const Trajectory& sim_traj =
            ds.trajectories[static_cast<std::size_t>(ds.user_index(sims[static_cast<std::size_t>(rank)].user_id))];
        const double deterministic = eval_user(sim_traj, variant);
        TestResult t = t_test_one_sample(random_values, deterministic, threshold);
        const double random_mean = mean_of(random_values);
        if (t.significant && deterministic < random_mean)
          report.significant_counts[static_cast<std::size_t>(variant)][static_cast<std::size_t>(rank)] += 1;
      }
    }
  }

  for (std::size_t variant = 0; variant < 4; ++variant)
    for (std::size_t rank = 0; rank < 2; ++rank)
      report.proportions[variant][rank] =
          static_cast<double>(report.significant_counts[variant][rank]) / ds.n_users();
  return report;
}

CloneDataset build_clone_dataset(const Dataset& ds, std::uint64_t seed) {
  const int n = ds.n_users();
  require(n >= 300, errc::not_enough_users,
          "clone dataset needs at least 300 users, got " + std::to_string(n));

  CloneDataset out;
  out.dataset.registry = ds.registry;
  out.dataset.trajectories.reserve(static_cast<std::size_t>(n));
  // Users re-indexed 1..n in ascending original-id order.
  for (int i = 0; i < n; ++i) {
    Trajectory t = ds.trajectories[static_cast<std::size_t>(i)];
    t.user_id = i + 1;
    out.dataset.trajectories.push_back(std::move(t));
  }

  for (std::int64_t i = 1; i <= 100; ++i) {
    const Trajectory& source = out.dataset.trajectories[static_cast<std::size_t>(i - 1)];
    const int len = static_cast<int>(source.steps.size());

    {  // POI clone: identical timestamps, one POI swapped for its nearest neighbor.
      Rng rng = derive_rng(seed, StreamKey("clone_poi", {i}));
      const int t = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(len)));
      Trajectory clone = source;
      clone.user_id = i + 100;
      Step& s = clone.steps[static_cast<std::size_t>(t)];
      s.poi_id = nearest_other_poi(out.dataset.registry, s.poi_id);
      out.dataset.trajectories[static_cast<std::size_t>(i + 100 - 1)] = std::move(clone);
      out.manifest.push_back({i + 100, i, t, "poi"});
    }

    {  // Time clone: identical POIs, one timestamp shifted by a single hour.
      Rng rng = derive_rng(seed, StreamKey("clone_time", {i}));
      Trajectory clone = source;
      clone.user_id = i + 200;
      auto& steps = clone.steps;
      auto plus_ok = [&](int t) {
        return t + 1 == len || steps[static_cast<std::size_t>(t)].raw_hour + 1 <=
                                   steps[static_cast<std::size_t>(t) + 1].raw_hour;
      };
      auto minus_ok = [&](int t) {
        const std::int64_t h = steps[static_cast<std::size_t>(t)].raw_hour - 1;
        return h >= 0 && (t == 0 || h >= steps[static_cast<std::size_t>(t) - 1].raw_hour);
      };
      int t = -1;
      std::int64_t shift = 0;
      // The last timestep can always move forward, so this terminates.
      while (shift == 0) {
        t = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(len)));
        if (plus_ok(t))
          shift = 1;
        else if (minus_ok(t))
          shift = -1;
      }
      Step& s = steps[static_cast<std::size_t>(t)];
      s.raw_hour += shift;
      s.hour_of_week = static_cast<int>(s.raw_hour % kHoursPerWeek);
      out.dataset.trajectories[static_cast<std::size_t>(i + 200 - 1)] = std::move(clone);
      out.manifest.push_back({i + 200, i, t, "time"});
    }
  }
  return out;
}

int count_clone_hits(const SimilarFn& similar, int n_sources) {
  int hits = 0;
  for (std::int64_t i = 1; i <= n_sources; ++i) {
    const std::vector<ScoredUser> top = similar(i, 2);
    for (const ScoredUser& s : top)
      if (s.user_id == i + 100 || s.user_id == i + 200) {
        ++hits;
        break;
      }
  }
  return hits;
}

Exp4Report run_exp4(const CloneDataset& clones, ModelConfig model_cfg, CompressorConfig comp_cfg,
                    std::uint64_t master_seed, std::ostream* progress) {
  Exp4Report report;
  report.n_users = clones.dataset.n_users();
  report.manifest = clones.manifest;
  report.chance_baseline =
      static_cast<double>(report.n_sources) * 4.0 / (static_cast<double>(report.n_users) - 1.0);

  // Retrain both models from scratch with fresh derived seeds.
  model_cfg.seed = derive_seed(master_seed, StreamKey("exp4_recommender"));
  comp_cfg.seed = derive_seed(master_seed, StreamKey("exp4_compressor"));
  RecommenderState rec =
      train_recommender<float>(model_cfg, clones.dataset, &report.recommender_log, progress);
  CompressorState comp =
      train_compressor<float>(comp_cfg, rec, clones.dataset, &report.compressor_log, progress);

  report.hits = count_clone_hits(make_similar_fn(comp, rec, clones.dataset), report.n_sources);
  return report;
}

}  // namespace poixa
