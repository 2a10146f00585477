#include "poixa/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace poixa {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

ordered_json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "Infinity" : "-Infinity";
}

ordered_json vec_json(const std::vector<double>& xs) {
  ordered_json arr = ordered_json::array();
  for (double x : xs) arr.push_back(x);
  return arr;
}

ordered_json ids_json(const std::vector<std::int64_t>& xs) {
  ordered_json arr = ordered_json::array();
  for (std::int64_t x : xs) arr.push_back(x);
  return arr;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

ordered_json FullDatasetReference::exp1() {
  ordered_json j;
  j["note"] = "reference measurements on the full 1083-user New York dataset; for comparison only";
  j["mean_changes"] = {{"top1", 2.982}, {"top2", 2.599}, {"random_a", 1.813}, {"random_b", 1.810}};
  j["p_values"] = {{"top1_vs_top2", 0.010},
                   {"random_a_vs_random_b", 0.999},
                   {"top1_vs_random_a", 1.846e-20},
                   {"top2_vs_random_a", 1.536e-11}};
  return j;
}

ordered_json FullDatasetReference::exp2() {
  ordered_json j;
  j["note"] = "reference measurements on the full 1083-user New York dataset; for comparison only";
  j["proportion_unchanged"] = {{"most_similar", 0.03693},
                               {"second_similar", 0.03970},
                               {"random_a", 0.02684},
                               {"random_b", 0.02604}};
  j["p_values"] = {{"most_similar_vs_random_a", 1.257e-11},
                   {"second_similar_vs_random_a", 3.628e-14},
                   {"random_a_vs_random_b", 0.558}};
  return j;
}

ordered_json FullDatasetReference::exp3() {
  ordered_json j;
  j["note"] = "reference measurements on the full 1083-user New York dataset; for comparison only";
  j["proportion_significant"] = {
      {"poi_distance_all_pairs", {{"most_similar", 0.34257}, {"second_similar", 0.35642}}},
      {"time_difference_all_pairs", {{"most_similar", 0.30286}, {"second_similar", 0.29086}}},
      {"poi_distance_closest_pairs", {{"most_similar", 0.25762}, {"second_similar", 0.26038}}},
      {"time_difference_closest_pairs", {{"most_similar", 0.32041}, {"second_similar", 0.31579}}}};
  return j;
}

ordered_json FullDatasetReference::exp4() {
  ordered_json j;
  j["note"] = "reference measurements on the full 1083-user New York dataset; for comparison only";
  j["hits"] = 1;
  j["chance_baseline"] = 0.370;
  return j;
}

ordered_json test_result_json(const TestResult& t) {
  ordered_json j;
  j["kind"] = t.kind;
  j["statistic"] = finite_or_string(t.statistic);
  j["df1"] = t.df1;
  j["df2"] = t.df2;
  j["p_value"] = t.p_value;
  j["threshold"] = t.threshold;
  j["significant"] = t.significant;
  j["degenerate"] = t.degenerate;
  return j;
}

namespace {

ordered_json tests_json(const std::vector<LabeledTest>& tests) {
  ordered_json arr = ordered_json::array();
  for (const LabeledTest& t : tests) {
    ordered_json j;
    j["comparison"] = t.label;
    j.update(test_result_json(t.result));
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

ordered_json exp1_json(const Exp1Report& r, const ordered_json& provenance) {
  ordered_json j;
  j["experiment"] = 1;
  j["title"] = "recommendation change frequency under timestep perturbation";
  j["provenance"] = provenance;
  j["trials"] = r.trials;
  j["threshold"] = r.threshold;
  j["user_ids"] = ids_json(r.user_ids);
  j["conditions"] = {
      {"top1",
       {{"label", "randomizing the most important timestep (1/1)"},
        {"mean_changes", r.mean_top1},
        {"per_user_changes", vec_json(r.top1)}}},
      {"top2",
       {{"label", "randomizing the 2nd most important timestep (1/2)"},
        {"mean_changes", r.mean_top2},
        {"per_user_changes", vec_json(r.top2)}}},
      {"random_a",
       {{"label", "randomizing a random timestep, 1st run (1/3)"},
        {"mean_changes", r.mean_random_a},
        {"per_user_changes", vec_json(r.random_a)}}},
      {"random_b",
       {{"label", "randomizing a random timestep, 2nd run (1/4)"},
        {"mean_changes", r.mean_random_b},
        {"per_user_changes", vec_json(r.random_b)}}},
  };
  j["tests"] = tests_json(r.tests);
  j["full_dataset_reference"] = FullDatasetReference::exp1();
  return j;
}

ordered_json exp2_json(const Exp2Report& r, const ordered_json& provenance) {
  ordered_json j;
  j["experiment"] = 2;
  j["title"] = "recommendation stability under user-id swaps";
  j["provenance"] = provenance;
  j["random_trials"] = r.random_trials;
  j["threshold"] = r.threshold;
  j["notes"] = {"random replacement users are drawn without replacement"};
  j["user_ids"] = ids_json(r.user_ids);
  j["conditions"] = {
      {"most_similar",
       {{"label", "assigning the most similar user id (2/1)"},
        {"proportion_unchanged", r.prop_most},
        {"per_user_unchanged", vec_json(r.most_similar)}}},
      {"second_similar",
       {{"label", "assigning the 2nd most similar user id (2/2)"},
        {"proportion_unchanged", r.prop_second},
        {"per_user_unchanged", vec_json(r.second_similar)}}},
      {"random_a",
       {{"label", "assigning random user ids, 1st run (2/3)"},
        {"proportion_unchanged", r.prop_random_a},
        {"per_user_unchanged", vec_json(r.random_a)}}},
      {"random_b",
       {{"label", "assigning random user ids, 2nd run (2/4)"},
        {"proportion_unchanged", r.prop_random_b},
        {"per_user_unchanged", vec_json(r.random_b)}}},
  };
  j["tests"] = tests_json(r.tests);
  j["full_dataset_reference"] = FullDatasetReference::exp2();
  return j;
}

ordered_json exp3_json(const Exp3Report& r, const ordered_json& provenance) {
  ordered_json j;
  j["experiment"] = 3;
  j["title"] = "distance of similar users versus random users";
  j["provenance"] = provenance;
  j["n_random"] = r.n_random;
  j["closest_k"] = r.closest_k;
  j["threshold"] = r.threshold;
  j["n_users"] = r.n_users;
  j["notes"] = r.notes;
  ordered_json variants;
  for (std::size_t v = 0; v < kExp3Variants.size(); ++v) {
    variants[kExp3Variants[v]] = {
        {"most_similar",
         {{"significant_users", r.significant_counts[v][0]}, {"proportion", r.proportions[v][0]}}},
        {"second_similar",
         {{"significant_users", r.significant_counts[v][1]}, {"proportion", r.proportions[v][1]}}},
    };
  }
  j["variants"] = variants;
  j["full_dataset_reference"] = FullDatasetReference::exp3();
  return j;
}

ordered_json clone_manifest_json(const std::vector<CloneRecord>& manifest) {
  ordered_json arr = ordered_json::array();
  for (const CloneRecord& c : manifest) {
    ordered_json j;
    j["clone_id"] = c.clone_id;
    j["source_id"] = c.source_id;
    j["altered_index"] = c.altered_index;
    j["kind"] = c.kind;
    arr.push_back(j);
  }
  return arr;
}

ordered_json exp4_json(const Exp4Report& r, const ordered_json& provenance) {
  ordered_json j;
  j["experiment"] = 4;
  j["title"] = "recovering planted almost-clones as similar users";
  j["provenance"] = provenance;
  j["n_sources"] = r.n_sources;
  j["n_users"] = r.n_users;
  j["hits"] = r.hits;
  j["chance_baseline"] = r.chance_baseline;
  j["clone_manifest"] = clone_manifest_json(r.manifest);
  j["full_dataset_reference"] = FullDatasetReference::exp4();
  return j;
}

std::string exp1_markdown(const Exp1Report& r) {
  std::ostringstream os;
  os << "# Experiment 1: recommendation change under timestep perturbation\n\n";
  os << "Each user's chosen timestep has its POI and timestamp randomized " << r.trials
     << " times; the table reports how often the recommended POI changed (0.." << r.trials
     << ").\n\n";
  os << "| Condition | Average frequency of recommendation change |\n|---|---|\n";
  os << "| Randomizing the most important timestep (1/1) | " << fmt(r.mean_top1, "%.3f") << " |\n";
  os << "| Randomizing the 2nd most important timestep (1/2) | " << fmt(r.mean_top2, "%.3f")
     << " |\n";
  os << "| Randomizing a random timestep, 1st run (1/3) | " << fmt(r.mean_random_a, "%.3f")
     << " |\n";
  os << "| Randomizing a random timestep, 2nd run (1/4) | " << fmt(r.mean_random_b, "%.3f")
     << " |\n\n";
  os << "| Compared conditions | p-value (one-way ANOVA) | significant at "
     << fmt(r.threshold, "%.3g") << " |\n|---|---|---|\n";
  const char* labels[4] = {"1/1 vs 1/2", "1/3 vs 1/4", "1/1 vs 1/3", "1/2 vs 1/3"};
  for (std::size_t i = 0; i < r.tests.size(); ++i)
    os << "| " << labels[i] << " | " << fmt(r.tests[i].result.p_value) << " | "
       << yes_no(r.tests[i].result.significant) << " |\n";
  return os.str();
}

std::string exp2_markdown(const Exp2Report& r) {
  std::ostringstream os;
  os << "# Experiment 2: recommendation stability under user-id swaps\n\n";
  os << "The trajectory is kept fixed while the user id is replaced; the table reports the "
        "proportion of recommendations that stayed the same (random conditions average "
     << r.random_trials << " draws per user).\n\n";
  os << "| Condition | Proportion of recommendations unchanged |\n|---|---|\n";
  os << "| Assigning the most similar user id (2/1) | " << fmt(100.0 * r.prop_most, "%.3f")
     << "% |\n";
  os << "| Assigning the 2nd most similar user id (2/2) | " << fmt(100.0 * r.prop_second, "%.3f")
     << "% |\n";
  os << "| Assigning random user ids, 1st run (2/3) | " << fmt(100.0 * r.prop_random_a, "%.3f")
     << "% |\n";
  os << "| Assigning random user ids, 2nd run (2/4) | " << fmt(100.0 * r.prop_random_b, "%.3f")
     << "% |\n\n";
  os << "| Compared conditions | p-value (Student's t-test) | significant at "
     << fmt(r.threshold, "%.3g") << " |\n|---|---|---|\n";
  const char* labels[3] = {"2/1 vs 2/3", "2/2 vs 2/3", "2/3 vs 2/4"};
  for (std::size_t i = 0; i < r.tests.size(); ++i)
    os << "| " << labels[i] << " | " << fmt(r.tests[i].result.p_value) << " | "
       << yes_no(r.tests[i].result.significant) << " |\n";
  return os.str();
}

std::string exp3_markdown(const Exp3Report& r) {
  std::ostringstream os;
  os << "# Experiment 3: are similar users actually close?\n\n";
  os << "Proportion of users whose distance to the most (and 2nd most) similar user is "
        "statistically significantly smaller than the distance to "
     << r.n_random << " random users (two-sided one-sample t-test, threshold "
     << fmt(r.threshold, "%.3g") << ").\n\n";
  os << "| Metric | Most similar user | 2nd most similar user |\n|---|---|---|\n";
  const char* labels[4] = {"POI distances (all pairs) (3/1/1)",
                           "Timestamp differences (all pairs) (3/1/2)",
                           "POI distances (closest pairs) (3/2/1)",
                           "Timestamp differences (closest pairs) (3/2/2)"};
  for (std::size_t v = 0; v < 4; ++v)
    os << "| " << labels[v] << " | " << fmt(100.0 * r.proportions[v][0], "%.3f") << "% | "
       << fmt(100.0 * r.proportions[v][1], "%.3f") << "% |\n";
  os << "\nUsers evaluated: " << r.n_users << "\n";
  return os.str();
}

std::string exp4_markdown(const Exp4Report& r) {
  std::ostringstream os;
  os << "# Experiment 4: recovering planted almost-clones\n\n";
  os << "Users 101-200 are single-POI clones and users 201-300 single-hour clones of users "
        "1-100; both models are retrained on the clone dataset and we count for how many "
        "source users a clone appears among the top-2 similar users.\n\n";
  os << "| Measure | Value |\n|---|---|\n";
  os << "| Hits over " << r.n_sources << " source users | " << r.hits << " |\n";
  os << "| Chance baseline " << r.n_sources << " * 4 / (n_users - 1) | "
     << fmt(r.chance_baseline, "%.3f") << " |\n";
  os << "| Users in dataset | " << r.n_users << " |\n";
  return os.str();
}

}  // namespace poixa
