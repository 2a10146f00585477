#include <cmath>

#include "doctest.h"
#include "poixa/recommender.hpp"
#include "poixa/synthgen.hpp"
#include "support/gradcheck.hpp"

using namespace poixa;

namespace {

// Tiny fixture: 3 users, 4 POIs laid out on a line, hand-buildable steps.
Dataset tiny_dataset() {
  Dataset ds;
  ds.registry = PoiRegistry::from_pairs(
      {{1, {0.0, 0.0}}, {2, {0.0, 0.1}}, {3, {0.0, 0.2}}, {4, {0.0, 0.3}}});
  for (std::int64_t u = 1; u <= 3; ++u) {
    Trajectory t;
    t.user_id = u;
    t.steps = {{1, 0, 0}, {2, 5, 5}, {3, 9, 9}, {4, 12, 12}};
    ds.trajectories.push_back(t);
  }
  return ds;
}

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.d_emb = 4;
  cfg.t_max = 8;
  cfg.epochs = 1;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("embedding is the sum of the three tables") {
  Dataset ds = tiny_dataset();
  ModelConfig cfg = tiny_config();

  SUBCASE("all-zero tables give all-zero embeddings") {
    RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
    for (const char* name : {"user_emb", "poi_emb", "hour_emb"})
      std::fill(st.tensor(name).data.begin(), st.tensor(name).data.end(), 0.0f);
    Tensor e = embed_trajectory(st, ds.registry, 0, ds.trajectories[0].steps);
    for (float v : e.data) CHECK(v == 0.0f);
  }

  SUBCASE("identical (poi, hour) steps embed identically") {
    RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
    std::vector<Step> steps = {{1, 0, 7}, {2, 5, 5}, {1, 170, 7}};  // steps 0 and 2 coincide
    Tensor e = embed_trajectory(st, ds.registry, 1, steps);
    for (int j = 0; j < cfg.d_emb; ++j) CHECK(e.at(0, j) == e.at(2, j));
  }

  SUBCASE("changing the user shifts every row by the same vector") {
    RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
    Tensor e1 = embed_trajectory(st, ds.registry, 0, ds.trajectories[0].steps);
    Tensor e2 = embed_trajectory(st, ds.registry, 2, ds.trajectories[0].steps);
    const Tensor& users = st.tensor("user_emb");
    for (int t = 0; t < e1.rows(); ++t)
      for (int j = 0; j < cfg.d_emb; ++j)
        CHECK(e2.at(t, j) - e1.at(t, j) ==
              doctest::Approx(users.at(2, j) - users.at(0, j)).epsilon(1e-5));
  }

  SUBCASE("unknown ids raise UnknownId") {
    RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
    CHECK_THROWS_AS(embed_trajectory(st, ds.registry, 99, ds.trajectories[0].steps), Error);
    std::vector<Step> bad = {{999, 0, 0}};
    CHECK_THROWS_AS(embed_trajectory(st, ds.registry, 0, bad), Error);
  }
}

TEST_CASE("forward with a single timestep is fully concentrated") {
  Dataset ds = tiny_dataset();
  ModelConfig cfg = tiny_config();
  RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
  std::vector<Step> one = {{2, 5, 5}};
  Prediction p = predict(st, ds.registry, 0, one);
  CHECK(p.valid_T == 1);
  const int L = ds.registry.size();
  for (int l = 0; l < L; ++l) {
    CHECK(p.weight_matrix.at(l, 0) == doctest::Approx(1.0f));
    for (int t = 1; t < cfg.t_max; ++t) CHECK(p.weight_matrix.at(l, t) == 0.0f);
    CHECK(p.scores[static_cast<std::size_t>(l)] == doctest::Approx(p.v[0]));
  }
  // All scores equal -> tie resolves to index 0.
  CHECK(p.recommended == 0);
}

TEST_CASE("scores equal W times v (hand-checked product)") {
  Dataset ds = tiny_dataset();
  ModelConfig cfg = tiny_config();
  RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
  std::vector<Step> steps = {{1, 0, 0}, {3, 9, 9}};
  Prediction p = predict(st, ds.registry, 1, steps);
  REQUIRE(p.valid_T == 2);
  for (int l = 0; l < ds.registry.size(); ++l) {
    // Independent scalar re-computation of the matrix-vector product.
    double expect = 0.0;
    for (int t = 0; t < p.valid_T; ++t)
      expect += static_cast<double>(p.weight_matrix.at(l, t)) * static_cast<double>(p.v[static_cast<std::size_t>(t)]);
    CHECK(p.scores[static_cast<std::size_t>(l)] == doctest::Approx(expect).epsilon(1e-5));
    double row_sum = 0.0;
    for (int t = 0; t < p.valid_T; ++t) row_sum += p.weight_matrix.at(l, t);
    CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-5));
  }
  // The recommendation is the argmax of scores.
  int best = 0;
  for (int l = 1; l < ds.registry.size(); ++l)
    if (p.scores[static_cast<std::size_t>(l)] > p.scores[static_cast<std::size_t>(best)]) best = l;
  CHECK(p.recommended == best);
}

TEST_CASE("full recommender loss passes the gradient check at toy dimensions") {
  // d_emb=4, T=3, L=5, users=5.
  Dataset ds;
  ds.registry = PoiRegistry::from_pairs(
      {{1, {0.0, 0.0}}, {2, {0.0, 0.1}}, {3, {0.1, 0.0}}, {4, {0.1, 0.1}}, {5, {0.2, 0.2}}});
  for (std::int64_t u = 1; u <= 5; ++u) {
    Trajectory t;
    t.user_id = u;
    t.steps = {{1, 0, 0}, {3, 4, 4}, {5, 9, 9}, {2, 15, 15}};
    ds.trajectories.push_back(t);
  }
  ModelConfig cfg;
  cfg.d_emb = 4;
  cfg.t_max = 3;
  cfg.seed = 17;
  RecommenderStateT<double> st = init_recommender<double>(cfg, 5, 5);
  const std::vector<Step> steps = {{1, 0, 0}, {3, 4, 4}, {5, 9, 9}};
  const int target = 1;

  auto loss_value = [&]() {
    TapeT<double> tape;
    auto nodes = build_forward_frozen(tape, st, ds.registry, 2, steps);
    auto* loss = tape.cross_entropy(nodes.scores, target);
    return static_cast<double>(loss->value[0]);
  };
  auto compute_grads = [&]() {
    st.params.zero_grads();
    TapeT<double> tape;
    auto nodes = build_forward(tape, st, ds.registry, 2, steps);
    auto* loss = tape.cross_entropy(nodes.scores, target);
    tape.backward(loss);
  };
  auto res = testsupport::finite_diff_check(st.params, loss_value, compute_grads);
  CHECK_MESSAGE(res.max_rel_err < 1e-4, "worst parameter: ", res.worst_param);
}

TEST_CASE("one training step lowers the loss on a single example") {
  Dataset ds = tiny_dataset();
  ModelConfig cfg = tiny_config();
  cfg.epochs = 1;
  // Keep only one user so the epoch is exactly one optimizer step.
  ds.trajectories.resize(1);

  RecommenderState before = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
  DatasetSplit split = split_last(ds.trajectories[0], cfg.t_max);
  const int target = ds.registry.index_of(split.target_poi);
  double loss_init;
  {
    Tape tape;
    auto nodes = build_forward_frozen(tape, before, ds.registry, 0, split.input_steps);
    loss_init = static_cast<double>(tape.cross_entropy(nodes.scores, target)->value[0]);
  }

  TrainLog log;
  RecommenderState after = train_recommender<float>(cfg, ds, &log);
  double loss_after;
  {
    Tape tape;
    auto nodes = build_forward_frozen(tape, after, ds.registry, 0, split.input_steps);
    loss_after = static_cast<double>(tape.cross_entropy(nodes.scores, target)->value[0]);
  }
  CHECK(loss_after < loss_init);
}

TEST_CASE("training is deterministic under a fixed seed") {
  SynthConfig scfg;
  scfg.n_users = 12;
  scfg.n_groups = 3;
  scfg.seed = 9;
  Dataset ds = synth_dataset(scfg);
  ModelConfig cfg;
  cfg.d_emb = 8;
  cfg.t_max = 12;
  cfg.epochs = 2;
  cfg.seed = 77;

  RecommenderState a = train_recommender<float>(cfg, ds);
  RecommenderState b = train_recommender<float>(cfg, ds);
  for (const auto& [name, p] : a.params) {
    const auto& q = b.params.get(name);
    CHECK(p.value.data == q.value.data);  // bit-identical
  }
}

TEST_CASE("candidate-permutation equivariance") {
  // Re-labeling POI ids so their registry order permutes must permute the
  // score vector identically once embeddings follow the same permutation.
  Dataset ds = tiny_dataset();
  ModelConfig cfg = tiny_config();
  RecommenderState st = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
  std::vector<Step> steps = {{1, 0, 0}, {3, 9, 9}, {4, 12, 12}};
  Prediction base = predict(st, ds.registry, 0, steps);

  // Permuted registry: ids 1,2,3,4 -> 4,3,2,1 (reverse order, same coords).
  PoiRegistry permuted = PoiRegistry::from_pairs(
      {{4, {0.0, 0.0}}, {3, {0.0, 0.1}}, {2, {0.0, 0.2}}, {1, {0.0, 0.3}}});
  // Internal index of old poi p was p-1; in the permuted registry the same
  // venue (by coordinates) has id 5-p at index 4-p. Build a state whose rows
  // follow that permutation.
  RecommenderState st2 = init_recommender<float>(cfg, ds.n_users(), ds.registry.size());
  st2.params = ParamStore();
  for (const auto& [name, p] : st.params) {
    if (name == "poi_emb") {
      Tensor t = p.value;
      for (int row = 0; row < 4; ++row)
        for (int j = 0; j < cfg.d_emb; ++j) t.at(row, j) = p.value.at(3 - row, j);
      st2.params.add(name, t);
    } else {
      st2.params.add(name, p.value);
    }
  }
  std::vector<Step> steps2 = {{4, 0, 0}, {2, 9, 9}, {1, 12, 12}};  // same venues, new ids
  Prediction perm = predict(st2, permuted, 0, steps2);
  for (int l = 0; l < 4; ++l)
    CHECK(perm.scores[static_cast<std::size_t>(l)] ==
          doctest::Approx(base.scores[static_cast<std::size_t>(3 - l)]).epsilon(1e-6));
}
