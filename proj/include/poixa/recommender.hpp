#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "poixa/autograd.hpp"
#include "poixa/dataset.hpp"
#include "poixa/geo.hpp"
#include "poixa/ingest.hpp"
#include "poixa/rng.hpp"

namespace poixa {

struct ModelConfig {
  int d_emb = 50;    // embedding width per timestep
  int t_max = 100;   // maximum input timesteps
  int epochs = 30;
  double lr = 3e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 42;

  void validate() const {
    require(d_emb >= 2, errc::config_error, "d_emb must be >= 2");
    require(t_max >= 2, errc::config_error, "t_max must be >= 2");
    require(epochs >= 0, errc::config_error, "epochs must be >= 0");
    require(lr > 0.0, errc::config_error, "lr must be positive");
  }
};

// All learned tensors of the recommender. Embeddings for user / POI / hour of
// week, the attention projections, the scalar spatial and temporal bias
// weights, and the candidate projection producing the intermediate vector v.
template <typename S>
struct RecommenderStateT {
  ModelConfig config;
  int n_users = 0;
  int n_pois = 0;
  ParamStoreT<S> params;

  TensorT<S>& tensor(const std::string& name) { return params.get(name).value; }
  const TensorT<S>& tensor(const std::string& name) const { return params.get(name).value; }
};

using RecommenderState = RecommenderStateT<float>;

template <typename S>
RecommenderStateT<S> init_recommender(const ModelConfig& cfg, int n_users, int n_pois) {
  cfg.validate();
  require(n_users >= 1 && n_pois >= 1, errc::empty_dataset, "model needs users and POIs");
  RecommenderStateT<S> st;
  st.config = cfg;
  st.n_users = n_users;
  st.n_pois = n_pois;
  const int d = cfg.d_emb;
  auto stream = [&](const char* tag) { return derive_rng(cfg.seed, StreamKey(tag)); };
  Rng r_user = stream("init:user_emb");
  Rng r_poi = stream("init:poi_emb");
  Rng r_hour = stream("init:hour_emb");
  Rng r_q = stream("init:attn_query");
  Rng r_k = stream("init:attn_key");
  Rng r_v = stream("init:attn_value");
  Rng r_c = stream("init:cand_proj");
  st.params.add("user_emb", normal_init<S>(r_user, {n_users, d}, 0.1));
  st.params.add("poi_emb", normal_init<S>(r_poi, {n_pois, d}, 0.1));
  st.params.add("hour_emb", normal_init<S>(r_hour, {kHoursPerWeek, d}, 0.1));
  st.params.add("attn_query", glorot_init<S>(r_q, d, d));
  st.params.add("attn_key", glorot_init<S>(r_k, d, d));
  st.params.add("attn_value", glorot_init<S>(r_v, d, d));
  st.params.add("cand_proj", glorot_init<S>(r_c, d, 1));
  st.params.add("spatial_bias", TensorT<S>::scalar(S(1)));
  st.params.add("temporal_bias", TensorT<S>::scalar(S(1)));
  return st;
}

template <typename S>
std::vector<int> poi_index_list(const PoiRegistry& registry, const std::vector<Step>& steps) {
  std::vector<int> idx;
  idx.reserve(steps.size());
  for (const Step& s : steps) {
    require(registry.contains(s.poi_id), errc::unknown_id, "poi " + std::to_string(s.poi_id));
    idx.push_back(registry.index_of(s.poi_id));
  }
  return idx;
}

// Per-timestep embedding: e_user + e_poi[t] + e_hour[t]; valid_T x d_emb.
template <typename S>
TensorT<S> embed_trajectory(const RecommenderStateT<S>& state, const PoiRegistry& registry,
                            int user_index, const std::vector<Step>& steps) {
  require(user_index >= 0 && user_index < state.n_users, errc::unknown_id,
          "user index " + std::to_string(user_index));
  require(!steps.empty() && static_cast<int>(steps.size()) <= state.config.t_max,
          errc::domain_error, "input length must be in [1, t_max]");
  const std::vector<int> poi_idx = poi_index_list<S>(registry, steps);
  std::vector<int> hour_idx;
  hour_idx.reserve(steps.size());
  for (const Step& s : steps) hour_idx.push_back(s.hour_of_week);
  TensorT<S> e = add_val(lookup_val(state.tensor("poi_emb"), poi_idx),
                         lookup_val(state.tensor("hour_emb"), hour_idx));
  return add_val(e, lookup_val(state.tensor("user_emb"), {user_index}));
}

// Pairwise attention-bias constants for one input trajectory: the negated,
// per-trajectory-max-normalized haversine and |raw_hour| deltas. A zero
// maximum drops that bias term entirely.
template <typename S>
struct BiasMatrices {
  TensorT<S> spatial;   // -delta_km / max_km
  TensorT<S> temporal;  // -delta_hours / max_hours
  bool has_spatial = false;
  bool has_temporal = false;
};

template <typename S>
BiasMatrices<S> attention_bias(const PoiRegistry& registry, const std::vector<Step>& steps) {
  const int t = static_cast<int>(steps.size());
  std::vector<double> km(static_cast<std::size_t>(t) * t, 0.0);
  std::vector<double> hours(static_cast<std::size_t>(t) * t, 0.0);
  double max_km = 0.0, max_hours = 0.0;
  for (int i = 0; i < t; ++i) {
    const GeoPoint& gi = registry.coord(steps[static_cast<std::size_t>(i)].poi_id);
    for (int j = 0; j < t; ++j) {
      const GeoPoint& gj = registry.coord(steps[static_cast<std::size_t>(j)].poi_id);
      const double d_km = haversine_km(gi, gj);
      const double d_h = static_cast<double>(std::llabs(
          steps[static_cast<std::size_t>(i)].raw_hour - steps[static_cast<std::size_t>(j)].raw_hour));
      km[static_cast<std::size_t>(i) * t + j] = d_km;
      hours[static_cast<std::size_t>(i) * t + j] = d_h;
      max_km = std::max(max_km, d_km);
      max_hours = std::max(max_hours, d_h);
    }
  }
  BiasMatrices<S> out;
  out.has_spatial = max_km > 0.0;
  out.has_temporal = max_hours > 0.0;
  out.spatial = TensorT<S>::zeros({t, t});
  out.temporal = TensorT<S>::zeros({t, t});
  for (std::size_t i = 0; i < km.size(); ++i) {
    if (out.has_spatial) out.spatial.data[i] = static_cast<S>(-(km[i] / max_km));
    if (out.has_temporal) out.temporal.data[i] = static_cast<S>(-(hours[i] / max_hours));
  }
  return out;
}

template <typename S>
struct ForwardNodes {
  typename TapeT<S>::Node* embed = nullptr;   // valid_T x d
  typename TapeT<S>::Node* agg = nullptr;     // valid_T x d
  typename TapeT<S>::Node* v = nullptr;       // valid_T x 1
  typename TapeT<S>::Node* weights = nullptr; // L x valid_T, rows sum to 1
  typename TapeT<S>::Node* scores = nullptr;  // L x 1
  int valid_T = 0;
};

// The full model pass: multimodal embedding, spatio-temporally biased
// self-attention aggregation, scalar projection to the intermediate vector v,
// and the candidate-matching weight matrix W with scores = W v. `pnode` maps
// a parameter name to a tape node, so the identical graph serves training
// (bound parameter leaves) and frozen inference (constant leaves).
template <typename S, typename ParamNodeFn>
ForwardNodes<S> build_forward_impl(TapeT<S>& tape, const RecommenderStateT<S>& state,
                                   const PoiRegistry& registry, int user_index,
                                   const std::vector<Step>& steps, ParamNodeFn pnode) {
  require(user_index >= 0 && user_index < state.n_users, errc::unknown_id,
          "user index " + std::to_string(user_index));
  require(!steps.empty() && static_cast<int>(steps.size()) <= state.config.t_max,
          errc::domain_error, "input length must be in [1, t_max]");
  const int d = state.config.d_emb;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  const std::vector<int> poi_idx = poi_index_list<S>(registry, steps);
  std::vector<int> hour_idx;
  hour_idx.reserve(steps.size());
  for (const Step& s : steps) hour_idx.push_back(s.hour_of_week);

  auto* user_emb = pnode("user_emb");
  auto* poi_emb = pnode("poi_emb");
  auto* hour_emb = pnode("hour_emb");
  auto* wq = pnode("attn_query");
  auto* wk = pnode("attn_key");
  auto* wv = pnode("attn_value");
  auto* w_spatial = pnode("spatial_bias");
  auto* w_temporal = pnode("temporal_bias");
  auto* cand_proj = pnode("cand_proj");

  ForwardNodes<S> out;
  out.valid_T = static_cast<int>(steps.size());

  auto* e = tape.add(tape.add(tape.embedding_lookup(poi_emb, poi_idx),
                              tape.embedding_lookup(hour_emb, hour_idx)),
                     tape.embedding_lookup(user_emb, {user_index}));
  out.embed = e;

  auto* q = tape.matmul(e, wq);
  auto* k = tape.matmul(e, wk);
  auto* v_proj = tape.matmul(e, wv);
  auto* logits = tape.scale(tape.matmul(q, tape.transpose(k)), inv_sqrt_d);
  BiasMatrices<S> bias = attention_bias<S>(registry, steps);
  if (bias.has_spatial) logits = tape.add(logits, tape.scalar_mul(w_spatial, bias.spatial));
  if (bias.has_temporal) logits = tape.add(logits, tape.scalar_mul(w_temporal, bias.temporal));
  auto* attn = tape.row_softmax(logits);
  out.agg = tape.matmul(attn, v_proj);

  out.v = tape.matmul(out.agg, cand_proj);
  auto* match = tape.scale(tape.matmul(poi_emb, tape.transpose(out.agg)), inv_sqrt_d);
  out.weights = tape.row_softmax(match);
  out.scores = tape.matmul(out.weights, out.v);
  return out;
}

// Training pass: gradients flow back into the parameter store.
template <typename S>
ForwardNodes<S> build_forward(TapeT<S>& tape, RecommenderStateT<S>& state,
                              const PoiRegistry& registry, int user_index,
                              const std::vector<Step>& steps) {
  return build_forward_impl(tape, state, registry, user_index, steps,
                            [&](const char* name) { return tape.param(state.params.get(name)); });
}

// Inference pass over a frozen state.
template <typename S>
ForwardNodes<S> build_forward_frozen(TapeT<S>& tape, const RecommenderStateT<S>& state,
                                     const PoiRegistry& registry, int user_index,
                                     const std::vector<Step>& steps) {
  return build_forward_impl(tape, state, registry, user_index, steps,
                            [&](const char* name) { return tape.input(state.tensor(name)); });
}

// One recommendation with its audit artifacts. W is L x t_max with padded
// columns exactly zero; valid rows over the first valid_T columns sum to 1.
struct Prediction {
  std::vector<float> scores;  // length L
  int recommended = 0;        // internal POI index, argmax of scores
  Tensor weight_matrix;       // L x t_max
  std::vector<float> v;       // length t_max
  int valid_T = 0;
};

inline Prediction package_prediction(const ForwardNodes<float>& nodes, int n_pois, int t_max) {
  Prediction p;
  p.valid_T = nodes.valid_T;
  p.scores.resize(static_cast<std::size_t>(n_pois));
  for (int l = 0; l < n_pois; ++l) p.scores[static_cast<std::size_t>(l)] = nodes.scores->value.at(l, 0);
  p.recommended = argmax(nodes.scores->value);
  p.weight_matrix = Tensor::zeros({n_pois, t_max});
  for (int l = 0; l < n_pois; ++l)
    for (int t = 0; t < nodes.valid_T; ++t) p.weight_matrix.at(l, t) = nodes.weights->value.at(l, t);
  p.v.assign(static_cast<std::size_t>(t_max), 0.0f);
  for (int t = 0; t < nodes.valid_T; ++t) p.v[static_cast<std::size_t>(t)] = nodes.v->value.at(t, 0);
  return p;
}

inline Prediction predict(const RecommenderState& state, const PoiRegistry& registry,
                          int user_index, const std::vector<Step>& steps) {
  Tape tape;
  ForwardNodes<float> nodes = build_forward_frozen(tape, state, registry, user_index, steps);
  return package_prediction(nodes, state.n_pois, state.config.t_max);
}

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double top1_acc = 0.0;
};

using TrainLog = std::vector<EpochStats>;

// Cross-entropy training of the target POI over all users, one trajectory per
// optimizer step, Adam updates, deterministic under the config seed.
template <typename S>
RecommenderStateT<S> train_recommender(const ModelConfig& cfg, const Dataset& ds,
                                       TrainLog* log = nullptr, std::ostream* progress = nullptr) {
  cfg.validate();
  require(ds.n_users() > 0, errc::empty_dataset, "empty dataset");
  RecommenderStateT<S> state = init_recommender<S>(cfg, ds.n_users(), ds.registry.size());

  std::vector<DatasetSplit> splits;
  std::vector<int> targets;
  splits.reserve(ds.trajectories.size());
  for (const Trajectory& t : ds.trajectories) {
    splits.push_back(split_last(t, cfg.t_max));
    targets.push_back(ds.registry.index_of(splits.back().target_poi));
  }

  std::vector<int> order(static_cast<std::size_t>(ds.n_users()));
  for (int i = 0; i < ds.n_users(); ++i) order[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng = derive_rng(cfg.seed, StreamKey("train_order", {epoch}));
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    int correct = 0;
    for (int u : order) {
      Tape tape;
      ForwardNodes<S> nodes =
          build_forward(tape, state, ds.registry, u, splits[static_cast<std::size_t>(u)].input_steps);
      auto* loss = tape.cross_entropy(nodes.scores, targets[static_cast<std::size_t>(u)]);
      loss_sum += static_cast<double>(loss->value[0]);
      if (argmax(nodes.scores->value) == targets[static_cast<std::size_t>(u)]) ++correct;
      tape.backward(loss);
      adam_step(state.params, cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
    }
    EpochStats stats{epoch, loss_sum / ds.n_users(), static_cast<double>(correct) / ds.n_users()};
    if (log) log->push_back(stats);
    if (progress)
      (*progress) << "epoch " << stats.epoch << " loss " << stats.mean_loss << " top1 "
                  << stats.top1_acc << "\n";
  }
  return state;
}

// Held-last-step top-1 accuracy of the trained model.
inline double evaluate_top1(const RecommenderState& state, const Dataset& ds) {
  require(ds.n_users() > 0, errc::empty_dataset, "empty dataset");
  int correct = 0;
  for (int u = 0; u < ds.n_users(); ++u) {
    DatasetSplit split = split_last(ds.trajectories[static_cast<std::size_t>(u)], state.config.t_max);
    Prediction p = predict(state, ds.registry, u, split.input_steps);
    if (p.recommended == ds.registry.index_of(split.target_poi)) ++correct;
  }
  return static_cast<double>(correct) / ds.n_users();
}

}  // namespace poixa
