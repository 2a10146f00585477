#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "poixa/recommender.hpp"

namespace poixa {

struct CompressorConfig {
  int epochs = 80;
  double lr = 3e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 1;

  void validate() const {
    require(epochs >= 0, errc::config_error, "compressor epochs must be >= 0");
    require(lr > 0.0, errc::config_error, "compressor lr must be positive");
  }
};

// User classifier over mean-pooled timestep embeddings: d_emb -> 512 -> 16
// -> n_users with ReLU hidden layers. The 16-unit post-activation output is
// the user's behavior vector.
template <typename S>
struct CompressorStateT {
  static constexpr int kHidden1 = 512;
  static constexpr int kHidden2 = 16;

  CompressorConfig config;
  int d_in = 0;
  int n_users = 0;
  ParamStoreT<S> params;  // fc1_w fc1_b fc2_w fc2_b out_w out_b

  TensorT<S>& tensor(const std::string& name) { return params.get(name).value; }
  const TensorT<S>& tensor(const std::string& name) const { return params.get(name).value; }
};

using CompressorState = CompressorStateT<float>;

struct UserVector {
  std::int64_t user_id = 0;
  std::vector<float> embedding;  // 16 entries, all >= 0
};

template <typename S>
CompressorStateT<S> init_compressor(const CompressorConfig& cfg, int d_in, int n_users) {
  cfg.validate();
  require(d_in >= 1 && n_users >= 1, errc::empty_dataset, "compressor needs inputs and users");
  CompressorStateT<S> st;
  st.config = cfg;
  st.d_in = d_in;
  st.n_users = n_users;
  Rng r1 = derive_rng(cfg.seed, StreamKey("init:fc1"));
  Rng r2 = derive_rng(cfg.seed, StreamKey("init:fc2"));
  Rng r3 = derive_rng(cfg.seed, StreamKey("init:out"));
  st.params.add("fc1_w", glorot_init<S>(r1, d_in, CompressorStateT<S>::kHidden1));
  st.params.add("fc1_b", TensorT<S>::zeros({CompressorStateT<S>::kHidden1}));
  st.params.add("fc2_w", glorot_init<S>(r2, CompressorStateT<S>::kHidden1, CompressorStateT<S>::kHidden2));
  st.params.add("fc2_b", TensorT<S>::zeros({CompressorStateT<S>::kHidden2}));
  st.params.add("out_w", glorot_init<S>(r3, CompressorStateT<S>::kHidden2, n_users));
  st.params.add("out_b", TensorT<S>::zeros({n_users}));
  return st;
}

template <typename S>
struct CompressNodes {
  typename TapeT<S>::Node* user_vec = nullptr;  // 1 x 16
  typename TapeT<S>::Node* logits = nullptr;    // 1 x n_users
};

template <typename S, typename ParamNodeFn>
CompressNodes<S> build_compress_impl(TapeT<S>& tape, const CompressorStateT<S>& state,
                                     typename TapeT<S>::Node* timestep_embeddings,
                                     ParamNodeFn pnode) {
  require(timestep_embeddings->value.rank() == 2 &&
              timestep_embeddings->value.shape[1] == state.d_in,
          errc::shape_error, "compressor input must be valid_T x d_in");
  auto* pooled = tape.mean_pool_rows(timestep_embeddings);
  auto* h1 = tape.relu(tape.add(tape.matmul(pooled, pnode("fc1_w")), pnode("fc1_b")));
  CompressNodes<S> out;
  out.user_vec = tape.relu(tape.add(tape.matmul(h1, pnode("fc2_w")), pnode("fc2_b")));
  out.logits = tape.add(tape.matmul(out.user_vec, pnode("out_w")), pnode("out_b"));
  return out;
}

template <typename S>
CompressNodes<S> build_compress(TapeT<S>& tape, CompressorStateT<S>& state,
                                typename TapeT<S>::Node* timestep_embeddings) {
  return build_compress_impl(tape, state, timestep_embeddings,
                             [&](const char* name) { return tape.param(state.params.get(name)); });
}

template <typename S>
struct CompressOutput {
  TensorT<S> user_vec;  // 1 x 16
  TensorT<S> logits;    // 1 x n_users
};

template <typename S>
CompressOutput<S> compress(const CompressorStateT<S>& state,
                           const TensorT<S>& timestep_embeddings) {
  TapeT<S> tape;
  CompressNodes<S> nodes =
      build_compress_impl(tape, state, tape.input(timestep_embeddings),
                          [&](const char* name) { return tape.input(state.tensor(name)); });
  return {nodes.user_vec->value, nodes.logits->value};
}

// Trains the user classifier on the frozen recommender's per-timestep
// embeddings of each user's input trajectory.
template <typename S>
CompressorStateT<S> train_compressor(const CompressorConfig& cfg,
                                     const RecommenderStateT<S>& rec, const Dataset& ds,
                                     TrainLog* log = nullptr, std::ostream* progress = nullptr) {
  cfg.validate();
  require(ds.n_users() > 0, errc::empty_dataset, "empty dataset");
  CompressorStateT<S> state = init_compressor<S>(cfg, rec.config.d_emb, ds.n_users());

  std::vector<TensorT<S>> inputs;
  inputs.reserve(ds.trajectories.size());
  for (int u = 0; u < ds.n_users(); ++u) {
    DatasetSplit split = split_last(ds.trajectories[static_cast<std::size_t>(u)], rec.config.t_max);
    inputs.push_back(embed_trajectory(rec, ds.registry, u, split.input_steps));
  }

  std::vector<int> order(static_cast<std::size_t>(ds.n_users()));
  for (int i = 0; i < ds.n_users(); ++i) order[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng = derive_rng(cfg.seed, StreamKey("compressor_order", {epoch}));
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    int correct = 0;
    for (int u : order) {
      TapeT<S> tape;
      CompressNodes<S> nodes =
          build_compress(tape, state, tape.input(inputs[static_cast<std::size_t>(u)]));
      auto* loss = tape.cross_entropy(nodes.logits, u);
      loss_sum += static_cast<double>(loss->value[0]);
      if (argmax(nodes.logits->value) == u) ++correct;
      tape.backward(loss);
      adam_step(state.params, cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
    }
    EpochStats stats{epoch, loss_sum / ds.n_users(), static_cast<double>(correct) / ds.n_users()};
    if (log) log->push_back(stats);
    if (progress)
      (*progress) << "compressor epoch " << stats.epoch << " loss " << stats.mean_loss << " acc "
                  << stats.top1_acc << "\n";
  }
  return state;
}

// Self-classification accuracy of the trained compressor.
template <typename S>
double evaluate_self_classification(const CompressorStateT<S>& comp, const RecommenderStateT<S>& rec,
                                    const Dataset& ds) {
  int correct = 0;
  for (int u = 0; u < ds.n_users(); ++u) {
    DatasetSplit split = split_last(ds.trajectories[static_cast<std::size_t>(u)], rec.config.t_max);
    CompressOutput<S> out = compress(comp, embed_trajectory(rec, ds.registry, u, split.input_steps));
    if (argmax(out.logits) == u) ++correct;
  }
  return static_cast<double>(correct) / ds.n_users();
}

struct ScoredUser {
  std::int64_t user_id = 0;
  double score = 0.0;
};

// Top-k other users by classifier logit on the query user's own timestep
// embeddings; the query user is excluded, ties go to the smaller user id.
template <typename S>
std::vector<ScoredUser> similar_users(const CompressorStateT<S>& comp,
                                      const RecommenderStateT<S>& rec,
                                      const Dataset& ds, std::int64_t user_id, int k) {
  const int self = ds.user_index(user_id);
  require(k >= 1 && k < ds.n_users(), errc::bad_k,
          "k must be in [1, n_users), got " + std::to_string(k));
  DatasetSplit split = split_last(ds.trajectories[static_cast<std::size_t>(self)], rec.config.t_max);
  CompressOutput<S> out = compress(comp, embed_trajectory(rec, ds.registry, self, split.input_steps));

  std::vector<ScoredUser> ranked;
  ranked.reserve(static_cast<std::size_t>(ds.n_users()) - 1);
  for (int u = 0; u < ds.n_users(); ++u) {
    if (u == self) continue;
    ranked.push_back({ds.trajectories[static_cast<std::size_t>(u)].user_id,
                      static_cast<double>(out.logits[u])});
  }
  std::sort(ranked.begin(), ranked.end(), [](const ScoredUser& a, const ScoredUser& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.user_id < b.user_id;
  });
  ranked.resize(static_cast<std::size_t>(k));
  return ranked;
}

// Post-ReLU 16-unit activations for one user.
template <typename S>
UserVector user_vector(const CompressorStateT<S>& comp, const RecommenderStateT<S>& rec,
                       const Dataset& ds, std::int64_t user_id) {
  const int self = ds.user_index(user_id);
  DatasetSplit split = split_last(ds.trajectories[static_cast<std::size_t>(self)], rec.config.t_max);
  CompressOutput<S> out = compress(comp, embed_trajectory(rec, ds.registry, self, split.input_steps));
  UserVector uv;
  uv.user_id = user_id;
  uv.embedding.reserve(static_cast<std::size_t>(CompressorStateT<S>::kHidden2));
  for (std::int64_t i = 0; i < out.user_vec.numel(); ++i)
    uv.embedding.push_back(static_cast<float>(out.user_vec[i]));
  return uv;
}

}  // namespace poixa
