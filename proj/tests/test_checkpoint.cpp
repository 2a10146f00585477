#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "poixa/checkpoint.hpp"
#include "poixa/config.hpp"
#include "poixa/synthgen.hpp"

using namespace poixa;

TEST_CASE("checkpoint encode/decode round trip with CRC") {
  std::vector<NamedTensor> tensors;
  tensors.push_back({"alpha", Tensor({2, 3}, {1.0f, -2.0f, 3.5f, 0.25f, -0.125f, 9.0f})});
  tensors.push_back({"beta", Tensor({4}, {0.1f, 0.2f, 0.3f, 0.4f})});

  auto bytes = encode_checkpoint(tensors);
  CHECK(bytes[0] == 'P');
  CHECK(bytes[1] == 'X');
  CHECK(bytes[2] == 'C');
  CHECK(bytes[3] == 'K');

  auto decoded = decode_checkpoint(bytes);
  REQUIRE(decoded.size() == 2);
  CHECK(decoded[0].name == "alpha");
  CHECK(decoded[0].tensor.shape == std::vector<int>{2, 3});
  CHECK(decoded[0].tensor.data == tensors[0].tensor.data);
  CHECK(decoded[1].name == "beta");
  CHECK(decoded[1].tensor.data == tensors[1].tensor.data);

  // Any corrupted byte breaks the CRC.
  auto corrupted = bytes;
  corrupted[12] ^= 0x01;
  CHECK_THROWS_AS(decode_checkpoint(corrupted), Error);
}

TEST_CASE("missing checkpoint raises MissingCheckpoint") {
  try {
    load_checkpoint_file("does_not_exist.pxck");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::missing_checkpoint);
    CHECK(e.exit_code() == 3);
  }
}

TEST_CASE("recommender checkpoint round trip preserves every tensor bit") {
  SynthConfig scfg;
  scfg.n_users = 10;
  scfg.n_groups = 2;
  scfg.seed = 61;
  Dataset ds = synth_dataset(scfg);
  ModelConfig cfg;
  cfg.d_emb = 6;
  cfg.t_max = 10;
  cfg.epochs = 1;
  cfg.seed = 13;
  RecommenderState state = train_recommender<float>(cfg, ds);

  std::vector<std::int64_t> user_ids, poi_ids = ds.registry.ids();
  for (const auto& t : ds.trajectories) user_ids.push_back(t.user_id);

  const std::string path = "test_rec_ckpt.pxck";
  save_recommender_checkpoint(path, state, user_ids, poi_ids, "{\"p\":1}");

  std::vector<std::int64_t> got_users, got_pois;
  RecommenderState loaded = load_recommender_checkpoint(path, &got_users, &got_pois);
  CHECK(loaded.config.d_emb == cfg.d_emb);
  CHECK(loaded.config.t_max == cfg.t_max);
  CHECK(loaded.config.seed == cfg.seed);
  CHECK(loaded.n_users == state.n_users);
  CHECK(loaded.n_pois == state.n_pois);
  CHECK(got_users == user_ids);
  CHECK(got_pois == poi_ids);
  for (const auto& [name, p] : state.params)
    CHECK(p.value.data == loaded.params.get(name).value.data);

  // Same state saved twice gives byte-identical files.
  const std::string path2 = "test_rec_ckpt_2.pxck";
  save_recommender_checkpoint(path2, state, user_ids, poi_ids, "{\"p\":1}");
  CHECK(crc32_of_file(path) == crc32_of_file(path2));

  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
  std::remove(path2.c_str());
  std::remove((path2 + ".json").c_str());
}

TEST_CASE("compressor checkpoint round trip") {
  CompressorConfig cfg;
  cfg.seed = 15;
  CompressorState state = init_compressor<float>(cfg, 6, 10);
  const std::string path = "test_comp_ckpt.pxck";
  save_compressor_checkpoint(path, state, {1, 2, 3});
  CompressorState loaded = load_compressor_checkpoint(path);
  CHECK(loaded.d_in == 6);
  CHECK(loaded.n_users == 10);
  for (const auto& [name, p] : state.params)
    CHECK(p.value.data == loaded.params.get(name).value.data);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("run config parsing, overrides, and hashing") {
  RunConfig base = parse_config_text(
      "# comment line\n"
      "d_emb = 12\n"
      "epochs = 7\n"
      "seed = 99\n"
      "threshold = 0.01\n");
  CHECK(base.model.d_emb == 12);
  CHECK(base.model.epochs == 7);
  CHECK(base.master_seed == 99);
  CHECK(base.threshold == 0.01);

  RunConfig other = base;
  CHECK(base.hash_hex() == other.hash_hex());
  apply_config_override(other, "trials", "25");
  CHECK(other.trials == 25);
  CHECK(base.hash_hex() != other.hash_hex());

  CHECK_THROWS_AS(parse_config_text("nonsense_key = 1\n"), Error);
  CHECK_THROWS_AS(parse_config_text("epochs ten\n"), Error);
  CHECK_THROWS_AS(apply_config_override(other, "epochs", "ten"), Error);

  RunConfig bad = base;
  bad.threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = base;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
