// poi-xaudit: ingest check-ins, train the recommender and compressor, extract
// explanations, and run the four audit experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "poixa/audit.hpp"
#include "poixa/checkpoint.hpp"
#include "poixa/config.hpp"
#include "poixa/explain.hpp"
#include "poixa/report_io.hpp"
#include "poixa/synthgen.hpp"

using namespace poixa;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string data;
  std::string out;
  std::string seed;
};

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty() ? RunConfig{} : load_config_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    auto eq = kv.find('=');
    require(eq != std::string::npos, errc::config_error, "--set expects key=value, got " + kv);
    apply_config_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.data.empty()) cfg.data_path = args.data;
  if (!args.out.empty()) cfg.out_dir = args.out;
  if (!args.seed.empty()) apply_config_override(cfg, "seed", args.seed);
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--set", args.overrides, "config override key=value (repeatable; wins over the file)");
  cmd->add_option("--data", args.data, "input data path");
  cmd->add_option("--out", args.out, "output path or directory");
  cmd->add_option("--seed", args.seed, "master seed (wins over config)");
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::missing_dataset, "cannot write " + path.string());
  out << content;
}

ordered_json file_ref(const fs::path& path) {
  ordered_json j;
  j["file"] = path.filename().string();
  j["crc32"] = crc32_of_file(path.string());
  return j;
}

ordered_json base_provenance(const RunConfig& cfg) {
  ordered_json j;
  j["config_hash"] = cfg.hash_hex();
  j["master_seed"] = cfg.master_seed;
  return j;
}

Dataset load_data(const RunConfig& cfg) {
  require(!cfg.data_path.empty(), errc::missing_dataset, "no --data path given");
  return load_dataset_file(cfg.data_path);
}

struct LoadedModels {
  Dataset dataset;
  RecommenderState rec;
  CompressorState comp;
  fs::path rec_path, comp_path;
};

LoadedModels load_models(const RunConfig& cfg, const std::string& rec_path,
                         const std::string& comp_path, bool need_compressor) {
  LoadedModels m;
  m.dataset = load_data(cfg);
  require(!rec_path.empty(), errc::missing_checkpoint, "no --rec checkpoint given");
  m.rec_path = rec_path;
  m.rec = load_recommender_checkpoint(rec_path);
  require(m.rec.n_users == m.dataset.n_users() && m.rec.n_pois == m.dataset.registry.size(),
          errc::corrupt_dataset, "recommender checkpoint does not match the dataset");
  if (need_compressor) {
    require(!comp_path.empty(), errc::missing_checkpoint, "no --comp checkpoint given");
    m.comp_path = comp_path;
    m.comp = load_compressor_checkpoint(comp_path);
    require(m.comp.n_users == m.dataset.n_users() && m.comp.d_in == m.rec.config.d_emb,
            errc::corrupt_dataset, "compressor checkpoint does not match");
  }
  return m;
}

int cmd_ingest(const CommonArgs& args) {
  RunConfig cfg = resolve_config(args);
  require(!cfg.data_path.empty(), errc::missing_dataset, "no --data input file given");
  const std::string text = read_text_file_auto(cfg.data_path);
  std::istringstream in(text);
  ParseStats stats;
  std::vector<CheckIn> checkins = parse_checkins(in, &stats);
  Dataset ds = build_trajectories(checkins, cfg.bbox, cfg.min_len);

  fs::path out = cfg.out_dir;
  if (out.extension() != ".pxd") {
    fs::create_directories(out);
    out /= "dataset.pxd";
  } else if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  save_dataset_file(ds, out.string());
  std::cout << "parsed " << stats.valid << " check-ins (" << stats.malformed << " malformed), "
            << ds.n_users() << " users, " << ds.registry.size() << " POIs -> " << out.string()
            << "\n";
  return 0;
}

int cmd_train(const CommonArgs& args) {
  RunConfig cfg = resolve_config(args);
  Dataset ds = load_data(cfg);
  ModelConfig mcfg = cfg.model;
  mcfg.seed = derive_seed(cfg.master_seed, StreamKey("recommender"));

  TrainLog log;
  RecommenderState rec = train_recommender<float>(mcfg, ds, &log, &std::cout);
  const double acc = evaluate_top1(rec, ds);

  fs::path out = cfg.out_dir;
  if (out.extension() != ".pxck") {
    fs::create_directories(out);
    out /= "recommender.pxck";
  } else if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  std::vector<std::int64_t> user_ids;
  for (const auto& t : ds.trajectories) user_ids.push_back(t.user_id);
  ordered_json extra = base_provenance(cfg);
  extra["held_last_step_top1_accuracy"] = acc;
  save_recommender_checkpoint(out.string(), rec, user_ids, ds.registry.ids(), extra.dump());
  std::cout << "held-last-step top-1 accuracy " << acc << " (chance "
            << 1.0 / ds.registry.size() << ") -> " << out.string() << "\n";
  return 0;
}

int cmd_compress(const CommonArgs& args, const std::string& rec_path) {
  RunConfig cfg = resolve_config(args);
  Dataset ds = load_data(cfg);
  require(!rec_path.empty(), errc::missing_checkpoint, "no --rec checkpoint given");
  RecommenderState rec = load_recommender_checkpoint(rec_path);
  require(rec.n_users == ds.n_users(), errc::corrupt_dataset,
          "recommender checkpoint does not match the dataset");

  CompressorConfig ccfg = cfg.compressor_config();
  TrainLog log;
  CompressorState comp = train_compressor<float>(ccfg, rec, ds, &log, &std::cout);
  const double acc = evaluate_self_classification(comp, rec, ds);

  fs::path out = cfg.out_dir;
  if (out.extension() != ".pxck") {
    fs::create_directories(out);
    out /= "compressor.pxck";
  } else if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  std::vector<std::int64_t> user_ids;
  for (const auto& t : ds.trajectories) user_ids.push_back(t.user_id);
  ordered_json extra = base_provenance(cfg);
  extra["self_classification_accuracy"] = acc;
  extra["recommender_checkpoint"] = file_ref(rec_path);
  save_compressor_checkpoint(out.string(), comp, user_ids, extra.dump());
  std::cout << "self-classification accuracy " << acc << " (chance " << 1.0 / ds.n_users()
            << ") -> " << out.string() << "\n";
  return 0;
}

int cmd_explain(const CommonArgs& args, const std::string& rec_path, const std::string& comp_path,
                std::int64_t user, int k_steps, int k_users, int row) {
  RunConfig cfg = resolve_config(args);
  LoadedModels m = load_models(cfg, rec_path, comp_path, true);
  Explanation ex = explain(m.rec, m.comp, m.dataset, user, k_steps, k_users, row);

  ordered_json j;
  j["user"] = ex.user_id;
  j["provenance"] = base_provenance(cfg);
  j["provenance"]["recommender_checkpoint"] = file_ref(m.rec_path);
  j["provenance"]["compressor_checkpoint"] = file_ref(m.comp_path);
  const GeoPoint& coord = m.dataset.registry.coord_at(ex.recommended_index);
  j["recommended_poi"] = ex.recommended_poi;
  j["recommended_poi_lat"] = coord.lat;
  j["recommended_poi_lon"] = coord.lon;
  j["valid_timesteps"] = ex.valid_T;
  ordered_json steps = ordered_json::array();
  const Trajectory& traj = m.dataset.trajectory_of(ex.user_id);
  DatasetSplit split = split_last(traj, m.rec.config.t_max);
  for (const auto& [t, w] : ex.timestep_ranking) {
    const Step& s = split.input_steps[static_cast<std::size_t>(t)];
    const GeoPoint& g = m.dataset.registry.coord(s.poi_id);
    ordered_json e;
    e["timestep"] = t;
    e["weight"] = w;
    e["poi"] = s.poi_id;
    e["lat"] = g.lat;
    e["lon"] = g.lon;
    e["hour_of_week"] = s.hour_of_week;
    steps.push_back(e);
  }
  j["influential_timesteps"] = steps;
  ordered_json neighbors = ordered_json::array();
  for (const ScoredUser& s : ex.similar) {
    ordered_json e;
    e["id"] = s.user_id;
    e["score"] = s.score;
    neighbors.push_back(e);
  }
  j["similar_users"] = neighbors;

  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!args.out.empty()) write_text(args.out, text);
  return 0;
}

int cmd_audit(const CommonArgs& args, int exp, const std::string& rec_path,
              const std::string& comp_path) {
  RunConfig cfg = resolve_config(args);
  LoadedModels m = load_models(cfg, rec_path, comp_path, true);
  fs::create_directories(cfg.out_dir);
  const fs::path out_dir = cfg.out_dir;

  ordered_json prov = base_provenance(cfg);
  prov["dataset"] = file_ref(cfg.data_path);
  prov["recommender_checkpoint"] = file_ref(m.rec_path);
  prov["compressor_checkpoint"] = file_ref(m.comp_path);

  PredictFn predict_fn = make_predict_fn(m.rec, m.dataset.registry);
  SimilarFn similar_fn = make_similar_fn(m.comp, m.rec, m.dataset);
  const int t_max = m.rec.config.t_max;

  ordered_json j;
  std::string md;
  std::string stem = "exp" + std::to_string(exp);
  switch (exp) {
    case 1: {
      Exp1Report r = run_exp1(m.dataset, t_max, predict_fn, cfg.trials,
                              derive_seed(cfg.master_seed, StreamKey("exp1")), cfg.threshold);
      j = exp1_json(r, prov);
      md = exp1_markdown(r);
      break;
    }
    case 2: {
      Exp2Report r = run_exp2(m.dataset, t_max, predict_fn, similar_fn, cfg.random_trials,
                              derive_seed(cfg.master_seed, StreamKey("exp2")), cfg.threshold);
      j = exp2_json(r, prov);
      md = exp2_markdown(r);
      break;
    }
    case 3: {
      Exp3Report r = run_exp3(m.dataset, similar_fn, cfg.n_random,
                              derive_seed(cfg.master_seed, StreamKey("exp3")), cfg.threshold,
                              cfg.closest_k);
      j = exp3_json(r, prov);
      md = exp3_markdown(r);
      break;
    }
    case 4: {
      CloneDataset clones =
          build_clone_dataset(m.dataset, derive_seed(cfg.master_seed, StreamKey("clones")));
      ModelConfig mcfg = cfg.model;
      CompressorConfig ccfg = cfg.compressor_config();
      Exp4Report r = run_exp4(clones, mcfg, ccfg, cfg.master_seed, &std::cout);
      j = exp4_json(r, prov);
      md = exp4_markdown(r);
      break;
    }
    default:
      fail(errc::config_error, "audit experiment must be 1, 2, 3, or 4");
  }
  write_text(out_dir / (stem + ".json"), j.dump(2) + "\n");
  write_text(out_dir / (stem + ".md"), md);
  std::cout << md << "\nwrote " << (out_dir / (stem + ".json")).string() << " and "
            << (out_dir / (stem + ".md")).string() << "\n";
  return 0;
}

int cmd_synth_clone(const CommonArgs& args) {
  RunConfig cfg = resolve_config(args);
  Dataset ds = load_data(cfg);
  CloneDataset clones =
      build_clone_dataset(ds, derive_seed(cfg.master_seed, StreamKey("clones")));
  fs::create_directories(cfg.out_dir);
  const fs::path out_dir = cfg.out_dir;
  save_dataset_file(clones.dataset, (out_dir / "clone_dataset.pxd").string());

  ordered_json j;
  j["provenance"] = base_provenance(cfg);
  j["provenance"]["dataset"] = file_ref(cfg.data_path);
  j["clones"] = clone_manifest_json(clones.manifest);
  write_text(out_dir / "clone_manifest.json", j.dump(2) + "\n");
  std::cout << "wrote " << (out_dir / "clone_dataset.pxd").string() << " ("
            << clones.dataset.n_users() << " users) and clone_manifest.json\n";
  return 0;
}

int cmd_report(const CommonArgs& args) {
  RunConfig cfg = resolve_config(args);
  const fs::path dir = cfg.out_dir;
  std::ostringstream combined;
  combined << "# Audit report\n\n";
  bool any = false;
  for (int exp = 1; exp <= 4; ++exp) {
    const fs::path jpath = dir / ("exp" + std::to_string(exp) + ".json");
    const fs::path mpath = dir / ("exp" + std::to_string(exp) + ".md");
    if (!fs::exists(jpath) || !fs::exists(mpath)) continue;
    any = true;
    std::ifstream jin(jpath);
    ordered_json j = ordered_json::parse(jin);
    combined << "<!-- exp" << exp << ": config " << j["provenance"].value("config_hash", "?")
             << ", seed " << j["provenance"].value("master_seed", 0ULL) << " -->\n";
    std::ifstream min(mpath);
    combined << min.rdbuf() << "\n";
  }
  require(any, errc::missing_dataset, "no exp*.json/exp*.md reports found in " + dir.string());
  write_text(dir / "report.md", combined.str());
  std::cout << "wrote " << (dir / "report.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explainable next-POI recommendation and audit toolkit"};
  app.require_subcommand(1);

  CommonArgs ingest_args, train_args, compress_args, explain_args, audit_args, clone_args,
      report_args;
  std::string rec_path, comp_path, explain_rec, explain_comp;
  std::int64_t user = 0;
  int k_steps = 2, k_users = 2, row = -1, exp = 0;

  auto* ingest = app.add_subcommand("ingest", "parse check-ins into the canonical dataset");
  add_common(ingest, ingest_args);

  auto* train = app.add_subcommand("train", "train the recommender");
  add_common(train, train_args);

  auto* compress = app.add_subcommand("compress", "train the compressor network");
  add_common(compress, compress_args);
  compress->add_option("--rec", rec_path, "recommender checkpoint")->required();

  auto* explain_cmd = app.add_subcommand("explain", "explain one user's recommendation");
  add_common(explain_cmd, explain_args);
  explain_cmd->add_option("--rec", explain_rec, "recommender checkpoint")->required();
  explain_cmd->add_option("--comp", explain_comp, "compressor checkpoint")->required();
  explain_cmd->add_option("--user", user, "user id")->required();
  explain_cmd->add_option("--k-steps", k_steps, "influential timesteps to report");
  explain_cmd->add_option("--k-users", k_users, "similar users to report");
  explain_cmd->add_option("--row", row, "candidate row to explain (default: the recommendation)");

  auto* audit = app.add_subcommand("audit", "run one verification experiment");
  add_common(audit, audit_args);
  audit->add_option("exp", exp, "experiment number (1-4)")->required();
  std::string audit_rec, audit_comp;
  audit->add_option("--rec", audit_rec, "recommender checkpoint")->required();
  audit->add_option("--comp", audit_comp, "compressor checkpoint")->required();

  auto* synth_clone = app.add_subcommand("synth-clone", "build the planted clone dataset");
  add_common(synth_clone, clone_args);

  auto* report = app.add_subcommand("report", "combine experiment reports into report.md");
  add_common(report, report_args);

  try {
    app.parse(argc, argv);
    if (*ingest) return cmd_ingest(ingest_args);
    if (*train) return cmd_train(train_args);
    if (*compress) return cmd_compress(compress_args, rec_path);
    if (*explain_cmd)
      return cmd_explain(explain_args, explain_rec, explain_comp, user, k_steps, k_users, row);
    if (*audit) return cmd_audit(audit_args, exp, audit_rec, audit_comp);
    if (*synth_clone) return cmd_synth_clone(clone_args);
    if (*report) return cmd_report(report_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
