#include "poixa/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace poixa {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::int64_t to_i64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    std::int64_t r = std::stoll(v, &used);
    require(used == v.size(), errc::config_error, "bad integer for " + key + ": " + v);
    return r;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(errc::config_error, "bad integer for " + key + ": " + v);
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    std::uint64_t r = std::stoull(v, &used);
    require(used == v.size(), errc::config_error, "bad unsigned integer for " + key + ": " + v);
    return r;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(errc::config_error, "bad unsigned integer for " + key + ": " + v);
  }
}

double to_f64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double r = std::stod(v, &used);
    require(used == v.size(), errc::config_error, "bad number for " + key + ": " + v);
    return r;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(errc::config_error, "bad number for " + key + ": " + v);
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  require(compressor_epochs >= 0, errc::config_error, "compressor_epochs must be >= 0");
  require(compressor_lr > 0.0, errc::config_error, "compressor_lr must be positive");
  require(trials >= 1, errc::config_error, "trials must be >= 1");
  require(random_trials >= 1, errc::config_error, "random_trials must be >= 1");
  require(n_random >= 2, errc::config_error, "n_random must be >= 2");
  require(closest_k >= 1, errc::config_error, "closest_k must be >= 1");
  require(threshold > 0.0 && threshold < 1.0, errc::config_error, "threshold must be in (0,1)");
  require(min_len >= 3, errc::config_error, "min_len must be >= 3");
  require(bbox.lat_min < bbox.lat_max && bbox.lon_min < bbox.lon_max, errc::config_error,
          "bounding box is empty");
}

CompressorConfig RunConfig::compressor_config() const {
  CompressorConfig c;
  c.epochs = compressor_epochs;
  c.lr = compressor_lr;
  c.adam_beta1 = model.adam_beta1;
  c.adam_beta2 = model.adam_beta2;
  c.adam_eps = model.adam_eps;
  c.seed = derive_seed(master_seed, StreamKey("compressor"));
  return c;
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["bbox_lat_max"] = fmt_double(bbox.lat_max);
  kv["bbox_lat_min"] = fmt_double(bbox.lat_min);
  kv["bbox_lon_max"] = fmt_double(bbox.lon_max);
  kv["bbox_lon_min"] = fmt_double(bbox.lon_min);
  kv["closest_k"] = std::to_string(closest_k);
  kv["compressor_epochs"] = std::to_string(compressor_epochs);
  kv["compressor_lr"] = fmt_double(compressor_lr);
  kv["d_emb"] = std::to_string(model.d_emb);
  kv["epochs"] = std::to_string(model.epochs);
  kv["lr"] = fmt_double(model.lr);
  kv["min_len"] = std::to_string(min_len);
  kv["n_random"] = std::to_string(n_random);
  kv["random_trials"] = std::to_string(random_trials);
  kv["seed"] = std::to_string(master_seed);
  kv["t_max"] = std::to_string(model.t_max);
  kv["threshold"] = fmt_double(threshold);
  kv["trials"] = std::to_string(trials);
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
  return os.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

std::string RunConfig::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

void apply_config_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "data") {
    cfg.data_path = value;
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "d_emb") {
    cfg.model.d_emb = static_cast<int>(to_i64(key, value));
  } else if (key == "t_max") {
    cfg.model.t_max = static_cast<int>(to_i64(key, value));
  } else if (key == "epochs") {
    cfg.model.epochs = static_cast<int>(to_i64(key, value));
  } else if (key == "lr") {
    cfg.model.lr = to_f64(key, value);
  } else if (key == "compressor_epochs") {
    cfg.compressor_epochs = static_cast<int>(to_i64(key, value));
  } else if (key == "compressor_lr") {
    cfg.compressor_lr = to_f64(key, value);
  } else if (key == "trials") {
    cfg.trials = static_cast<int>(to_i64(key, value));
  } else if (key == "random_trials") {
    cfg.random_trials = static_cast<int>(to_i64(key, value));
  } else if (key == "n_random") {
    cfg.n_random = static_cast<int>(to_i64(key, value));
  } else if (key == "closest_k") {
    cfg.closest_k = static_cast<int>(to_i64(key, value));
  } else if (key == "threshold") {
    cfg.threshold = to_f64(key, value);
  } else if (key == "seed") {
    cfg.master_seed = to_u64(key, value);
  } else if (key == "min_len") {
    cfg.min_len = static_cast<int>(to_i64(key, value));
  } else if (key == "bbox_lat_min") {
    cfg.bbox.lat_min = to_f64(key, value);
  } else if (key == "bbox_lat_max") {
    cfg.bbox.lat_max = to_f64(key, value);
  } else if (key == "bbox_lon_min") {
    cfg.bbox.lon_min = to_f64(key, value);
  } else if (key == "bbox_lon_max") {
    cfg.bbox.lon_max = to_f64(key, value);
  } else {
    fail(errc::config_error, "unknown config key: " + key);
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos, errc::config_error,
            "line " + std::to_string(line_no) + ": expected key=value");
    apply_config_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::config_error, "cannot read config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

}  // namespace poixa
