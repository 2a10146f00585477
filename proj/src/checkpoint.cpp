#include "poixa/checkpoint.hpp"

#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace poixa {

namespace {

using ordered_json = nlohmann::ordered_json;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    require(pos_ + 4 <= bytes_.size(), errc::corrupt_dataset, "truncated checkpoint");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::string str(std::size_t n) {
    require(pos_ + n <= bytes_.size(), errc::corrupt_dataset, "truncated checkpoint");
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::vector<NamedTensor> params_to_tensors(const ParamStore& params) {
  std::vector<NamedTensor> out;
  for (const auto& [name, p] : params) out.push_back({name, p.value});
  return out;
}

void tensors_into_params(const std::vector<NamedTensor>& tensors, ParamStore& params) {
  for (const NamedTensor& nt : tensors) {
    ParamT<float>& p = params.get(nt.name);
    require(p.value.shape == nt.tensor.shape, errc::corrupt_dataset,
            "checkpoint tensor " + nt.name + " has shape " + nt.tensor.shape_str() +
                ", expected " + p.value.shape_str());
    p.value = nt.tensor;
  }
}

std::vector<std::int64_t> ids_from_json(const ordered_json& j, const char* key) {
  std::vector<std::int64_t> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<std::int64_t>());
  return out;
}

ordered_json ids_to_json(const std::vector<std::int64_t>& ids) {
  ordered_json arr = ordered_json::array();
  for (std::int64_t id : ids) arr.push_back(id);
  return arr;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::missing_checkpoint, "cannot write " + path);
  out << content;
  out.flush();
  require(out.good(), errc::missing_checkpoint, "write failed for " + path);
}

std::string read_file(const std::string& path, errc missing) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), missing, path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

}  // namespace

std::uint32_t crc32_of_bytes(const std::vector<std::uint8_t>& bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32_of_file(const std::string& path) {
  std::string content = read_file(path, errc::missing_checkpoint);
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(content.data()),
                static_cast<uInt>(content.size()));
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_checkpoint(const std::vector<NamedTensor>& tensors) {
  std::vector<std::uint8_t> out = {'P', 'X', 'C', 'K'};
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& nt : tensors) {
    put_u32(out, static_cast<std::uint32_t>(nt.name.size()));
    out.insert(out.end(), nt.name.begin(), nt.name.end());
    put_u32(out, static_cast<std::uint32_t>(nt.tensor.shape.size()));
    for (int d : nt.tensor.shape) put_u32(out, static_cast<std::uint32_t>(d));
    for (float v : nt.tensor.data) put_f32(out, v);
  }
  put_u32(out, crc32_of_bytes(out));
  return out;
}

std::vector<NamedTensor> decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  require(bytes.size() >= 16, errc::corrupt_dataset, "checkpoint too small");
  {
    std::vector<std::uint8_t> body(bytes.begin(), bytes.end() - 4);
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i)
      stored |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + static_cast<std::size_t>(i)])
                << (8 * i);
    require(crc32_of_bytes(body) == stored, errc::corrupt_dataset, "checkpoint CRC mismatch");
  }

  Reader r(bytes);
  require(r.str(4) == "PXCK", errc::corrupt_dataset, "bad checkpoint magic");
  require(r.u32() == kCheckpointVersion, errc::corrupt_dataset, "unsupported checkpoint version");
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor nt;
    nt.name = r.str(r.u32());
    const std::uint32_t rank = r.u32();
    std::vector<int> shape;
    std::int64_t numel = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      shape.push_back(static_cast<int>(r.u32()));
      numel *= shape.back();
    }
    std::vector<float> data(static_cast<std::size_t>(numel));
    for (auto& v : data) v = r.f32();
    nt.tensor = Tensor(std::move(shape), std::move(data));
    out.push_back(std::move(nt));
  }
  return out;
}

void save_checkpoint_file(const std::string& path, const std::vector<NamedTensor>& tensors) {
  std::vector<std::uint8_t> bytes = encode_checkpoint(tensors);
  write_file(path, std::string(bytes.begin(), bytes.end()));
}

std::vector<NamedTensor> load_checkpoint_file(const std::string& path) {
  std::string content = read_file(path, errc::missing_checkpoint);
  return decode_checkpoint(std::vector<std::uint8_t>(content.begin(), content.end()));
}

namespace {

ordered_json model_config_json(const ModelConfig& c) {
  ordered_json j;
  j["d_emb"] = c.d_emb;
  j["t_max"] = c.t_max;
  j["epochs"] = c.epochs;
  j["lr"] = c.lr;
  j["adam_beta1"] = c.adam_beta1;
  j["adam_beta2"] = c.adam_beta2;
  j["adam_eps"] = c.adam_eps;
  j["seed"] = c.seed;
  return j;
}

ModelConfig model_config_from_json(const ordered_json& j) {
  ModelConfig c;
  c.d_emb = j.at("d_emb").get<int>();
  c.t_max = j.at("t_max").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.lr = j.at("lr").get<double>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_eps = j.at("adam_eps").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_recommender_checkpoint(const std::string& path, const RecommenderState& state,
                                 const std::vector<std::int64_t>& user_ids,
                                 const std::vector<std::int64_t>& poi_ids,
                                 const std::string& extra_json) {
  save_checkpoint_file(path, params_to_tensors(state.params));
  ordered_json sidecar;
  sidecar["kind"] = "recommender";
  sidecar["config"] = model_config_json(state.config);
  sidecar["n_users"] = state.n_users;
  sidecar["n_pois"] = state.n_pois;
  sidecar["user_ids"] = ids_to_json(user_ids);
  sidecar["poi_ids"] = ids_to_json(poi_ids);
  sidecar["extra"] = ordered_json::parse(extra_json);
  write_file(path + ".json", sidecar.dump(2) + "\n");
}

RecommenderState load_recommender_checkpoint(const std::string& path,
                                             std::vector<std::int64_t>* user_ids,
                                             std::vector<std::int64_t>* poi_ids) {
  ordered_json sidecar = ordered_json::parse(read_file(path + ".json", errc::missing_checkpoint));
  require(sidecar.at("kind") == "recommender", errc::corrupt_dataset,
          "checkpoint sidecar kind mismatch");
  RecommenderState state = init_recommender<float>(model_config_from_json(sidecar.at("config")),
                                                   sidecar.at("n_users").get<int>(),
                                                   sidecar.at("n_pois").get<int>());
  tensors_into_params(load_checkpoint_file(path), state.params);
  if (user_ids) *user_ids = ids_from_json(sidecar, "user_ids");
  if (poi_ids) *poi_ids = ids_from_json(sidecar, "poi_ids");
  return state;
}

void save_compressor_checkpoint(const std::string& path, const CompressorState& state,
                                const std::vector<std::int64_t>& user_ids,
                                const std::string& extra_json) {
  save_checkpoint_file(path, params_to_tensors(state.params));
  ordered_json sidecar;
  sidecar["kind"] = "compressor";
  ordered_json cfg;
  cfg["epochs"] = state.config.epochs;
  cfg["lr"] = state.config.lr;
  cfg["adam_beta1"] = state.config.adam_beta1;
  cfg["adam_beta2"] = state.config.adam_beta2;
  cfg["adam_eps"] = state.config.adam_eps;
  cfg["seed"] = state.config.seed;
  sidecar["config"] = cfg;
  sidecar["d_in"] = state.d_in;
  sidecar["n_users"] = state.n_users;
  sidecar["user_ids"] = ids_to_json(user_ids);
  sidecar["extra"] = ordered_json::parse(extra_json);
  write_file(path + ".json", sidecar.dump(2) + "\n");
}

CompressorState load_compressor_checkpoint(const std::string& path,
                                           std::vector<std::int64_t>* user_ids) {
  ordered_json sidecar = ordered_json::parse(read_file(path + ".json", errc::missing_checkpoint));
  require(sidecar.at("kind") == "compressor", errc::corrupt_dataset,
          "checkpoint sidecar kind mismatch");
  CompressorConfig cfg;
  const auto& j = sidecar.at("config");
  cfg.epochs = j.at("epochs").get<int>();
  cfg.lr = j.at("lr").get<double>();
  cfg.adam_beta1 = j.at("adam_beta1").get<double>();
  cfg.adam_beta2 = j.at("adam_beta2").get<double>();
  cfg.adam_eps = j.at("adam_eps").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  CompressorState state =
      init_compressor<float>(cfg, sidecar.at("d_in").get<int>(), sidecar.at("n_users").get<int>());
  tensors_into_params(load_checkpoint_file(path), state.params);
  if (user_ids) *user_ids = ids_from_json(sidecar, "user_ids");
  return state;
}

}  // namespace poixa
