#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poixa/compressor.hpp"
#include "poixa/recommender.hpp"

namespace poixa {

// Binary tensor container:
//   magic "PXCK", version u32, tensor count u32, then per tensor
//   name_len u32 + UTF-8 name, rank u32, dims u32 each, raw float32 data,
//   all little-endian, with a trailing CRC32 of every preceding byte.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

std::vector<std::uint8_t> encode_checkpoint(const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint_file(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint_file(const std::string& path);

std::uint32_t crc32_of_bytes(const std::vector<std::uint8_t>& bytes);
std::uint32_t crc32_of_file(const std::string& path);

// Model-level wrappers. The sidecar `<path>.json` carries the model config,
// the id<->index maps, and whatever extra provenance the caller supplies
// (master seed, config hash); loading restores state without the dataset.
void save_recommender_checkpoint(const std::string& path, const RecommenderState& state,
                                 const std::vector<std::int64_t>& user_ids,
                                 const std::vector<std::int64_t>& poi_ids,
                                 const std::string& extra_json = "{}");
RecommenderState load_recommender_checkpoint(const std::string& path,
                                             std::vector<std::int64_t>* user_ids = nullptr,
                                             std::vector<std::int64_t>* poi_ids = nullptr);

void save_compressor_checkpoint(const std::string& path, const CompressorState& state,
                                const std::vector<std::int64_t>& user_ids,
                                const std::string& extra_json = "{}");
CompressorState load_compressor_checkpoint(const std::string& path,
                                           std::vector<std::int64_t>* user_ids = nullptr);

}  // namespace poixa
