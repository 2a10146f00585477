#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace poixa {

// All randomness in the project flows through this generator so that results
// are bit-stable across platforms and independent of the standard library's
// (unspecified) distribution implementations.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

// xoshiro256++ (Blackman & Vigna), seeded via splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n), n >= 1.
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = next_u64();
      r = x % n;
    } while (x - r > std::uint64_t(-1) - (n - 1));
    return r;
  }

  // Inclusive integer range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double normal(double mean, double sd) {
    // Box-Muller; no state is cached so every call consumes exactly two draws.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    return mean + sd * z;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, n), in draw order.
  std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t k);

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

inline std::vector<std::int64_t> Rng::sample_without_replacement(std::int64_t n, std::int64_t k) {
  std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    out.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Key for deriving independent, reproducible sub-streams from one master seed.
// derive(master, tag, parts...) is a pure function of its arguments.
class StreamKey {
 public:
  StreamKey(std::string_view tag, std::initializer_list<std::int64_t> parts = {}) {
    hash_ = fnv1a64(tag);
    for (auto p : parts) mix(static_cast<std::uint64_t>(p));
  }

  std::uint64_t value() const { return hash_; }

 private:
  void mix(std::uint64_t p) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((p >> (8 * i)) & 0xFF);
    hash_ = fnv1a64(std::string_view(bytes, 8), hash_);
  }

  std::uint64_t hash_;
};

inline Rng derive_rng(std::uint64_t master, const StreamKey& key) {
  std::uint64_t s = master ^ 0x6A09E667F3BCC909ULL;
  std::uint64_t mixed = splitmix64(s) ^ key.value();
  return Rng(splitmix64(mixed));
}

inline std::uint64_t derive_seed(std::uint64_t master, const StreamKey& key) {
  std::uint64_t s = master ^ 0x6A09E667F3BCC909ULL;
  std::uint64_t mixed = splitmix64(s) ^ key.value();
  return splitmix64(mixed);
}

}  // namespace poixa
