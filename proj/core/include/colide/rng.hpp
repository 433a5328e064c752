#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace colide {

// Counter-based generator: the i-th output is a pure function of (key, i).
// Streams derived from distinct (master seed, seed index, purpose) triples
// are independent, so adding a consumer never perturbs another stream.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) : key_(key) {}

  static StreamRng for_task(std::uint64_t master_seed, std::uint64_t seed_index,
                            std::string_view purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGamma * ++counter_); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace colide
