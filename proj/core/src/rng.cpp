#include "colide/rng.hpp"

namespace colide {

std::uint64_t StreamRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StreamRng StreamRng::for_task(std::uint64_t master_seed, std::uint64_t seed_index,
                              std::string_view purpose) {
  // FNV-1a over the purpose tag, then fold in the two seeds.
  std::uint64_t tag = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    tag ^= c;
    tag *= 0x100000001b3ULL;
  }
  std::uint64_t key = mix(master_seed + kGamma);
  key = mix(key ^ (seed_index + 0x632be59bd9b4e019ULL));
  key = mix(key ^ tag);
  return StreamRng(key);
}

}  // namespace colide
