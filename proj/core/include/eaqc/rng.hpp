#pragma once

#include <cstdint>
#include <random>

namespace eaqc {

// splitmix64; used to derive independent per-sample seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derived_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Seedable generator with a portable double stream: values are produced from
// raw mt19937_64 output as (x >> 11) * 2^-53, never through
// std::uniform_real_distribution (whose output is implementation-defined).
// The same seed therefore yields bit-identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1)
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // uniform on [-1, 1)
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // uniform integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) {
    return gen_() % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace eaqc
