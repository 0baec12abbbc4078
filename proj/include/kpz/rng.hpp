#pragma once
#include <array>
#include <cmath>
#include <cstdint>

namespace kpz {

// Philox4x32-10 keyed by the user seed; the counter carries (tag, index, step).
class Philox {
 public:
  using block = std::array<uint32_t, 4>;

  explicit Philox(uint64_t seed) : key_{uint32_t(seed), uint32_t(seed >> 32)} {}

  block operator()(block ctr) const {
    uint32_t k0 = key_[0], k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      const uint64_t p0 = uint64_t(0xD2511F53u) * ctr[0];
      const uint64_t p1 = uint64_t(0xCD9E8D57u) * ctr[2];
      ctr = {uint32_t(p1 >> 32) ^ ctr[1] ^ k0, uint32_t(p1), uint32_t(p0 >> 32) ^ ctr[3] ^ k1,
             uint32_t(p0)};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return ctr;
  }

  block at(uint32_t tag, int64_t index, uint64_t step) const {
    const uint64_t i = uint64_t(index);
    return (*this)({uint32_t(step), uint32_t(step >> 32) ^ (tag << 16), uint32_t(i), uint32_t(i >> 32)});
  }

 private:
  std::array<uint32_t, 2> key_;
};

enum : uint32_t { kStreamPath = 1, kStreamIC = 2 };

// uniform in the open interval (0,1) from 53 random bits
inline double u53(uint32_t hi, uint32_t lo) {
  const uint64_t m = (uint64_t(hi) << 21) ^ (lo >> 11);
  return (double(m & ((1ull << 53) - 1)) + 0.5) * 0x1.0p-53;
}
inline double u32(uint32_t w) { return (double(w) + 0.5) * 0x1.0p-32; }

inline double box_muller(double u1, double u2) {
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// seed for replica r of a run seeded with `seed`
inline uint64_t replica_seed(uint64_t seed, uint64_t r) { return splitmix64(seed ^ splitmix64(r + 1)); }

}  // namespace kpz
