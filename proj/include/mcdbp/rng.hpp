#pragma once

#include <cmath>
#include <cstdint>

namespace mcdbp {

// splitmix64 (Vigna). Used as the documented integer hash for deriving
// per-stream seeds from (master_seed, stream_tag).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamRole : std::uint64_t { data = 1, ase = 2 };

// Stream tags enumerate (role, channel/amplifier, polarisation) so that every
// random stream in a simulation run has its own reproducible seed, independent
// of execution order.
inline std::uint64_t stream_tag(StreamRole role, std::uint64_t index, std::uint64_t pol = 0) {
  return (static_cast<std::uint64_t>(role) << 56) | (index << 8) | pol;
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(~tag));
}

// xoshiro256** (Blackman/Vigna, public domain). Self-contained so that
// generated sequences are identical across platforms and standard libraries.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x++);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (self-contained for cross-platform
  // reproducibility; std::normal_distribution is implementation-defined).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mcdbp
