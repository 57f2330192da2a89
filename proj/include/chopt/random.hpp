#pragma once

#include <cstdint>
#include <random>

namespace chopt {

/// 64-bit Mersenne twister (a generalized feedback shift register) keyed by
/// (seed, stream). Distinct streams give independent sequences, so results
/// for one ratio never depend on how many ratios precede it.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x43485631u};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits; defined bit-for-bit, unlike
  /// std::uniform_real_distribution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chopt
