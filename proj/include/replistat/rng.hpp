#pragma once

#include <cstdint>
#include <random>

namespace replistat {

// Deterministic random stream. Normal draws go through the inverse CDF so
// that a given seed yields the same stream on every platform (the standard
// library's normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform draw strictly inside (0, 1): 53-bit mantissa offset by half an ulp
  // so the inverse-CDF transform never sees 0 or 1 exactly.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();

  // Stream-splitting: derive an independent child seed from (seed, stream).
  // Used to give every trial/grid-point its own stream so results do not
  // depend on evaluation order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 eng_;
};

}  // namespace replistat
