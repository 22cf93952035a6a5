#pragma once

// Counter-based Philox4x32-10 generator (Salmon et al., SC'11).
//
// A stream is addressed by (seed, stream); the block counter walks through
// the 2^64 blocks of that stream. Two generators with the same address
// produce the same sequence on any thread in any order.

#include <array>
#include <cstdint>

namespace regsing {

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// The raw Philox4x32 bijection with 10 rounds.
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(RngSeed s);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform integer in [0, bound) by Lemire's multiply-and-reject. bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int used_ = 2;
};

}  // namespace regsing
