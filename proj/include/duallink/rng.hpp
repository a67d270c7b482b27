// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "duallink/hermitian.hpp"

namespace duallink {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Identifies the generator layout; bump when the mapping from
/// (seed, index, stream) to draws changes.
inline constexpr const char* kRngVersion = "philox4x32-10/v1";

/// Counter-based stream keyed by (seed, index, stream). Streams with different
/// keys are independent, so realizations can be drawn in any order or in
/// parallel and still produce the same values.
///
/// Counter layout: word 0 = block number, word 1 = stream, words 2-3 = index.
/// Key = seed.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  /// Circularly symmetric complex Gaussian with unit variance (each part 1/2).
  Complex complex_normal();
  /// rows x cols matrix of complex_normal entries, filled row-major.
  Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace duallink
