#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

#include "pelvar/special_functions.hpp"

namespace pelvar {

/// SplitMix64 finalizer, used to derive stream identifiers.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Folds an ordered list of indices (repetition, component, ...) into one id.
constexpr std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (auto v : parts) h = mix64(h ^ mix64(v));
  return h;
}

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key is the user seed; the 128-bit counter is split into a
/// 64-bit stream id and a 64-bit block index. Distinct (seed, stream) pairs
/// give independent sequences, so parallel jobs never share state.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream) : key_{lo(seed), hi(seed)}, stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ >= 4) refill();
    const std::uint64_t a = out_[pos_++];
    const std::uint64_t b = out_[pos_++];
    return (a << 32) | b;
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() { return special::normal_quantile(uniform()); }

  double exponential() { return -std::log(uniform()); }

  /// The raw ten-round bijection.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53U) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57U) * ctr[2];
      ctr = {hi(p1) ^ ctr[1] ^ key[0], lo(p1), hi(p0) ^ ctr[3] ^ key[1], lo(p0)};
      key[0] += 0x9E3779B9U;
      key[1] += 0xBB67AE85U;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t lo(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
  static constexpr std::uint32_t hi(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

  void refill() {
    out_ = block({lo(block_), hi(block_), lo(stream_), hi(stream_)}, key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> out_{};
  int pos_ = 4;
};

}  // namespace pelvar
