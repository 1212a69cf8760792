#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sagdlab {

/// Counter-based random stream. Each draw is the SplitMix64 finalizer
/// applied to seed + counter * golden-ratio increment, so the sequence is
/// a pure function of (seed, counter) and identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_double();

  /// Standard normal via Box-Muller (consumes two draws per value).
  double next_gaussian();

  /// Index drawn by inverse CDF over the given probability list.
  std::size_t next_index(std::span<const double> probs);

  /// Stream for replicate i of a base seed: base ^ i pushed through the
  /// SplitMix64 finalizer so nearby replicate ids decorrelate.
  static RngStream derived(std::uint64_t base_seed, std::uint64_t replicate);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace sagdlab
