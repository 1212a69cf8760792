#include "sagdlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace sagdlab {

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return splitmix64_mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  // u1 in (0, 1] to keep the log finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RngStream::next_index(std::span<const double> probs) {
  if (probs.empty()) {
    throw std::invalid_argument("next_index: empty probability list");
  }
  const double u = next_double();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;  // guard against rounding in the cumulative sum
}

RngStream RngStream::derived(std::uint64_t base_seed, std::uint64_t replicate) {
  return RngStream(splitmix64_mix(base_seed ^ replicate));
}

}  // namespace sagdlab
