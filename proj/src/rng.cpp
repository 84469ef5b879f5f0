#include "smpx/rng.hpp"

#include <cmath>
#include <numbers>

#include "smpx/error.hpp"

namespace smpx {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kRunMul = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

RandomStream::RandomStream(std::uint64_t base_seed, std::uint64_t run_index)
    : key_(splitmix64_mix(splitmix64_mix(base_seed) ^ (run_index * kRunMul))) {}

RandomStream::RandomStream(std::uint64_t key, std::uint64_t counter, int)
    : key_(key), counter_(counter) {}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::rademacher() {
  return (next_u64() >> 63) != 0 ? 1.0 : -1.0;
}

std::size_t RandomStream::uniform_index(std::size_t n) {
  if (n == 0) throw InputError("uniform_index: empty range");
  // Multiply-shift on the top 53 bits; bias is below 2^-53 * n.
  const auto idx = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return idx < n ? idx : n - 1;
}

std::size_t RandomStream::categorical(std::span<const double> probs) {
  if (probs.empty()) throw InputError("categorical: no outcomes");
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = uniform() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cum += probs[i];
    if (u < cum) return i;
  }
  // Round-off pushed u past the final partial sum.
  return last_positive;
}

RandomStream RandomStream::split(std::uint64_t index) const {
  const std::uint64_t child =
      splitmix64_mix(key_ ^ splitmix64_mix(index * kRunMul + kGolden));
  return RandomStream(child, 0, 0);
}

}  // namespace smpx
