#ifndef SMPX_RNG_HPP
#define SMPX_RNG_HPP

#include <cstdint>
#include <limits>
#include <span>

namespace smpx {

// Counter-based generator: SplitMix64 evaluated in counter mode.
//
//   key      = mix(mix(base_seed) ^ (run_index * 0xD1B54A32D192ED03))
//   draw(i)  = mix(key + (i + 1) * 0x9E3779B97F4A7C15)
//   mix(z)   = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//              z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
//
// A stream is fully described by (base_seed, run_index, counter), so any
// implementation of these three lines reproduces it bit for bit. Uniform
// doubles use the top 53 bits; every derived variate consumes a fixed number
// of raw draws.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t base_seed, std::uint64_t run_index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  // [0, 1)
  double uniform();
  // (0, 1), safe for logarithms.
  double uniform_open();
  // Standard normal via Box-Muller; consumes exactly two draws.
  double normal();
  // +1 or -1 with probability 1/2 each.
  double rademacher();
  // Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);
  // Inverse-CDF categorical draw over nonnegative weights summing to ~1.
  // Consumes one uniform; ties go to the smaller index.
  std::size_t categorical(std::span<const double> probs);

  // Independent child stream (e.g. one per replication).
  RandomStream split(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter, int);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace smpx

#endif
