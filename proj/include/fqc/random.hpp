#pragma once

#include <cstdint>
#include <limits>

namespace fqc {

// SplitMix64 finalizer (Steele, Lea & Flood). Used both as the per-trial
// stream generator and as the mixing function that derives stream seeds.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

// Counter-based SplitMix64 stream. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += golden_gamma;
    return splitmix64_mix(state_);
  }

private:
  std::uint64_t state_;
};

// Stream for trial `trial_index` of a run seeded with `master_seed`:
//   seed = mix(mix(master_seed) + (trial_index + 1) * golden_gamma)
// Depends on (master_seed, trial_index) only, so any partition of trials
// across workers draws identical numbers.
constexpr SplitMix64 trial_stream(std::uint64_t master_seed,
                                  std::uint64_t trial_index) noexcept {
  return SplitMix64(splitmix64_mix(splitmix64_mix(master_seed) +
                                   (trial_index + 1) * golden_gamma));
}

// Uniform double in [0, 1) from the top 53 bits. Fixed here rather than
// via std::uniform_real_distribution, whose algorithm is unspecified.
template <class Rng>
double uniform01(Rng &rng) {
  static_assert(Rng::max() == std::numeric_limits<std::uint64_t>::max() &&
                    Rng::min() == 0,
                "uniform01 requires a full-range 64-bit generator");
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace fqc
