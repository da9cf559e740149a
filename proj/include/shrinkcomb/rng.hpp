// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace shrinkcomb {

// Every random quantity in the simulator is drawn from an independent stream
// keyed by (master_seed, trial_index, purpose). Streams are derived with
// splitmix64 and generated with xoshiro256++, so results are reproducible
// bit-for-bit regardless of thread count or platform C++ library.

enum class StreamPurpose : std::uint64_t {
  ue_positions = 1,
  interferer_positions = 2,
  ue_channels = 3,
  interferer_channels = 4,
  data_symbols = 5,
  pilot_noise = 6,
  data_noise = 7,
  pilot_interferer_symbols = 8,
  data_interferer_symbols = 9,
  gradient_subset = 10,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mixes a master seed and a trial index into a per-trial seed.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                       std::uint64_t trial_index) {
  std::uint64_t s = master_seed;
  (void)splitmix64(s);
  s ^= 0xd1b54a32d192ed03ULL * (trial_index + 1);
  return splitmix64(s);
}

// Seed for a resampled trial attempt (attempt 0 is the original draw).
inline std::uint64_t derive_resample_seed(std::uint64_t trial_seed,
                                          std::uint64_t attempt) {
  std::uint64_t s = trial_seed ^ (0xe7037ed1a0b428dbULL * (attempt + 1));
  return splitmix64(s);
}

class Rng {
 public:
  Rng(std::uint64_t trial_seed, StreamPurpose purpose) {
    std::uint64_t s = trial_seed ^
        (static_cast<std::uint64_t>(purpose) * 0xbf58476d1ce4e5b9ULL);
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) by rejection (n >= 1).
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Circularly-symmetric complex normal with E[|z|^2] = 1 (Box-Muller).
  std::complex<double> complex_normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace shrinkcomb
