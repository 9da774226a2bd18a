/**
 * Copyright (C) 2026 The sarid authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SARID_RNG_HPP
#define SARID_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sarid {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on uint64.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed splitting rule used everywhere a seed spawns sub-seeds: stream i of
/// `seed` is splitmix64 applied to seed advanced i times by the golden-ratio
/// increment. Adding streams never perturbs earlier ones.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + stream * 0x9e3779b97f4a7c15ULL);
}

/// Counter-based generator: every draw is a pure function of (seed, stream,
/// counter), so trajectories are bit-reproducible regardless of evaluation
/// order and prefixes of longer runs equal shorter runs exactly.
///
/// Normal variates use the basic Box-Muller transform on two counter slots,
/// which is exact (no tail approximation) and portable across platforms.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(split_seed(seed, stream)) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform01(counter);
  }

  /// Standard normal via Box-Muller; consumes counter slots 2c and 2c+1.
  double normal(std::uint64_t counter) const {
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        static_cast<double>((bits(2 * counter) >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(bits(2 * counter + 1) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace sarid

#endif  // SARID_RNG_HPP
