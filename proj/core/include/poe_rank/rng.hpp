// Copyright 2026 The poe-rank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POE_RANK_RNG_HPP_
#define POE_RANK_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace poe_rank {

// splitmix64 finalizer (Steele, Lea & Flood 2014). Used to derive
// statistically independent sub-seeds from a master seed plus stream
// coordinates, so that every (trial, pair, ...) stream is a pure function
// of its coordinates and never depends on evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t c : coords) {
    h = splitmix64(h ^ splitmix64(c));
  }
  return h;
}

// The sampling helpers below are spelled out rather than taken from
// <random>'s distributions because the standard leaves those algorithms
// implementation-defined; fixing them here keeps seeded output identical
// across standard libraries.

// Uniform draw from [0, bound) by rejection (arc4random_uniform scheme).
inline std::uint64_t bounded_uint64(std::mt19937_64& rng,
                                    std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller. Spends two uniforms per draw; fine at
// simulation scale.
inline double normal_draw(std::mt19937_64& rng) {
  const double u1 =
      (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform_double(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Fisher-Yates.
template <typename T>
void shuffle_vector(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_uint64(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace poe_rank

#endif  // POE_RANK_RNG_HPP_
