// Copyright 2026 The dpfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFL_UTIL_HPP_
#define DPFL_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace dpfl {

// splitmix64 mixing step; used to derive independent per-point seeds from a
// base seed and grid indices.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Chains a sequence index into a seed: derive(derive(base, i), j) gives a
// reproducible per-(i, j) stream regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x51aa1b9db11e2f6bULL));
}

// Uniform double in [0, 1). Bypasses std::uniform_real_distribution so that
// streams are identical across standard library implementations.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on the deterministic uniform above.
inline double normal_unit(std::mt19937_64& rng) {
  double u1 = uniform_unit(rng);
  double u2 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Locale-independent formatting with a fixed number of significant digits.
std::string format_significant(double value, int digits);

// Natural-log value expressed in bits.
inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace dpfl

#endif  // DPFL_UTIL_HPP_
