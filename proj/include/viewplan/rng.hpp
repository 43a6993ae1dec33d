// Copyright 2026 The Authors.
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

#ifndef VIEWPLAN_RNG_HPP_
#define VIEWPLAN_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace viewplan {

// splitmix64 finalizer; used to derive well spread stream seeds from a base
// seed plus an index so that per-episode streams are independent.
inline std::uint64_t MixSeed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random source. mt19937_64 itself is fully specified by the
// standard; the distribution helpers below are hand rolled because the
// std::*_distribution classes are implementation defined and would break
// cross toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); unbiased via rejection. n must be positive.
  std::size_t UniformIndex(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~0ULL - ~0ULL % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
  }

  double UniformReal(double lo, double hi) {
    return lo + (hi - lo) * NextDouble();
  }

  // Samples an index with probability proportional to weights[i]. Weights
  // must be non-negative with a positive sum.
  std::size_t SampleWeighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = NextDouble() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace viewplan

#endif  // VIEWPLAN_RNG_HPP_
