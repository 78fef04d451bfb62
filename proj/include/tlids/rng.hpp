/*
 * Copyright (c) 2026, the tlids authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

namespace tlids {

/// Identity string pinned in corpus manifests. Corpus bytes are a pure
/// function of (seed, config) for a given value of this string.
inline constexpr const char* kRngId = "splitmix64/substream-v1";

/// splitmix64: tiny, well-known, platform-independent 64-bit generator.
/// Substreams are derived by mixing a stream index into the seed, so
/// record generation can be reordered or parallelized without changing
/// any record's bytes.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Uniform integer in [lo, hi] inclusive. Debiasing is unnecessary for
  /// the small ranges used here; a 64-bit modulo keeps it reproducible.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  /// Poisson via sequential search (Knuth); mean values here are tiny.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double threshold = exp_neg(mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_unit();
    } while (p > threshold);
    return k - 1;
  }

  /// Derive the generator for substream `index` of a run seeded with `seed`.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0xa0761d6478bd642fULL * (index + 1)));
    return SplitMix64(mixer.next_u64());
  }

 private:
  // Series expansion is overkill; a few halvings plus a short Taylor sum
  // give full double precision for the small means used by the generator.
  static double exp_neg(double x) {
    int halvings = 0;
    while (x > 0.5) {
      x *= 0.5;
      ++halvings;
    }
    double sum = 1.0, term = 1.0;
    for (int i = 1; i < 16; ++i) {
      term *= -x / i;
      sum += term;
    }
    for (int i = 0; i < halvings; ++i) sum *= sum;
    return sum;
  }

  std::uint64_t state_;
};

}  // namespace tlids
