// Copyright 2026 The svclock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVCLOCK_RNG_HPP
#define SVCLOCK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace svclock {

// Deterministic random numbers with portable, documented bit streams.
//
// The standard library's distributions are implementation-defined, which
// defeats byte-level reproducibility of emitted datasets across toolchains.
// SplitMix64 (Steele, Lea, Flood 2014) plus Box-Muller consumes a fixed
// number of generator words per variate, so every simulated shot can run in
// its own substream and results do not depend on how shots are batched over
// workers.

/// SplitMix64 finalizer: bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives the seed of independent substream `index` from a master seed.
/// Used for per-shot streams: results are identical no matter how the shot
/// range is partitioned across threads.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index ^ 0x9E3779B97F4A7C15ULL));
}

class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; never zero, safe under log().
    double next_double_open() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

/// Standard-normal generator (Box-Muller). Exactly two uniforms per pair of
/// variates; the spare value is cached.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_double_open();
        const double u2 = rng_.next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double operator()(double mean, double sigma) { return mean + sigma * (*this)(); }

  private:
    SplitMix64 rng_;
    double spare_ = 0;
    bool have_spare_ = false;
};

/// One independent Gaussian stream per simulated shot.
inline GaussianSampler shot_stream(std::uint64_t master_seed, std::uint64_t shot_index) {
    return GaussianSampler(substream_seed(master_seed, shot_index));
}

/// Binomial(n, p) sample by explicit Bernoulli summation for small n*p and by
/// normal approximation beyond; deterministic uniform consumption in both
/// branches for a fixed (n, p) pair.
inline std::uint64_t binomial_sample(SplitMix64& rng, std::uint64_t n, double p) {
    if (p <= 0 || n == 0) {
        return 0;
    }
    if (p >= 1) {
        return n;
    }
    if (n <= 64) {
        std::uint64_t count = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            count += rng.next_double() < p ? 1 : 0;
        }
        return count;
    }
    // Normal approximation with continuity correction; adequate for the
    // n >~ 10^3 atom-counting regime this library uses it in.
    const double u1 = rng.next_double_open();
    const double u2 = rng.next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    const double mean = double(n) * p;
    const double sigma = std::sqrt(double(n) * p * (1 - p));
    const double value = std::round(mean + sigma * z);
    if (value < 0) {
        return 0;
    }
    if (value > double(n)) {
        return n;
    }
    return std::uint64_t(value);
}

}  // namespace svclock

#endif
