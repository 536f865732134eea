// SPDX-License-Identifier: Apache-2.0
//
// tdba - time-domain beam alignment simulation library
// Copyright (C) 2026 The tdba authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef TDBA_RNG_HPP
#define TDBA_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tdba
{

// Purpose tags that partition the random streams of one simulation.
// Streams with different tags (or different counters) never share state.
enum class StreamTag : std::uint64_t
{
    paths = 1,
    codebook = 2,
    slot = 3,
    noise = 4,
    pn = 5,
    guess = 6,
    pdp = 7,
    instance = 8
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Hash a master seed and a list of counters into a single 64-bit key.
inline constexpr std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) noexcept
{
    std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
    for (auto c : counters)
        h = splitmix64(h ^ splitmix64(c + 0x3C6EF372FE94F82BULL));
    return h;
}

/// Deterministic random stream keyed by (seed, tag, counters...).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. All distributions are implemented here rather than taken from
/// <random>, because the standard library distributions are not required to
/// produce identical values across implementations.
class Rng
{
  public:
    explicit Rng(std::uint64_t key) : engine_(key) {}

    Rng(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> counters = {})
        : engine_(derive(seed, tag, counters))
    {
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n)
    {
        if (n == 0)
            throw std::invalid_argument("uniform_index: empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do
            x = engine_();
        while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; both outputs are used.
    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    // Exponential with unit mean.
    double exponential()
    {
        double u = uniform();
        while (u <= 0.0)
            u = uniform();
        return -std::log(u);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static std::uint64_t derive(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> counters)
    {
        std::uint64_t h = stream_key(seed, {static_cast<std::uint64_t>(tag)});
        for (auto c : counters)
            h = splitmix64(h ^ splitmix64(c + 0x3C6EF372FE94F82BULL));
        return h;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tdba

#endif
