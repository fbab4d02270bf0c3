// SPDX-License-Identifier: Apache-2.0
//
// a2glab - synthesis, high-resolution estimation, clustering and statistics
// for uniform-circular-array air-to-ground channel snapshots
// Copyright (C) 2026 The a2glab authors
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

#ifndef A2G_RNG_HPP
#define A2G_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace a2g
{

// Seeded random source with self-contained transforms (Box-Muller, inverse
// CDF) instead of std distributions, so that a given seed produces the same
// stream on every standard library. Channel draws split seeds per channel to
// stay deterministic under any parallel schedule.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1)
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] inclusive
    int uniform_int(int lo, int hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    // Standard normal via Box-Muller (two uniforms per draw, no cached spare)
    double normal()
    {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Exponential with the given mean
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Circularly-symmetric complex normal with total variance `variance`
    std::complex<double> complex_normal(double variance)
    {
        const double s = std::sqrt(variance / 2.0);
        return {s * normal(), s * normal()};
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 engine_;
};

} // namespace a2g

#endif
