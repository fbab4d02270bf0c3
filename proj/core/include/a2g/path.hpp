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

#ifndef A2G_PATH_HPP
#define A2G_PATH_HPP

#include "a2g/geometry.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace a2g
{

// One propagation path: complex amplitude, delay, arrival direction and
// Doppler frequency. Elevation is measured from zenith in [0, pi]; azimuth
// lies in [0, 2*pi).
struct PathComponent
{
    std::complex<double> amplitude{1.0, 0.0};
    double delay_s = 0.0;
    double azimuth_rad = 0.0;
    double elevation_rad = pi / 2.0; // horizon
    double doppler_hz = 0.0;

    double power() const { return std::norm(amplitude); }
};

inline void validate_path(const PathComponent &p)
{
    if (!std::isfinite(p.delay_s) || p.delay_s < 0.0)
        throw std::invalid_argument("PathComponent: delay_s must be finite and >= 0");
    if (!(std::abs(p.amplitude) > 0.0) || !std::isfinite(std::abs(p.amplitude)))
        throw std::invalid_argument("PathComponent: amplitude must be non-zero and finite");
    if (!std::isfinite(p.azimuth_rad) || p.azimuth_rad < 0.0 || p.azimuth_rad >= two_pi)
        throw std::invalid_argument("PathComponent: azimuth_rad must lie in [0, 2*pi)");
    if (!std::isfinite(p.elevation_rad) || p.elevation_rad < 0.0 || p.elevation_rad > pi)
        throw std::invalid_argument("PathComponent: elevation_rad must lie in [0, pi]");
    if (!std::isfinite(p.doppler_hz))
        throw std::invalid_argument("PathComponent: doppler_hz must be finite");
}

// Per-antenna complex gains of one path (radiation pattern differences and
// per-element blockage). Length must match the array size.
struct PerAntennaGains
{
    std::vector<std::complex<double>> gains;
};

inline PerAntennaGains uniform_gains(int num_antennas)
{
    return {std::vector<std::complex<double>>(static_cast<std::size_t>(num_antennas), {1.0, 0.0})};
}

inline void validate_gains(const PerAntennaGains &g, int num_antennas)
{
    if (g.gains.size() != static_cast<std::size_t>(num_antennas))
        throw std::invalid_argument("PerAntennaGains: length must equal the antenna count");
    double total = 0.0;
    for (const auto &v : g.gains)
    {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("PerAntennaGains: entries must be finite");
        total += std::norm(v);
    }
    if (!(total > 0.0))
        throw std::invalid_argument("PerAntennaGains: gains must not all be zero");
}

} // namespace a2g

#endif
