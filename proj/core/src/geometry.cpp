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

#include "a2g/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace a2g
{

UcaGeometry::UcaGeometry(int num_elements, double radius_m, double carrier_hz)
    : num_elements_(num_elements), radius_m_(radius_m), carrier_hz_(carrier_hz)
{
    if (num_elements < 2)
        throw std::invalid_argument("UcaGeometry: num_elements must be >= 2");
    if (!(radius_m > 0.0) || !std::isfinite(radius_m))
        throw std::invalid_argument("UcaGeometry: radius_m must be positive");
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
        throw std::invalid_argument("UcaGeometry: carrier_hz must be positive");

    element_azimuths_rad_.resize(static_cast<std::size_t>(num_elements));
    for (int m = 0; m < num_elements; ++m)
        element_azimuths_rad_[static_cast<std::size_t>(m)] = two_pi * m / num_elements;
}

UcaGeometry::UcaGeometry(int num_elements, double radius_m, double carrier_hz,
                         std::vector<double> element_azimuths_rad)
    : UcaGeometry(num_elements, radius_m, carrier_hz)
{
    if (element_azimuths_rad.size() != static_cast<std::size_t>(num_elements))
        throw std::invalid_argument("UcaGeometry: element azimuth count does not match num_elements");
    for (std::size_t m = 0; m < element_azimuths_rad.size(); ++m)
    {
        double psi = element_azimuths_rad[m];
        if (!std::isfinite(psi) || psi < 0.0 || psi >= two_pi)
            throw std::invalid_argument("UcaGeometry: element azimuths must lie in [0, 2*pi)");
        if (m > 0 && psi <= element_azimuths_rad[m - 1])
            throw std::invalid_argument("UcaGeometry: element azimuths must be strictly increasing");
    }
    element_azimuths_rad_ = std::move(element_azimuths_rad);
}

void steering_vector_into(const UcaGeometry &geometry, double azimuth_rad,
                          double elevation_rad, std::complex<double> *out)
{
    if (!std::isfinite(azimuth_rad) || !std::isfinite(elevation_rad))
        throw std::invalid_argument("steering_vector: angles must be finite");

    const double wave_number_radius = two_pi * geometry.radius_m() / geometry.wavelength_m();
    const double in_plane = wave_number_radius * std::sin(elevation_rad);
    const auto &psi = geometry.element_azimuths_rad();
    for (int m = 0; m < geometry.num_elements(); ++m)
    {
        const double phase = in_plane * std::cos(azimuth_rad - psi[static_cast<std::size_t>(m)]);
        out[m] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
}

std::vector<std::complex<double>> steering_vector(const UcaGeometry &geometry,
                                                  double azimuth_rad, double elevation_rad)
{
    std::vector<std::complex<double>> a(static_cast<std::size_t>(geometry.num_elements()));
    steering_vector_into(geometry, azimuth_rad, elevation_rad, a.data());
    return a;
}

double wrap_angle(double angle_rad)
{
    double w = std::fmod(angle_rad, two_pi);
    if (w < 0.0)
        w += two_pi;
    // fmod can return exactly 2*pi after the correction when angle is a tiny
    // negative number
    if (w >= two_pi)
        w = 0.0;
    return w;
}

double circular_difference(double a_rad, double b_rad)
{
    double d = std::fmod(a_rad - b_rad, two_pi);
    if (d > pi)
        d -= two_pi;
    if (d <= -pi)
        d += two_pi;
    return d;
}

} // namespace a2g
