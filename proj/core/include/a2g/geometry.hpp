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

#ifndef A2G_GEOMETRY_HPP
#define A2G_GEOMETRY_HPP

#include <complex>
#include <vector>

namespace a2g
{

constexpr double speed_of_light_m_s = 299792458.0;
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;

// Uniform circular array lying in the horizontal plane, phase reference at
// the geometric center. Element m sits at azimuth psi_m on a circle of the
// given radius. Immutable after construction.
class UcaGeometry
{
  public:
    // Uniform element placement psi_m = 2*pi*(m-1)/M
    UcaGeometry(int num_elements = 16, double radius_m = 0.20, double carrier_hz = 1.8e9);

    // Custom element azimuths (must be strictly increasing in [0, 2*pi))
    UcaGeometry(int num_elements, double radius_m, double carrier_hz,
                std::vector<double> element_azimuths_rad);

    int num_elements() const { return num_elements_; }
    double radius_m() const { return radius_m_; }
    double carrier_hz() const { return carrier_hz_; }
    double wavelength_m() const { return speed_of_light_m_s / carrier_hz_; }
    const std::vector<double> &element_azimuths_rad() const { return element_azimuths_rad_; }

    bool operator==(const UcaGeometry &) const = default;

  private:
    int num_elements_;
    double radius_m_;
    double carrier_hz_;
    std::vector<double> element_azimuths_rad_;
};

// Array response to a plane wave from (azimuth, elevation). Elevation is
// measured from zenith, so elevation 0 means boresight incidence with zero
// in-plane projection and an all-ones response. Each entry has unit modulus,
// hence the Euclidean norm is sqrt(M) for every direction.
//
// Element m: exp(j * 2*pi * (radius/lambda) * sin(el) * cos(az - psi_m))
//
// Throws std::invalid_argument for non-finite angles.
std::vector<std::complex<double>> steering_vector(const UcaGeometry &geometry,
                                                  double azimuth_rad, double elevation_rad);

// Same, writing the M entries into a caller-provided buffer (no allocation).
void steering_vector_into(const UcaGeometry &geometry, double azimuth_rad,
                          double elevation_rad, std::complex<double> *out);

// Wraps an angle into [0, 2*pi)
double wrap_angle(double angle_rad);

// Signed circular difference a - b wrapped into (-pi, pi]
double circular_difference(double a_rad, double b_rad);

constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

} // namespace a2g

#endif
