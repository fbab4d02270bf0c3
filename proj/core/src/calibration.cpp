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

#include "a2g/sage.hpp"
#include "a2g/geometry.hpp"

#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace a2g
{

namespace
{

double parabola_offset(double ym, double y0, double yp)
{
    const double denom = ym - 2.0 * y0 + yp;
    if (!(std::abs(denom) > 0.0))
        return 0.0;
    return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

} // namespace

CalibrationResult estimate_calibration(const ArrayCirSet &recording, int doppler_pad_factor)
{
    recording.validate();
    if (recording.num_antennas != 1)
        throw std::invalid_argument("estimate_calibration: recording must have a single channel");
    if (recording.num_snapshots < 2)
        throw std::invalid_argument("estimate_calibration: need at least 2 CIRs");
    if (doppler_pad_factor < 1)
        throw std::invalid_argument("estimate_calibration: doppler_pad_factor must be >= 1");

    const int n_count = recording.num_snapshots;
    const int t_count = recording.num_taps;

    // Delay: tap maximizing the time-summed power
    int peak_tap = 0;
    double peak_power = 0.0;
    double total_power = 0.0;
    for (int k = 0; k < t_count; ++k)
    {
        double acc = 0.0;
        for (int n = 0; n < n_count; ++n)
            acc += std::norm(recording.at(0, n, k));
        total_power += acc;
        if (acc > peak_power)
        {
            peak_power = acc;
            peak_tap = k;
        }
    }
    if (!(total_power > 0.0))
        throw std::invalid_argument("estimate_calibration: all-zero recording");

    // Doppler: zero-padded spectrum of the peak-tap time series, refined by
    // a 3-point parabola on the power spectrum
    const std::size_t bins = static_cast<std::size_t>(n_count) * doppler_pad_factor;
    std::vector<std::complex<double>> series(bins, {0.0, 0.0});
    for (int n = 0; n < n_count; ++n)
        series[static_cast<std::size_t>(n)] = recording.at(0, n, peak_tap);

    detail::Fft fft(bins);
    std::vector<std::complex<double>> spectrum(bins);
    fft.forward(series.data(), spectrum.data());

    std::size_t best_bin = 0;
    double best_mag = -1.0;
    for (std::size_t b = 0; b < bins; ++b)
    {
        const double mag = std::norm(spectrum[b]);
        if (mag > best_mag)
        {
            best_mag = mag;
            best_bin = b;
        }
    }
    const double ym = std::norm(spectrum[(best_bin + bins - 1) % bins]);
    const double yp = std::norm(spectrum[(best_bin + 1) % bins]);
    double bin = static_cast<double>(best_bin) + parabola_offset(ym, best_mag, yp);
    if (bin > static_cast<double>(bins) / 2.0)
        bin -= static_cast<double>(bins);
    const double doppler_hz = bin / (static_cast<double>(bins) * recording.snapshot_spacing_s);

    // Pulse: coherent combination at the estimated Doppler
    std::vector<std::complex<double>> taps(static_cast<std::size_t>(t_count), {0.0, 0.0});
    for (int n = 0; n < n_count; ++n)
    {
        const double phase = -two_pi * doppler_hz * recording.snapshot_time_s(n);
        const std::complex<double> w{std::cos(phase), std::sin(phase)};
        for (int k = 0; k < t_count; ++k)
            taps[static_cast<std::size_t>(k)] += w * recording.at(0, n, k);
    }

    // Shift the peak to the center tap (circular), then normalize power and
    // phase so the peak becomes exactly 1
    std::size_t raw_peak = 0;
    double raw_mag = -1.0;
    for (std::size_t k = 0; k < taps.size(); ++k)
    {
        const double mag = std::abs(taps[k]);
        if (mag > raw_mag)
        {
            raw_mag = mag;
            raw_peak = k;
        }
    }
    const int center = t_count / 2;
    const long rot = static_cast<long>(raw_peak) - center;
    if (rot > 0)
        std::rotate(taps.begin(), taps.begin() + rot, taps.end());
    else if (rot < 0)
        std::rotate(taps.begin(), taps.end() + rot, taps.end());

    CalibrationResult result;
    result.doppler_hz = doppler_hz;
    result.delay_s = peak_tap * recording.tap_spacing_s;
    result.shape = make_shape_from_taps(std::move(taps), recording.tap_spacing_s);
    return result;
}

} // namespace a2g
