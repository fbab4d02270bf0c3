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

#ifndef A2G_SHAPE_HPP
#define A2G_SHAPE_HPP

#include <complex>
#include <filesystem>
#include <vector>

namespace a2g
{

// Effective delay-domain pulse of the acquisition system: bandwidth
// limitation plus hardware imperfections. Sampled on a regular tap grid with
// the peak magnitude normalized to 1. Off-grid values are obtained by
// band-limited interpolation of the taps (see evaluate_shape).
struct ShapeFunction
{
    std::vector<std::complex<double>> taps;
    double tap_spacing_s = 0.0;
    int peak_index = 0;
    double energy = 0.0; // sum |tap|^2 * tap_spacing_s

    int num_taps() const { return static_cast<int>(taps.size()); }
};

// Validates the ShapeFunction invariants (finite taps, positive energy, peak
// magnitude 1 within tolerance). Throws std::invalid_argument on violation.
void validate_shape(const ShapeFunction &shape);

// Builds the default pulse: a Hann-windowed sinc of the given bandwidth
// sampled on the tap grid, peak centered on the middle tap and normalized
// to 1. With tap_spacing == 1/bandwidth (Nyquist-rate taps) the sinc nulls
// fall on the grid, so the first null sits one tap from the peak.
//
// Requires bandwidth_hz > 0 and num_taps >= 8.
ShapeFunction make_default_shape(double bandwidth_hz, int num_taps, double tap_spacing_s);

// Wraps raw taps into a ShapeFunction: locates the strongest tap, normalizes
// power and phase so that the peak becomes exactly 1+0j, and computes the
// energy surrogate. Used for calibrated pulses recovered from recordings.
ShapeFunction make_shape_from_taps(std::vector<std::complex<double>> taps, double tap_spacing_s);

// Band-limited interpolation of the taps at the requested delay offset from
// the peak. Lands exactly on the stored tap when the offset hits the grid,
// returns 0 outside the tap-grid support. The interpolator is the periodic
// (Dirichlet) kernel, i.e. exactly what zero-padded spectral resampling of
// the taps produces.
std::complex<double> evaluate_shape(const ShapeFunction &shape, double delay_offset_s);

// Samples the pulse shifted by `delay_s` onto a tap grid of `num_taps` points
// (grid point k sits at k * tap_spacing). out[k] = u(k*spacing - delay_s).
// Equivalent to repeated evaluate_shape calls but amortizes the setup.
void sample_shifted_shape(const ShapeFunction &shape, double delay_s, int num_taps,
                          std::complex<double> *out);

// JSON (de)serialization of a pulse: {"tap_spacing_s", "peak_index", "taps": [[re, im], ...]}
void save_shape(const ShapeFunction &shape, const std::filesystem::path &path);
ShapeFunction load_shape(const std::filesystem::path &path);

} // namespace a2g

#endif
