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

#ifndef A2G_CIR_HPP
#define A2G_CIR_HPP

#include "a2g/geometry.hpp"

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace a2g
{

// One set of array channel impulse responses h(m, t, tau): M antennas,
// N consecutive snapshots, T delay taps. Data is stored (m, n, k) row-major.
// The geometry is absent for single-channel recordings (e.g. the direct
// cable connection used for pulse calibration), where no array exists.
struct ArrayCirSet
{
    std::optional<UcaGeometry> geometry;

    int num_antennas = 16;
    int num_snapshots = 180;
    int num_taps = 200;

    double snapshot_spacing_s = 5e-4;
    double tap_spacing_s = 1.0 / 18e6;
    double bandwidth_hz = 18e6;

    std::vector<std::complex<double>> data;

    std::size_t index(int m, int n, int k) const
    {
        return (static_cast<std::size_t>(m) * num_snapshots + n) * num_taps + k;
    }
    std::complex<double> &at(int m, int n, int k) { return data[index(m, n, k)]; }
    const std::complex<double> &at(int m, int n, int k) const { return data[index(m, n, k)]; }

    double snapshot_time_s(int n) const { return n * snapshot_spacing_s; }
    double tap_delay_s(int k) const { return k * tap_spacing_s; }
    double delay_window_s() const { return (num_taps - 1) * tap_spacing_s; }

    // Allocates the data tensor (zero-filled) to match the dimensions
    void allocate() { data.assign(static_cast<std::size_t>(num_antennas) * num_snapshots * num_taps, {0.0, 0.0}); }

    // Checks dimension consistency, positivity of the timing metadata and
    // finiteness of every sample. Throws std::invalid_argument on violation.
    void validate() const;
};

// File container: a JSON descriptor next to a little-endian float64 binary
// of interleaved (re, im) samples in (m, n, k) row-major order. `shape_ref`
// records which pulse produced the data ("default" or a shape JSON path).
// The round trip is bit-exact.
void save_cir_set(const ArrayCirSet &cirs, const std::filesystem::path &json_path,
                  const std::string &shape_ref = "default");
ArrayCirSet load_cir_set(const std::filesystem::path &json_path);

// Shape reference recorded in a container (see save_cir_set)
std::string cir_set_shape_ref(const std::filesystem::path &json_path);

} // namespace a2g

#endif
