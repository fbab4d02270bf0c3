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

#ifndef A2G_SAGE_HPP
#define A2G_SAGE_HPP

#include "a2g/cir.hpp"
#include "a2g/shape.hpp"

#include <complex>
#include <filesystem>
#include <vector>

namespace a2g
{

// One estimated path. The per-antenna amplitudes are fit independently per
// element (they absorb unknown per-antenna gains); the combined amplitude is
// the coherent projection onto the steering vector of the fitted direction.
struct PathEstimate
{
    std::complex<double> amplitude{0.0, 0.0};
    std::vector<std::complex<double>> per_antenna_amplitudes;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    double azimuth_rad = 0.0;
    double elevation_rad = 0.0;
    double power = 0.0; // |amplitude|^2
};

struct ConvergenceInfo
{
    int iterations = 0;
    double final_residual_power = 0.0;
    // Total residual power after initialization and after each full sweep;
    // non-increasing by construction.
    std::vector<double> residual_history;
};

// Result of estimating one ArrayCirSet: paths sorted by power descending,
// the estimated per-sample noise floor of the residual, and the selected
// model order (equal to paths.size()).
struct ChannelEstimate
{
    std::vector<PathEstimate> paths;
    double noise_floor = 0.0;
    int model_order = 0;
    ConvergenceInfo convergence;
};

struct SageConfig
{
    int max_paths = 30;                 // initial over-estimate of the path count
    double snr_keep_threshold_db = 6.0; // keep paths this far above the noise floor
    int max_iterations = 20;            // full refinement sweeps
    double convergence_tol = 1e-4;      // relative residual-power change
    int delay_grid_oversampling = 4;    // delay search grid, fraction of a tap
    double azimuth_grid_deg = 1.0;      // azimuth search step
    int doppler_pad_factor = 4;         // Doppler grid = N * pad FFT bins
};

void validate_sage_config(const SageConfig &cfg);

// Space-alternating estimation of multipath parameters with per-antenna
// amplitudes. Initialization by successive cancellation, per-path E-steps
// against the running residual, joint delay/Doppler grid search with
// 3-point quadratic refinement, angle extraction from the converged
// per-antenna amplitudes, and model-order selection by thresholding path
// powers against the estimated residual noise floor (with one re-run at the
// selected order).
//
// `residual_out`, when given, receives the final residual tensor
// (input minus all reconstructed paths).
//
// Throws std::invalid_argument when the shape tap spacing does not match the
// data or the set has no geometry. Returns an empty estimate with
// model_order 0 when no path rises above the noise floor.
ChannelEstimate sage_estimate(const ArrayCirSet &cirs, const ShapeFunction &shape,
                              const SageConfig &cfg = {}, ArrayCirSet *residual_out = nullptr);

// Averaged power delay profile of one antenna: s(k) = 1/N sum_n |h(m,n,k)|^2
std::vector<double> apdp(const ArrayCirSet &cirs, int antenna_index);

// Result of processing a direct-connection calibration recording: the
// oscillator-offset Doppler, the recording delay, and the recovered pulse
// (power/phase normalized, peak moved to the center tap).
struct CalibrationResult
{
    double doppler_hz = 0.0;
    double delay_s = 0.0;
    ShapeFunction shape;
};

// Estimates (doppler, delay, pulse) from a single-channel recording:
// delay from the time-summed tap power, Doppler from the zero-padded
// spectrum of the peak tap with quadratic refinement, pulse by coherent
// combination at the estimated Doppler. Requires num_antennas == 1 and at
// least 2 snapshots; throws std::invalid_argument on an all-zero recording.
CalibrationResult estimate_calibration(const ArrayCirSet &recording, int doppler_pad_factor = 4);

// ChannelEstimate serialization: CSV path table plus a JSON sidecar holding
// noise_floor, model_order and iteration count.
void save_estimate(const ChannelEstimate &estimate, const std::filesystem::path &csv_path,
                   const std::filesystem::path &sidecar_path);
ChannelEstimate load_estimate(const std::filesystem::path &csv_path,
                              const std::filesystem::path &sidecar_path);

} // namespace a2g

#endif
