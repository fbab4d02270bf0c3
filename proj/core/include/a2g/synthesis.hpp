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

#ifndef A2G_SYNTHESIS_HPP
#define A2G_SYNTHESIS_HPP

#include "a2g/cir.hpp"
#include "a2g/path.hpp"
#include "a2g/rng.hpp"
#include "a2g/shape.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace a2g
{

// Per-antenna gain behaviour applied when no explicit gains are supplied:
// uniform (all ones), a log-normal magnitude ripple, or a directional
// blockage that attenuates the elements inside an azimuth arc.
struct GainModel
{
    enum class Kind
    {
        uniform,
        log_normal_ripple,
        blockage
    };

    Kind kind = Kind::uniform;
    double ripple_std_db = 0.0;    // log-normal-ripple
    double blockage_depth_db = 0.0; // blockage
    double blockage_arc_deg = 0.0;  // blockage, 0..360

    static GainModel uniform_model() { return {}; }
    static GainModel ripple(double std_db) { return {Kind::log_normal_ripple, std_db, 0.0, 0.0}; }
    static GainModel blocked(double depth_db, double arc_deg)
    {
        return {Kind::blockage, 0.0, depth_db, arc_deg};
    }
};

struct SynthesisConfig
{
    double noise_power = 0.0; // linear per-sample variance of the complex noise
    GainModel gain_model{};
    std::uint64_t rng_seed = 0;
};

void validate_synthesis_config(const SynthesisConfig &cfg);

// Time/delay grid of the tensor to synthesize. Tap spacing comes from the
// pulse shape; bandwidth is metadata carried along.
struct CirDimensions
{
    int num_snapshots = 180;
    int num_taps = 200;
    double snapshot_spacing_s = 5e-4;
    double bandwidth_hz = 18e6;
};

// One gain vector drawn per the model; applied to every path of a channel
// (the ripple and blockage describe the array hardware, not the paths).
PerAntennaGains draw_gain_vector(const GainModel &model, const UcaGeometry &geometry, Rng &rng);

// Synthesizes h(m, n, k) = sum_l alpha_l a_m(phi_l, theta_l) r_{l,m}
//                          u(tau_k - tau_l) exp(j 2 pi nu_l t_n) + noise.
// `gains` must be empty (uniform assumed) or hold one entry per path.
// Deterministic given cfg.rng_seed. Throws std::out_of_range when a path
// delay falls outside the tap window, std::invalid_argument on size
// mismatches.
ArrayCirSet synthesize_snapshot(std::span<const PathComponent> paths,
                                std::span<const PerAntennaGains> gains,
                                const UcaGeometry &geometry, const ShapeFunction &shape,
                                const CirDimensions &dims, const SynthesisConfig &cfg);

// Direct-connection recording used for pulse/Doppler calibration: a single
// channel whose CIRs repeat the pulse at a fixed delay with a frequency
// offset, h(t_n, tau_k) = u(tau_k - delay) exp(j 2 pi doppler t_n) + noise.
// SNR is measured against the pulse peak power; pass +infinity for a
// noiseless recording. Requires num_cirs >= 2.
ArrayCirSet simulate_calibration_recording(double doppler_hz, double snr_db,
                                           const ShapeFunction &shape, double delay_s,
                                           int num_cirs, Rng &rng,
                                           double snapshot_spacing_s = 5e-4);

} // namespace a2g

#endif
