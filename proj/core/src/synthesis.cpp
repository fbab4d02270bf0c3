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

#include "a2g/synthesis.hpp"

#include <cmath>
#include <stdexcept>

namespace a2g
{

void validate_synthesis_config(const SynthesisConfig &cfg)
{
    if (!(cfg.noise_power >= 0.0) || !std::isfinite(cfg.noise_power))
        throw std::invalid_argument("SynthesisConfig: noise_power must be >= 0");
    if (cfg.gain_model.kind == GainModel::Kind::log_normal_ripple && cfg.gain_model.ripple_std_db < 0.0)
        throw std::invalid_argument("SynthesisConfig: ripple_std_db must be >= 0");
    if (cfg.gain_model.kind == GainModel::Kind::blockage &&
        (cfg.gain_model.blockage_arc_deg < 0.0 || cfg.gain_model.blockage_arc_deg > 360.0))
        throw std::invalid_argument("SynthesisConfig: blockage_arc_deg must lie in [0, 360]");
}

PerAntennaGains draw_gain_vector(const GainModel &model, const UcaGeometry &geometry, Rng &rng)
{
    const int m_count = geometry.num_elements();
    PerAntennaGains g = uniform_gains(m_count);

    switch (model.kind)
    {
    case GainModel::Kind::uniform:
        break;
    case GainModel::Kind::log_normal_ripple:
        for (auto &v : g.gains)
            v = std::pow(10.0, rng.normal(0.0, model.ripple_std_db) / 20.0);
        break;
    case GainModel::Kind::blockage:
    {
        const double center = rng.uniform(0.0, two_pi);
        const double half_arc = 0.5 * model.blockage_arc_deg * pi / 180.0;
        const double depth = std::pow(10.0, -model.blockage_depth_db / 20.0);
        const auto &psi = geometry.element_azimuths_rad();
        for (int m = 0; m < m_count; ++m)
            if (std::abs(circular_difference(psi[static_cast<std::size_t>(m)], center)) <= half_arc)
                g.gains[static_cast<std::size_t>(m)] *= depth;
        break;
    }
    }
    return g;
}

ArrayCirSet synthesize_snapshot(std::span<const PathComponent> paths,
                                std::span<const PerAntennaGains> gains,
                                const UcaGeometry &geometry, const ShapeFunction &shape,
                                const CirDimensions &dims, const SynthesisConfig &cfg)
{
    validate_shape(shape);
    validate_synthesis_config(cfg);
    if (!gains.empty() && gains.size() != paths.size())
        throw std::invalid_argument("synthesize_snapshot: need one PerAntennaGains per path");
    if (dims.num_snapshots < 1 || dims.num_taps < 1)
        throw std::invalid_argument("synthesize_snapshot: dimensions must be positive");

    ArrayCirSet cirs;
    cirs.geometry = geometry;
    cirs.num_antennas = geometry.num_elements();
    cirs.num_snapshots = dims.num_snapshots;
    cirs.num_taps = dims.num_taps;
    cirs.snapshot_spacing_s = dims.snapshot_spacing_s;
    cirs.tap_spacing_s = shape.tap_spacing_s;
    cirs.bandwidth_hz = dims.bandwidth_hz;
    cirs.allocate();

    const int m_count = cirs.num_antennas;
    const int n_count = cirs.num_snapshots;
    const int t_count = cirs.num_taps;

    std::vector<std::complex<double>> steering(static_cast<std::size_t>(m_count));
    std::vector<std::complex<double>> pulse(static_cast<std::size_t>(t_count));
    std::vector<std::complex<double>> phasor(static_cast<std::size_t>(n_count));

    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        const PathComponent &p = paths[l];
        validate_path(p);
        if (p.delay_s > cirs.delay_window_s())
            throw std::out_of_range("synthesize_snapshot: path delay outside the tap window");
        if (!gains.empty())
            validate_gains(gains[l], m_count);

        steering_vector_into(geometry, p.azimuth_rad, p.elevation_rad, steering.data());
        sample_shifted_shape(shape, p.delay_s, t_count, pulse.data());
        for (int n = 0; n < n_count; ++n)
        {
            const double phase = two_pi * p.doppler_hz * cirs.snapshot_time_s(n);
            phasor[static_cast<std::size_t>(n)] = {std::cos(phase), std::sin(phase)};
        }

        for (int m = 0; m < m_count; ++m)
        {
            const std::complex<double> gain =
                gains.empty() ? std::complex<double>{1.0, 0.0} : gains[l].gains[static_cast<std::size_t>(m)];
            const std::complex<double> path_gain = p.amplitude * steering[static_cast<std::size_t>(m)] * gain;
            for (int n = 0; n < n_count; ++n)
            {
                const std::complex<double> c = path_gain * phasor[static_cast<std::size_t>(n)];
                auto *row = &cirs.data[cirs.index(m, n, 0)];
                for (int k = 0; k < t_count; ++k)
                    row[k] += c * pulse[static_cast<std::size_t>(k)];
            }
        }
    }

    if (cfg.noise_power > 0.0)
    {
        Rng rng(cfg.rng_seed);
        for (auto &v : cirs.data)
            v += rng.complex_normal(cfg.noise_power);
    }

    return cirs;
}

ArrayCirSet simulate_calibration_recording(double doppler_hz, double snr_db,
                                           const ShapeFunction &shape, double delay_s,
                                           int num_cirs, Rng &rng, double snapshot_spacing_s)
{
    validate_shape(shape);
    if (num_cirs < 2)
        throw std::invalid_argument("simulate_calibration_recording: num_cirs must be >= 2");
    if (!std::isfinite(delay_s) || delay_s < 0.0)
        throw std::invalid_argument("simulate_calibration_recording: delay_s must be >= 0");

    ArrayCirSet rec;
    rec.geometry.reset();
    rec.num_antennas = 1;
    rec.num_snapshots = num_cirs;
    rec.num_taps = shape.num_taps();
    rec.snapshot_spacing_s = snapshot_spacing_s;
    rec.tap_spacing_s = shape.tap_spacing_s;
    rec.bandwidth_hz = 1.0 / shape.tap_spacing_s;
    rec.allocate();

    std::vector<std::complex<double>> pulse(static_cast<std::size_t>(rec.num_taps));
    sample_shifted_shape(shape, delay_s, rec.num_taps, pulse.data());

    // Pulse peak power is 1 by normalization, so noise variance is 10^(-snr/10)
    const double noise_power = std::isinf(snr_db) ? 0.0 : std::pow(10.0, -snr_db / 10.0);

    for (int n = 0; n < num_cirs; ++n)
    {
        const double phase = two_pi * doppler_hz * rec.snapshot_time_s(n);
        const std::complex<double> rot{std::cos(phase), std::sin(phase)};
        auto *row = &rec.data[rec.index(0, n, 0)];
        for (int k = 0; k < rec.num_taps; ++k)
        {
            row[k] = rot * pulse[static_cast<std::size_t>(k)];
            if (noise_power > 0.0)
                row[k] += rng.complex_normal(noise_power);
        }
    }
    return rec;
}

} // namespace a2g
