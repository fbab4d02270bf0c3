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
#include "a2g/log.hpp"

#include "fft.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace a2g
{

namespace
{

constexpr double elevation_grid_max_deg = 100.0; // zenith..just below horizon backside
constexpr double elevation_grid_step_deg = 5.0;  // UCA is elevation-insensitive, coarse grid

// Vertex offset of the parabola through (-1, ym), (0, y0), (+1, yp), clamped
// to half a step. Returns 0 for a degenerate (flat) triple.
double quadratic_peak_offset(double ym, double y0, double yp)
{
    const double denom = ym - 2.0 * y0 + yp;
    if (!(std::abs(denom) > 0.0))
        return 0.0;
    double off = 0.5 * (ym - yp) / denom;
    return std::clamp(off, -0.5, 0.5);
}

// Parameters and cached basis vectors of one path hypothesis inside the
// SAGE loop. The reconstruction of the path is the rank-1 tensor
// amps[m] * phasor[n] * pulse[k].
struct PathState
{
    bool active = false;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    std::vector<std::complex<double>> amps;   // per-antenna amplitudes, M
    std::vector<std::complex<double>> pulse;  // u(tau_k - delay), T
    std::vector<std::complex<double>> phasor; // exp(j 2 pi nu t_n), N
    double pulse_energy = 0.0;                // sum_k |pulse[k]|^2
    double explained = 0.0;                   // energy captured by this path
};

class SageWorkspace
{
  public:
    SageWorkspace(const ArrayCirSet &cirs, const ShapeFunction &shape, const SageConfig &cfg)
        : cirs_(cirs), shape_(shape), cfg_(cfg), m_count_(cirs.num_antennas),
          n_count_(cirs.num_snapshots), t_count_(cirs.num_taps),
          oversampling_(cfg.delay_grid_oversampling),
          corr_len_(next_pow2(2 * static_cast<std::size_t>(cirs.num_taps))),
          doppler_len_(std::max<std::size_t>(1, static_cast<std::size_t>(cirs.num_snapshots) *
                                                    cfg.doppler_pad_factor)),
          fft_corr_(corr_len_), fft_doppler_(doppler_len_)
    {
        build_polyphase_kernels();
        if (cirs_.geometry)
            build_steering_table();
    }

    // Runs initialization plus refinement sweeps for a fixed model order and
    // returns the per-path states; residual_ holds input minus all paths.
    std::vector<PathState> run(int num_paths, ConvergenceInfo &info)
    {
        residual_ = cirs_.data;
        const double input_power = tensor_power(residual_);

        std::vector<PathState> states(static_cast<std::size_t>(num_paths));
        for (auto &s : states)
        {
            s.amps.assign(static_cast<std::size_t>(m_count_), {0.0, 0.0});
            s.pulse.assign(static_cast<std::size_t>(t_count_), {0.0, 0.0});
            s.phasor.assign(static_cast<std::size_t>(n_count_), {0.0, 0.0});
        }

        info = ConvergenceInfo{};
        for (auto &s : states)
            update_path(s);
        double r_prev = tensor_power(residual_);
        info.residual_history.push_back(r_prev);

        for (int iter = 0; iter < cfg_.max_iterations; ++iter)
        {
            for (auto &s : states)
                update_path(s);
            const double r = tensor_power(residual_);
            info.residual_history.push_back(r);
            info.iterations = iter + 1;
            const bool vanished = r <= 1e-14 * input_power;
            const bool settled = std::abs(r_prev - r) <= cfg_.convergence_tol * r_prev;
            r_prev = r;
            if (vanished || settled)
                break;
        }
        info.final_residual_power = r_prev;
        return states;
    }

    // Per-sample noise variance from the quietest quarter of the delay taps
    // of the residual: median of the pooled sample powers, divided by ln 2
    // to undo the median bias of the exponential |noise|^2 distribution.
    double noise_floor() const
    {
        std::vector<std::pair<double, int>> tap_power(static_cast<std::size_t>(t_count_));
        for (int k = 0; k < t_count_; ++k)
        {
            double acc = 0.0;
            for (int m = 0; m < m_count_; ++m)
                for (int n = 0; n < n_count_; ++n)
                    acc += std::norm(residual_[cirs_.index(m, n, k)]);
            tap_power[static_cast<std::size_t>(k)] = {acc, k};
        }
        const int quiet_count = std::max(1, t_count_ / 4);
        std::partial_sort(tap_power.begin(), tap_power.begin() + quiet_count, tap_power.end());

        std::vector<double> pooled;
        pooled.reserve(static_cast<std::size_t>(quiet_count) * m_count_ * n_count_);
        for (int q = 0; q < quiet_count; ++q)
        {
            const int k = tap_power[static_cast<std::size_t>(q)].second;
            for (int m = 0; m < m_count_; ++m)
                for (int n = 0; n < n_count_; ++n)
                    pooled.push_back(std::norm(residual_[cirs_.index(m, n, k)]));
        }
        auto mid = pooled.begin() + static_cast<std::ptrdiff_t>(pooled.size() / 2);
        std::nth_element(pooled.begin(), mid, pooled.end());
        return *mid / std::log(2.0);
    }

    // Angle extraction from converged per-antenna amplitudes: (az, el)
    // maximizing |amps^T a*(az, el)| over the grid with quadratic azimuth
    // refinement, then alpha = amps^T a*(az, el) / M.
    void estimate_angles(PathEstimate &path) const
    {
        const int az_bins = static_cast<int>(std::lround(360.0 / cfg_.azimuth_grid_deg));
        const int el_bins = static_cast<int>(elevation_grid_max_deg / elevation_grid_step_deg) + 1;

        int best_az = 0, best_el = 0;
        double best_score = -1.0;
        std::vector<double> row(static_cast<std::size_t>(az_bins));
        std::vector<double> best_row(static_cast<std::size_t>(az_bins), 0.0);
        for (int e = 0; e < el_bins; ++e)
        {
            int row_best_az = 0;
            double row_best = -1.0;
            for (int a = 0; a < az_bins; ++a)
            {
                const std::complex<double> *steer =
                    &steering_table_[(static_cast<std::size_t>(e) * az_bins + a) * m_count_];
                std::complex<double> acc{0.0, 0.0};
                for (int m = 0; m < m_count_; ++m)
                    acc += path.per_antenna_amplitudes[static_cast<std::size_t>(m)] * std::conj(steer[m]);
                const double score = std::norm(acc);
                row[static_cast<std::size_t>(a)] = score;
                if (score > row_best)
                {
                    row_best = score;
                    row_best_az = a;
                }
            }
            if (row_best > best_score)
            {
                best_score = row_best;
                best_az = row_best_az;
                best_el = e;
                best_row = row;
            }
        }

        const double step_rad = deg_to_rad(cfg_.azimuth_grid_deg);
        const double ym = best_row[static_cast<std::size_t>((best_az + az_bins - 1) % az_bins)];
        const double y0 = best_row[static_cast<std::size_t>(best_az)];
        const double yp = best_row[static_cast<std::size_t>((best_az + 1) % az_bins)];
        const double azimuth =
            wrap_angle(best_az * step_rad + quadratic_peak_offset(ym, y0, yp) * step_rad);
        const double elevation = deg_to_rad(best_el * elevation_grid_step_deg);

        std::vector<std::complex<double>> steer(static_cast<std::size_t>(m_count_));
        steering_vector_into(*cirs_.geometry, azimuth, elevation, steer.data());
        std::complex<double> acc{0.0, 0.0};
        for (int m = 0; m < m_count_; ++m)
            acc += path.per_antenna_amplitudes[static_cast<std::size_t>(m)] *
                   std::conj(steer[static_cast<std::size_t>(m)]);

        path.azimuth_rad = azimuth;
        path.elevation_rad = elevation;
        path.amplitude = acc / static_cast<double>(m_count_);
        path.power = std::norm(path.amplitude);
    }

    void export_residual(ArrayCirSet &out) const
    {
        out = cirs_;
        out.data = residual_;
    }

  private:
    static std::size_t next_pow2(std::size_t v)
    {
        std::size_t p = 1;
        while (p < v)
            p <<= 1;
        return p;
    }

    static double tensor_power(const std::vector<std::complex<double>> &t)
    {
        double acc = 0.0;
        for (const auto &v : t)
            acc += std::norm(v);
        return acc;
    }

    // Shifted pulse samples for every sub-tap phase v/V, stored as conjugated
    // spectra for FFT-based cross-correlation over the oversampled delay grid.
    void build_polyphase_kernels()
    {
        kernel_spectra_.resize(static_cast<std::size_t>(oversampling_));
        std::vector<std::complex<double>> buffer(corr_len_);
        for (int v = 0; v < oversampling_; ++v)
        {
            std::fill(buffer.begin(), buffer.end(), std::complex<double>{0.0, 0.0});
            const double frac = static_cast<double>(v) / oversampling_;
            // kernel index j in [-(T-1), T-1], stored circularly
            for (int j = -(t_count_ - 1); j <= t_count_ - 1; ++j)
            {
                const std::complex<double> s =
                    evaluate_shape(shape_, (j - frac) * cirs_.tap_spacing_s);
                buffer[static_cast<std::size_t>((j + static_cast<int>(corr_len_)) %
                                                static_cast<int>(corr_len_))] = s;
            }
            auto &spec = kernel_spectra_[static_cast<std::size_t>(v)];
            spec.resize(corr_len_);
            fft_corr_.forward(buffer.data(), spec.data());
            for (auto &c : spec)
                c = std::conj(c);
        }
    }

    void build_steering_table()
    {
        const int az_bins = static_cast<int>(std::lround(360.0 / cfg_.azimuth_grid_deg));
        const int el_bins = static_cast<int>(elevation_grid_max_deg / elevation_grid_step_deg) + 1;
        steering_table_.resize(static_cast<std::size_t>(az_bins) * el_bins * m_count_);
        for (int e = 0; e < el_bins; ++e)
        {
            const double el = deg_to_rad(e * elevation_grid_step_deg);
            for (int a = 0; a < az_bins; ++a)
            {
                const double az = deg_to_rad(a * cfg_.azimuth_grid_deg);
                steering_vector_into(*cirs_.geometry, az, el,
                                     &steering_table_[(static_cast<std::size_t>(e) * az_bins + a) *
                                                      m_count_]);
            }
        }
    }

    void fill_phasor(double doppler_hz, std::vector<std::complex<double>> &out) const
    {
        out.resize(static_cast<std::size_t>(n_count_));
        for (int n = 0; n < n_count_; ++n)
        {
            const double phase = two_pi * doppler_hz * cirs_.snapshot_time_s(n);
            out[static_cast<std::size_t>(n)] = {std::cos(phase), std::sin(phase)};
        }
    }

    // G_m[k] = sum_n conj(ref_phasor[n]) x_m(n, k) for the hidden signal
    // x = residual + reconstruction of `self` (E-step expectation).
    void collapse_time(const PathState &self, const std::vector<std::complex<double>> &ref_phasor,
                       std::vector<std::complex<double>> &g) const
    {
        g.assign(static_cast<std::size_t>(m_count_) * t_count_, {0.0, 0.0});
        for (int m = 0; m < m_count_; ++m)
        {
            auto *gm = &g[static_cast<std::size_t>(m) * t_count_];
            for (int n = 0; n < n_count_; ++n)
            {
                const std::complex<double> w = std::conj(ref_phasor[static_cast<std::size_t>(n)]);
                const auto *row = &residual_[cirs_.index(m, n, 0)];
                for (int k = 0; k < t_count_; ++k)
                    gm[k] += w * row[k];
            }
        }
        if (self.active)
        {
            std::complex<double> overlap{0.0, 0.0};
            for (int n = 0; n < n_count_; ++n)
                overlap += std::conj(ref_phasor[static_cast<std::size_t>(n)]) *
                           self.phasor[static_cast<std::size_t>(n)];
            for (int m = 0; m < m_count_; ++m)
            {
                auto *gm = &g[static_cast<std::size_t>(m) * t_count_];
                const std::complex<double> c = self.amps[static_cast<std::size_t>(m)] * overlap;
                for (int k = 0; k < t_count_; ++k)
                    gm[k] += c * self.pulse[static_cast<std::size_t>(k)];
            }
        }
    }

    // Y_m[n] = sum_k conj(pulse[k]) x_m(n, k) for x = residual + self.
    void collapse_delay(const PathState &self, const std::vector<std::complex<double>> &pulse,
                        std::vector<std::complex<double>> &y) const
    {
        y.assign(static_cast<std::size_t>(m_count_) * n_count_, {0.0, 0.0});
        for (int m = 0; m < m_count_; ++m)
        {
            auto *ym = &y[static_cast<std::size_t>(m) * n_count_];
            for (int n = 0; n < n_count_; ++n)
            {
                const auto *row = &residual_[cirs_.index(m, n, 0)];
                std::complex<double> acc{0.0, 0.0};
                for (int k = 0; k < t_count_; ++k)
                    acc += std::conj(pulse[static_cast<std::size_t>(k)]) * row[k];
                ym[n] = acc;
            }
        }
        if (self.active)
        {
            std::complex<double> overlap{0.0, 0.0};
            for (int k = 0; k < t_count_; ++k)
                overlap += std::conj(pulse[static_cast<std::size_t>(k)]) *
                           self.pulse[static_cast<std::size_t>(k)];
            for (int m = 0; m < m_count_; ++m)
            {
                auto *ym = &y[static_cast<std::size_t>(m) * n_count_];
                const std::complex<double> c = self.amps[static_cast<std::size_t>(m)] * overlap;
                for (int n = 0; n < n_count_; ++n)
                    ym[n] += c * self.phasor[static_cast<std::size_t>(n)];
            }
        }
    }

    // Across-antenna incoherent objective on the oversampled delay grid,
    // computed by FFT cross-correlation with the polyphase kernels.
    // Returns the refined delay candidate.
    double search_delay(const std::vector<std::complex<double>> &g) const
    {
        const int grid_size = (t_count_ - 1) * oversampling_ + 1;
        objective_.assign(static_cast<std::size_t>(grid_size), 0.0);

        std::vector<std::complex<double>> padded(corr_len_, {0.0, 0.0});
        std::vector<std::complex<double>> spec(corr_len_);
        std::vector<std::complex<double>> corr(corr_len_);
        for (int m = 0; m < m_count_; ++m)
        {
            const auto *gm = &g[static_cast<std::size_t>(m) * t_count_];
            std::fill(padded.begin(), padded.end(), std::complex<double>{0.0, 0.0});
            std::copy(gm, gm + t_count_, padded.begin());
            fft_corr_.forward(padded.data(), spec.data());
            for (int v = 0; v < oversampling_; ++v)
            {
                const auto &kernel = kernel_spectra_[static_cast<std::size_t>(v)];
                for (std::size_t f = 0; f < corr_len_; ++f)
                    corr[f] = spec[f] * kernel[f];
                fft_corr_.inverse(corr.data(), padded.data());
                // objective index j = i * V + v <-> delay (i + v/V) * dt
                for (int i = 0; i * oversampling_ + v < grid_size && i < t_count_; ++i)
                    objective_[static_cast<std::size_t>(i * oversampling_ + v)] +=
                        std::norm(padded[static_cast<std::size_t>(i)]);
            }
        }
        // IFFT is unnormalized; the uniform 1/Lf^2 factor does not move the argmax.

        int best = 0;
        for (int j = 1; j < grid_size; ++j)
            if (objective_[static_cast<std::size_t>(j)] > objective_[static_cast<std::size_t>(best)])
                best = j;

        double refined = best;
        if (best > 0 && best < grid_size - 1)
            refined += quadratic_peak_offset(objective_[static_cast<std::size_t>(best - 1)],
                                             objective_[static_cast<std::size_t>(best)],
                                             objective_[static_cast<std::size_t>(best + 1)]);
        const double delay = refined * cirs_.tap_spacing_s / oversampling_;
        return std::clamp(delay, 0.0, cirs_.delay_window_s());
    }

    // Doppler objective over the zero-padded FFT grid; returns refined Hz.
    double search_doppler(const std::vector<std::complex<double>> &y) const
    {
        if (n_count_ < 2)
            return 0.0;
        const std::size_t bins = doppler_len_;
        doppler_objective_.assign(bins, 0.0);
        std::vector<std::complex<double>> padded(bins, {0.0, 0.0});
        std::vector<std::complex<double>> spec(bins);
        for (int m = 0; m < m_count_; ++m)
        {
            const auto *ym = &y[static_cast<std::size_t>(m) * n_count_];
            std::fill(padded.begin(), padded.end(), std::complex<double>{0.0, 0.0});
            std::copy(ym, ym + n_count_, padded.begin());
            fft_doppler_.forward(padded.data(), spec.data());
            for (std::size_t b = 0; b < bins; ++b)
                doppler_objective_[b] += std::norm(spec[b]);
        }

        std::size_t best = 0;
        for (std::size_t b = 1; b < bins; ++b)
            if (doppler_objective_[b] > doppler_objective_[best])
                best = b;

        const double ym_ = doppler_objective_[(best + bins - 1) % bins];
        const double y0 = doppler_objective_[best];
        const double yp = doppler_objective_[(best + 1) % bins];
        double bin = static_cast<double>(best) + quadratic_peak_offset(ym_, y0, yp);

        // Map FFT bin to signed frequency
        if (bin > static_cast<double>(bins) / 2.0)
            bin -= static_cast<double>(bins);
        return bin / (static_cast<double>(bins) * cirs_.snapshot_spacing_s);
    }

    // Explained energy (least-squares) of a (pulse, phasor) basis from the
    // delay-collapsed matched filter values.
    double explained_from_g(const std::vector<std::complex<double>> &g,
                            const std::vector<std::complex<double>> &pulse, double pulse_energy,
                            std::vector<std::complex<double>> &numerators) const
    {
        numerators.assign(static_cast<std::size_t>(m_count_), {0.0, 0.0});
        double acc = 0.0;
        for (int m = 0; m < m_count_; ++m)
        {
            const auto *gm = &g[static_cast<std::size_t>(m) * t_count_];
            std::complex<double> num{0.0, 0.0};
            for (int k = 0; k < t_count_; ++k)
                num += std::conj(pulse[static_cast<std::size_t>(k)]) * gm[k];
            numerators[static_cast<std::size_t>(m)] = num;
            acc += std::norm(num);
        }
        const double denom = static_cast<double>(n_count_) * pulse_energy;
        return denom > 0.0 ? acc / denom : 0.0;
    }

    double explained_from_y(const std::vector<std::complex<double>> &y,
                            const std::vector<std::complex<double>> &phasor, double pulse_energy,
                            std::vector<std::complex<double>> &numerators) const
    {
        numerators.assign(static_cast<std::size_t>(m_count_), {0.0, 0.0});
        double acc = 0.0;
        for (int m = 0; m < m_count_; ++m)
        {
            const auto *ym = &y[static_cast<std::size_t>(m) * n_count_];
            std::complex<double> num{0.0, 0.0};
            for (int n = 0; n < n_count_; ++n)
                num += std::conj(phasor[static_cast<std::size_t>(n)]) * ym[n];
            numerators[static_cast<std::size_t>(m)] = num;
            acc += std::norm(num);
        }
        const double denom = static_cast<double>(n_count_) * pulse_energy;
        return denom > 0.0 ? acc / denom : 0.0;
    }

    // Residual tap power profile (summed over antennas and snapshots)
    int residual_peak_tap() const
    {
        int best = 0;
        double best_power = -1.0;
        for (int k = 0; k < t_count_; ++k)
        {
            double acc = 0.0;
            for (int m = 0; m < m_count_; ++m)
                for (int n = 0; n < n_count_; ++n)
                    acc += std::norm(residual_[cirs_.index(m, n, k)]);
            if (acc > best_power)
            {
                best_power = acc;
                best = k;
            }
        }
        return best;
    }

    void apply_to_residual(const PathState &s, double sign)
    {
        for (int m = 0; m < m_count_; ++m)
        {
            const std::complex<double> am = sign * s.amps[static_cast<std::size_t>(m)];
            if (am == std::complex<double>{0.0, 0.0})
                continue;
            for (int n = 0; n < n_count_; ++n)
            {
                const std::complex<double> c = am * s.phasor[static_cast<std::size_t>(n)];
                auto *row = &residual_[cirs_.index(m, n, 0)];
                for (int k = 0; k < t_count_; ++k)
                    row[k] += c * s.pulse[static_cast<std::size_t>(k)];
            }
        }
    }

    // One coordinate update of a single path: E-step against the running
    // residual, delay search, Doppler search, per-antenna amplitudes. The
    // update is guarded: parameters only change when the freshly optimized
    // candidate explains at least as much energy as the previous ones, which
    // keys the monotone residual decrease.
    void update_path(PathState &s)
    {
        std::vector<std::complex<double>> ref_phasor;
        double nu_ref;
        if (s.active)
        {
            nu_ref = s.doppler_hz;
            ref_phasor = s.phasor;
        }
        else
        {
            // Seed a fresh path at the strongest residual tap, then estimate
            // its Doppler before the proper matched delay search.
            const int seed_tap = residual_peak_tap();
            std::vector<std::complex<double>> seed_pulse(static_cast<std::size_t>(t_count_));
            sample_shifted_shape(shape_, seed_tap * cirs_.tap_spacing_s, t_count_,
                                 seed_pulse.data());
            collapse_delay(s, seed_pulse, scratch_y_);
            nu_ref = search_doppler(scratch_y_);
            fill_phasor(nu_ref, ref_phasor);
        }

        collapse_time(s, ref_phasor, scratch_g_);
        const double delay_cand = search_delay(scratch_g_);

        std::vector<std::complex<double>> pulse_cand(static_cast<std::size_t>(t_count_));
        sample_shifted_shape(shape_, delay_cand, t_count_, pulse_cand.data());
        double energy_cand = 0.0;
        for (const auto &v : pulse_cand)
            energy_cand += std::norm(v);
        if (!(energy_cand > 0.0))
            return; // degenerate candidate (pulse fell outside the window)

        collapse_delay(s, pulse_cand, scratch_y_);
        const double nu_cand = search_doppler(scratch_y_);

        // Candidate A: (delay_cand, nu_cand)
        std::vector<std::complex<double>> phasor_cand;
        fill_phasor(nu_cand, phasor_cand);
        std::vector<std::complex<double>> num_a;
        const double explained_a = explained_from_y(scratch_y_, phasor_cand, energy_cand, num_a);

        // Candidate B: (delay_cand, nu_ref)
        std::vector<std::complex<double>> num_b;
        const double explained_b = explained_from_y(scratch_y_, ref_phasor, energy_cand, num_b);

        // Candidate C: previous parameters with re-optimized amplitudes
        double explained_c = -1.0;
        std::vector<std::complex<double>> num_c;
        if (s.active)
            explained_c = explained_from_g(scratch_g_, s.pulse, s.pulse_energy, num_c);

        if (s.active)
            apply_to_residual(s, +1.0); // put the old contribution back

        const double denom_a = static_cast<double>(n_count_) * energy_cand;
        if (explained_a >= explained_b && explained_a >= explained_c)
        {
            s.delay_s = delay_cand;
            s.doppler_hz = nu_cand;
            s.pulse = pulse_cand;
            s.phasor = std::move(phasor_cand);
            s.pulse_energy = energy_cand;
            for (int m = 0; m < m_count_; ++m)
                s.amps[static_cast<std::size_t>(m)] = num_a[static_cast<std::size_t>(m)] / denom_a;
            s.explained = explained_a;
        }
        else if (explained_b >= explained_c)
        {
            s.delay_s = delay_cand;
            s.doppler_hz = nu_ref;
            s.pulse = pulse_cand;
            s.phasor = ref_phasor;
            s.pulse_energy = energy_cand;
            for (int m = 0; m < m_count_; ++m)
                s.amps[static_cast<std::size_t>(m)] = num_b[static_cast<std::size_t>(m)] / denom_a;
            s.explained = explained_b;
        }
        else
        {
            const double denom_c = static_cast<double>(n_count_) * s.pulse_energy;
            for (int m = 0; m < m_count_; ++m)
                s.amps[static_cast<std::size_t>(m)] = num_c[static_cast<std::size_t>(m)] / denom_c;
            s.explained = explained_c;
        }
        s.active = true;
        apply_to_residual(s, -1.0);
    }

    const ArrayCirSet &cirs_;
    const ShapeFunction &shape_;
    SageConfig cfg_;
    int m_count_, n_count_, t_count_;
    int oversampling_;
    std::size_t corr_len_;
    std::size_t doppler_len_;
    detail::Fft fft_corr_;
    detail::Fft fft_doppler_;

    std::vector<std::complex<double>> residual_;
    std::vector<std::vector<std::complex<double>>> kernel_spectra_;
    std::vector<std::complex<double>> steering_table_;

    mutable std::vector<std::complex<double>> scratch_g_;
    mutable std::vector<std::complex<double>> scratch_y_;
    mutable std::vector<double> objective_;
    mutable std::vector<double> doppler_objective_;
};

std::vector<PathEstimate> states_to_estimates(const SageWorkspace &ws,
                                              std::vector<PathState> &&states)
{
    std::vector<PathEstimate> paths;
    paths.reserve(states.size());
    for (auto &s : states)
    {
        if (!s.active)
            continue;
        PathEstimate p;
        p.delay_s = s.delay_s;
        p.doppler_hz = s.doppler_hz;
        p.per_antenna_amplitudes = std::move(s.amps);
        ws.estimate_angles(p);
        paths.push_back(std::move(p));
    }
    std::sort(paths.begin(), paths.end(),
              [](const PathEstimate &a, const PathEstimate &b) { return a.power > b.power; });
    return paths;
}

} // namespace

void validate_sage_config(const SageConfig &cfg)
{
    if (cfg.max_paths < 1)
        throw std::invalid_argument("SageConfig: max_paths must be >= 1");
    if (cfg.snr_keep_threshold_db < 0.0)
        throw std::invalid_argument("SageConfig: snr_keep_threshold_db must be >= 0");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("SageConfig: max_iterations must be >= 1");
    if (!(cfg.convergence_tol > 0.0))
        throw std::invalid_argument("SageConfig: convergence_tol must be positive");
    if (cfg.delay_grid_oversampling < 1)
        throw std::invalid_argument("SageConfig: delay_grid_oversampling must be >= 1");
    if (!(cfg.azimuth_grid_deg > 0.0) || cfg.azimuth_grid_deg > 90.0)
        throw std::invalid_argument("SageConfig: azimuth_grid_deg must lie in (0, 90]");
    if (cfg.doppler_pad_factor < 1)
        throw std::invalid_argument("SageConfig: doppler_pad_factor must be >= 1");
}

ChannelEstimate sage_estimate(const ArrayCirSet &cirs, const ShapeFunction &shape,
                              const SageConfig &cfg, ArrayCirSet *residual_out)
{
    cirs.validate();
    validate_shape(shape);
    validate_sage_config(cfg);
    if (std::abs(shape.tap_spacing_s - cirs.tap_spacing_s) >
        1e-9 * std::max(shape.tap_spacing_s, cirs.tap_spacing_s))
        throw std::invalid_argument("sage_estimate: shape tap spacing does not match the data");
    if (!cirs.geometry)
        throw std::invalid_argument("sage_estimate: ArrayCirSet carries no array geometry");

    SageWorkspace ws(cirs, shape, cfg);

    ChannelEstimate est;
    auto states = ws.run(cfg.max_paths, est.convergence);
    est.noise_floor = ws.noise_floor();
    est.paths = states_to_estimates(ws, std::move(states));

    // Keep paths above the noise floor by the configured margin. A relative
    // dynamic-range floor of 120 dB guards against phantom paths fitted onto
    // rounding noise when the input is (near-)noiseless.
    const double strongest = est.paths.empty() ? 0.0 : est.paths.front().power;
    const double keep_threshold =
        std::max(est.noise_floor * std::pow(10.0, cfg.snr_keep_threshold_db / 10.0),
                 strongest * 1e-12);
    int keep = 0;
    for (const auto &p : est.paths)
        if (p.power > keep_threshold)
            ++keep;

    if (keep == 0)
    {
        log_info("sage_estimate: no path above the noise floor, returning empty estimate");
        est.paths.clear();
        est.model_order = 0;
        if (residual_out)
            ws.export_residual(*residual_out);
        return est;
    }

    if (keep < cfg.max_paths)
    {
        // Re-run at the selected model order for the final parameter set
        auto final_states = ws.run(keep, est.convergence);
        est.noise_floor = ws.noise_floor();
        est.paths = states_to_estimates(ws, std::move(final_states));
    }

    est.model_order = static_cast<int>(est.paths.size());
    if (residual_out)
        ws.export_residual(*residual_out);
    return est;
}

std::vector<double> apdp(const ArrayCirSet &cirs, int antenna_index)
{
    if (antenna_index < 0 || antenna_index >= cirs.num_antennas)
        throw std::out_of_range("apdp: antenna index out of range");
    std::vector<double> profile(static_cast<std::size_t>(cirs.num_taps), 0.0);
    for (int n = 0; n < cirs.num_snapshots; ++n)
        for (int k = 0; k < cirs.num_taps; ++k)
            profile[static_cast<std::size_t>(k)] += std::norm(cirs.at(antenna_index, n, k));
    for (auto &v : profile)
        v /= cirs.num_snapshots;
    return profile;
}

void save_estimate(const ChannelEstimate &estimate, const std::filesystem::path &csv_path,
                   const std::filesystem::path &sidecar_path)
{
    std::ofstream os(csv_path);
    if (!os)
        throw std::runtime_error("save_estimate: cannot open " + csv_path.string());
    os << "path_id,power_db,delay_s,azimuth_deg,elevation_deg,doppler_hz,re_alpha,im_alpha\n";
    os.precision(17);
    for (std::size_t i = 0; i < estimate.paths.size(); ++i)
    {
        const auto &p = estimate.paths[i];
        os << i << ',' << 10.0 * std::log10(p.power) << ',' << p.delay_s << ','
           << rad_to_deg(p.azimuth_rad) << ',' << rad_to_deg(p.elevation_rad) << ','
           << p.doppler_hz << ',' << p.amplitude.real() << ',' << p.amplitude.imag() << '\n';
    }

    nlohmann::json j;
    j["noise_floor"] = estimate.noise_floor;
    j["model_order"] = estimate.model_order;
    j["iterations"] = estimate.convergence.iterations;
    j["final_residual_power"] = estimate.convergence.final_residual_power;
    std::ofstream js(sidecar_path);
    if (!js)
        throw std::runtime_error("save_estimate: cannot open " + sidecar_path.string());
    js << j.dump(2) << '\n';
}

ChannelEstimate load_estimate(const std::filesystem::path &csv_path,
                              const std::filesystem::path &sidecar_path)
{
    std::ifstream is(csv_path);
    if (!is)
        throw std::runtime_error("load_estimate: cannot open " + csv_path.string());

    ChannelEstimate est;
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(ss, field, ','))
            values.push_back(std::stod(field));
        if (values.size() != 8)
            throw std::runtime_error("load_estimate: malformed row in " + csv_path.string());
        PathEstimate p;
        p.delay_s = values[2];
        p.azimuth_rad = deg_to_rad(values[3]);
        p.elevation_rad = deg_to_rad(values[4]);
        p.doppler_hz = values[5];
        p.amplitude = {values[6], values[7]};
        p.power = std::norm(p.amplitude);
        est.paths.push_back(std::move(p));
    }

    std::ifstream js(sidecar_path);
    if (!js)
        throw std::runtime_error("load_estimate: cannot open " + sidecar_path.string());
    nlohmann::json j;
    js >> j;
    est.noise_floor = j.at("noise_floor").get<double>();
    est.model_order = j.at("model_order").get<int>();
    est.convergence.iterations = j.at("iterations").get<int>();
    if (j.contains("final_residual_power"))
        est.convergence.final_residual_power = j["final_residual_power"].get<double>();
    return est;
}

} // namespace a2g
