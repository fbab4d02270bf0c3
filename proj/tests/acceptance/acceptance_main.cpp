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
//
// End-to-end verification suite. Each criterion prints one pass/fail line;
// the process exits non-zero if any criterion fails.

#include "a2g/clustering.hpp"
#include "a2g/geometry.hpp"
#include "a2g/sage.hpp"
#include "a2g/scenario.hpp"
#include "a2g/stats.hpp"
#include "a2g/summary.hpp"
#include "a2g/synthesis.hpp"

#include "support/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

using namespace a2g;
using Clock = std::chrono::steady_clock;

namespace
{

const UcaGeometry geometry;
const double tap = 1.0 / 18e6;

int hardware_jobs()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits `count` seeded trials across worker threads; bodies must touch only
// their own trial index.
void parallel_trials(int count, const std::function<void(int)> &body)
{
    const int jobs = std::min(hardware_jobs(), count);
    if (jobs <= 1)
    {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;)
        {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

PathComponent make_path(std::complex<double> amplitude, double delay_s, double azimuth_rad)
{
    PathComponent p;
    p.amplitude = amplitude;
    p.delay_s = delay_s;
    p.azimuth_rad = azimuth_rad;
    p.elevation_rad = pi / 2.0;
    p.doppler_hz = 0.0;
    return p;
}

// Draws delays with pairwise separation >= min_sep inside [lo, hi] and
// azimuths with pairwise circular separation >= min_az
std::vector<double> separated_draws(Rng &rng, int count, double lo, double hi, double min_sep)
{
    std::vector<double> values;
    while (static_cast<int>(values.size()) < count)
    {
        const double candidate = rng.uniform(lo, hi);
        bool ok = true;
        for (double v : values)
            ok = ok && std::abs(v - candidate) >= min_sep;
        if (ok)
            values.push_back(candidate);
    }
    return values;
}

std::vector<double> separated_azimuths(Rng &rng, int count, double min_sep_rad)
{
    std::vector<double> values;
    while (static_cast<int>(values.size()) < count)
    {
        const double candidate = rng.uniform(0.0, two_pi);
        bool ok = true;
        for (double v : values)
            ok = ok && std::abs(circular_difference(v, candidate)) >= min_sep_rad;
        if (ok)
            values.push_back(candidate);
    }
    return values;
}

// ---- criterion 1: three-path SAGE round trip ------------------------------

Outcome criterion_sage_roundtrip()
{
    const auto start = Clock::now();
    const ShapeFunction shape = make_default_shape(18e6, 200, tap);
    const CirDimensions dims{180, 200, 5e-4, 18e6};
    const int trials = 100;
    std::vector<char> success(trials, 0);

    parallel_trials(trials, [&](int trial) {
        Rng rng(10'000 + static_cast<std::uint64_t>(trial));
        const auto delays = separated_draws(rng, 3, 10 * tap, 150 * tap, 2.0 / 18e6);
        const auto azimuths = separated_azimuths(rng, 3, deg_to_rad(30.0));

        std::vector<PathComponent> truth;
        for (int i = 0; i < 3; ++i)
        {
            const double mag = std::pow(10.0, -rng.uniform(0.0, 6.0) / 20.0);
            truth.push_back(
                make_path(std::polar(mag, rng.uniform(0.0, two_pi)), delays[static_cast<std::size_t>(i)],
                          azimuths[static_cast<std::size_t>(i)]));
        }

        SynthesisConfig synth_cfg;
        synth_cfg.noise_power = 0.01; // 20 dB below the strongest path peak
        synth_cfg.rng_seed = 20'000 + static_cast<std::uint64_t>(trial);
        const auto cirs = synthesize_snapshot(truth, {}, geometry, shape, dims, synth_cfg);

        SageConfig cfg;
        cfg.max_paths = 8;
        const auto est = sage_estimate(cirs, shape, cfg);
        if (est.paths.size() < 3)
            return;

        const auto match = oracles::match_paths(est.paths, delays);
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
        {
            const int idx = match[static_cast<std::size_t>(i)];
            if (idx < 0)
            {
                ok = false;
                break;
            }
            const auto &e = est.paths[static_cast<std::size_t>(idx)];
            ok = ok && std::abs(e.delay_s - delays[static_cast<std::size_t>(i)]) <= 10e-9;
            ok = ok && std::abs(rad_to_deg(circular_difference(
                           e.azimuth_rad, azimuths[static_cast<std::size_t>(i)]))) <= 2.0;
            ok = ok && std::abs(10.0 * std::log10(
                           e.power / truth[static_cast<std::size_t>(i)].power())) <= 0.5;
        }
        success[static_cast<std::size_t>(trial)] = ok ? 1 : 0;
    });

    const int good = static_cast<int>(std::count(success.begin(), success.end(), 1));
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() /
        1000.0;
    std::ostringstream os;
    os << good << "/100 trials within |dtau|<=10ns, |dphi|<=2deg, |dP|<=0.5dB (need >=95), "
       << seconds << " s (budget 300)";
    return {good >= 95 && seconds <= 300.0, os.str()};
}

// ---- criterion 2: AIC model-order selection -------------------------------

Outcome criterion_model_order()
{
    const ShapeFunction shape = make_default_shape(18e6, 200, tap);
    const CirDimensions dims{120, 200, 5e-4, 18e6};
    const int trials = 100;
    std::vector<char> success(trials, 0);

    parallel_trials(trials, [&](int trial) {
        Rng rng(30'000 + static_cast<std::uint64_t>(trial));
        const int true_order = 1 + trial % 5;
        const auto delays =
            separated_draws(rng, true_order, 10 * tap, 150 * tap, 2.0 / 18e6);
        const auto azimuths = separated_azimuths(rng, true_order, deg_to_rad(30.0));

        std::vector<PathComponent> truth;
        double weakest = 1.0;
        for (int i = 0; i < true_order; ++i)
        {
            const double mag = std::pow(10.0, -rng.uniform(0.0, 6.0) / 20.0);
            weakest = std::min(weakest, mag * mag);
            truth.push_back(
                make_path(std::polar(mag, rng.uniform(0.0, two_pi)), delays[static_cast<std::size_t>(i)],
                          azimuths[static_cast<std::size_t>(i)]));
        }

        SynthesisConfig synth_cfg;
        synth_cfg.noise_power = weakest * std::pow(10.0, -1.5); // weakest path at 15 dB SNR
        synth_cfg.rng_seed = 40'000 + static_cast<std::uint64_t>(trial);
        const auto cirs = synthesize_snapshot(truth, {}, geometry, shape, dims, synth_cfg);

        SageConfig cfg;
        cfg.max_paths = 10;
        const auto est = sage_estimate(cirs, shape, cfg);
        success[static_cast<std::size_t>(trial)] = (est.model_order == true_order) ? 1 : 0;
    });

    const int good = static_cast<int>(std::count(success.begin(), success.end(), 1));
    std::ostringstream os;
    os << good << "/100 trials with exact model order, true L in 1..5 (need >=90)";
    return {good >= 90, os.str()};
}

// ---- criterion 3: calibration -----------------------------------------------

Outcome criterion_calibration()
{
    // Sub-Nyquist pulse on the acquisition grid: the windowed sinc spreads
    // over several taps, so the recovery test exercises real structure
    const ShapeFunction pulse = make_default_shape(12e6, 200, tap);
    const int trials = 50;
    std::vector<char> doppler_ok(trials, 0);
    std::vector<double> nmse_db(trials, 0.0);

    parallel_trials(trials, [&](int trial) {
        Rng rng(50'000 + static_cast<std::uint64_t>(trial));
        const auto rec =
            simulate_calibration_recording(-12.0, 30.0, pulse, 100 * tap, 400, rng, 5e-4);
        const auto result = estimate_calibration(rec);
        doppler_ok[static_cast<std::size_t>(trial)] =
            std::abs(result.doppler_hz - (-12.0)) <= 1.0 ? 1 : 0;

        double err = 0.0, ref = 0.0;
        for (int k = 0; k < pulse.num_taps(); ++k)
        {
            err += std::norm(result.shape.taps[static_cast<std::size_t>(k)] -
                             pulse.taps[static_cast<std::size_t>(k)]);
            ref += std::norm(pulse.taps[static_cast<std::size_t>(k)]);
        }
        nmse_db[static_cast<std::size_t>(trial)] = 10.0 * std::log10(err / ref);
    });

    const int good = static_cast<int>(std::count(doppler_ok.begin(), doppler_ok.end(), 1));
    const double worst_nmse = *std::max_element(nmse_db.begin(), nmse_db.end());
    std::ostringstream os;
    os << good << "/50 trials with |dnu| <= 1 Hz (need 50), worst pulse NMSE " << worst_nmse
       << " dB (need <= -30)";
    return {good == 50 && worst_nmse <= -30.0, os.str()};
}

// ---- criterion 4: clustering oracle ----------------------------------------

struct Planted
{
    ChannelEstimate estimate;
    std::vector<int> truth;
};

PathEstimate clustered_path(double power, double delay_s, double azimuth_rad)
{
    PathEstimate p;
    p.power = power;
    p.amplitude = std::sqrt(power);
    p.delay_s = delay_s;
    p.azimuth_rad = wrap_angle(azimuth_rad);
    p.elevation_rad = pi / 2.0;
    return p;
}

// Planted partition with intra-cluster MCD <= 0.1 and inter-centroid
// MCD >= 1.0 (delay ladder spaced tau_zeta; azimuths add variety)
Planted plant_partition(Rng &rng, const McdConfig &cfg, int clusters, int max_paths)
{
    Planted planted;
    int remaining = max_paths - clusters; // at least one path per cluster
    for (int c = 0; c < clusters; ++c)
    {
        const double centroid_delay = 1e-6 + c * cfg.tau_zeta_s * rng.uniform(1.05, 1.4);
        const double centroid_az = rng.uniform(0.0, two_pi);
        int extra = 0;
        if (remaining > 0)
        {
            extra = rng.uniform_int(1, std::min(5, remaining));
            remaining -= extra;
        }
        const int members = 1 + extra;
        for (int i = 0; i < members; ++i)
        {
            // Scatter within +-0.03 tau_zeta in delay and +-2.5 deg in azimuth:
            // intra MCD stays below 0.1
            const double delay = centroid_delay + cfg.tau_zeta_s * rng.uniform(-0.03, 0.03);
            const double az = centroid_az + deg_to_rad(rng.uniform(-2.5, 2.5));
            planted.estimate.paths.push_back(clustered_path(rng.uniform(0.2, 2.0), delay, az));
            planted.truth.push_back(c);
        }
    }
    planted.estimate.model_order = static_cast<int>(planted.estimate.paths.size());
    return planted;
}

std::vector<int> membership_of(const Clustering &clustering, std::size_t n)
{
    std::vector<int> m(n, -1);
    for (std::size_t c = 0; c < clustering.clusters.size(); ++c)
        for (int idx : clustering.clusters[c].member_indices)
            m[static_cast<std::size_t>(idx)] = static_cast<int>(c);
    return m;
}

Outcome criterion_clustering()
{
    McdConfig cfg;
    Rng rng(70'000);

    // Part A: optimal-threshold recovery of planted partitions
    int recovered = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial)
    {
        const int clusters = 2 + rng.uniform_int(0, 3);
        const auto planted = plant_partition(rng, cfg, clusters, 30);
        const auto best = select_optimal_clustering(planted.estimate, cfg);
        if (static_cast<int>(best.clusters.size()) == clusters &&
            oracles::same_partition(membership_of(best, planted.estimate.paths.size()),
                                    planted.truth))
            ++recovered;
    }

    // Part B: threshold clustering equals the connected-components oracle on
    // every instance with at most 12 paths
    int oracle_matches = 0;
    const int small_trials = 100;
    for (int trial = 0; trial < small_trials; ++trial)
    {
        const int clusters = 2 + rng.uniform_int(0, 2);
        const auto planted = plant_partition(rng, cfg, clusters, 12);
        const auto clu = cluster_with_threshold(planted.estimate, 0.3, cfg);

        const std::size_t n = planted.estimate.paths.size();
        std::vector<std::vector<double>> dist(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dist[i][j] = mcd(planted.estimate.paths[i], planted.estimate.paths[j], cfg);
        const auto oracle = oracles::connected_components(dist, 0.3);
        if (oracles::same_partition(membership_of(clu, n), oracle))
            ++oracle_matches;
    }

    std::ostringstream os;
    os << recovered << "/100 planted partitions recovered (need >=95), " << oracle_matches
       << "/100 threshold runs equal to the connected-components oracle (need 100)";
    return {recovered >= 95 && oracle_matches == small_trials, os.str()};
}

// ---- criterion 5: statistics oracle ----------------------------------------

Outcome criterion_statistics_oracle()
{
    Rng rng(90'000);
    double worst_rel = 0.0;

    for (int i = 0; i < 200; ++i)
    {
        const int n = rng.uniform_int(2, 15);
        std::vector<PathEstimate> paths;
        for (int k = 0; k < n; ++k)
            paths.push_back(clustered_path(rng.uniform(0.01, 3.0), rng.uniform(0.0, 8e-6),
                                           rng.uniform(0.0, two_pi)));
        ChannelEstimate est;
        est.paths = paths;
        est.model_order = n;

        std::vector<double> powers, delays, azimuths;
        for (const auto &p : paths)
        {
            powers.push_back(p.power);
            delays.push_back(p.delay_s);
            azimuths.push_back(p.azimuth_rad);
        }
        const auto [ds, as] = composite_spreads(est);
        const double ds_oracle = oracles::delay_spread(powers, delays);
        const double as_oracle = oracles::azimuth_spread_deg(powers, azimuths);
        worst_rel = std::max(worst_rel, std::abs(ds - ds_oracle) / std::max(ds_oracle, 1e-300));
        worst_rel = std::max(worst_rel, std::abs(as - as_oracle) / std::max(as_oracle, 1e-300));

        // Random partition: per-cluster spreads, K, offsets
        const int c_count = rng.uniform_int(1, std::max(1, n / 2));
        std::vector<int> membership(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            membership[static_cast<std::size_t>(k)] =
                k < c_count ? k : rng.uniform_int(0, c_count - 1);
        const auto clu = clustering_from_membership(membership, est);
        const auto stats = cluster_level_stats(clu, est);

        if (clu.clusters.size() >= 2)
        {
            double rest = 0.0;
            for (std::size_t c = 1; c < clu.clusters.size(); ++c)
                rest += clu.clusters[c].power;
            const double k_oracle = 10.0 * std::log10(clu.clusters[0].power / rest);
            worst_rel = std::max(worst_rel,
                                 std::abs(*stats.cluster_k_db - k_oracle) / std::abs(k_oracle));
        }
        for (std::size_t c = 0; c < clu.clusters.size(); ++c)
        {
            std::vector<double> cp, cd;
            for (int idx : clu.clusters[c].member_indices)
            {
                cp.push_back(est.paths[static_cast<std::size_t>(idx)].power);
                cd.push_back(est.paths[static_cast<std::size_t>(idx)].delay_s);
            }
            const double oracle_spread = oracles::delay_spread(cp, cd);
            worst_rel =
                std::max(worst_rel, std::abs(stats.intra_delay_spread_s[c] - oracle_spread) /
                                        std::max(oracle_spread, 1e-300));
        }

        // Ensemble moments against direct formulas
        if (i % 40 == 0)
        {
            std::vector<ChannelStats> records(20, stats);
            const auto row = ensemble_summary(records, "rural", 0);
            const auto &m = row.metrics.at("composite_delay_spread_log10_s");
            if (m.count > 0)
            {
                std::vector<double> values(static_cast<std::size_t>(m.count),
                                           std::log10(stats.composite_delay_spread_s));
                worst_rel = std::max(worst_rel, std::abs(m.mean - oracles::mean(values)) /
                                                    std::abs(oracles::mean(values)));
            }
        }
    }

    // Analytic anchors
    ChannelEstimate two;
    two.paths = {clustered_path(1.0, 1.0e-6, 0.5), clustered_path(1.0, 1.1e-6, 0.5)};
    two.model_order = 2;
    const auto [ds_two, as_two] = composite_spreads(two);
    const bool anchor_ds = std::abs(ds_two - 50e-9) <= 1e-9 * 50e-9 + 1e-18;
    (void)as_two;

    ChannelEstimate split;
    split.paths = {clustered_path(1.0, 1e-6, 0.0), clustered_path(1.0, 1e-6, deg_to_rad(120.0))};
    split.model_order = 2;
    const auto [ds_split, as_split] = composite_spreads(split);
    const double expected_deg = std::sqrt(-2.0 * std::log(0.5)) * 180.0 / pi;
    const bool anchor_as = std::abs(as_split - expected_deg) <= 1e-9 * expected_deg;
    (void)ds_split;

    std::ostringstream os;
    os << "worst relative error " << worst_rel << " (need <= 1e-12), analytic anchors "
       << (anchor_ds && anchor_as ? "exact" : "failed");
    return {worst_rel <= 1e-12 && anchor_ds && anchor_as, os.str()};
}

// ---- criterion 6: generator statistical closure ----------------------------

Outcome criterion_generator_closure()
{
    const auto &cfg = ScenarioStatsConfig::builtin();
    const int n = 1000;
    int single_cluster = 0;
    std::vector<double> log_spreads;

    for (int i = 0; i < n; ++i)
    {
        Rng rng(202'600 + static_cast<std::uint64_t>(i));
        const auto channel = draw_scenario_channel(cfg, "rural", 0, rng);
        if (channel.num_clusters == 1)
            ++single_cluster;

        const auto est = estimate_from_paths(channel.paths);
        if (est.paths.size() < 2)
            continue;
        const auto [ds, as] = composite_spreads(est);
        (void)as;
        if (ds > 0.0)
            log_spreads.push_back(std::log10(ds));
    }

    const double mean = oracles::mean(log_spreads);
    const double stddev = oracles::sample_std(log_spreads);
    const double fraction = static_cast<double>(single_cluster) / n;
    const double se = std::sqrt(0.84 * 0.16 / n);

    const bool mean_ok = std::abs(mean - (-7.24)) <= 0.05;
    const bool std_ok = std::abs(stddev - 0.51) <= 0.051;
    const bool ratio_ok = std::abs(fraction - 0.84) <= 3.0 * se;

    std::ostringstream os;
    os << "log10 DS mean " << mean << " (need -7.24 +- 0.05), std " << stddev
       << " (need 0.51 +- 10%), single-cluster fraction " << fraction << " (need 0.84 +- "
       << 3.0 * se << ")";
    return {mean_ok && std_ok && ratio_ok, os.str()};
}

// ---- criterion 7: invariant suite -------------------------------------------

Outcome criterion_invariants()
{
    const auto start = Clock::now();
    std::ostringstream os;
    bool all_ok = true;
    auto record = [&](const char *name, bool ok) {
        all_ok = all_ok && ok;
        if (!ok)
            os << " [" << name << " FAILED]";
    };

    // Steering norms over 1000 random directions
    {
        Rng rng(1);
        bool ok = true;
        for (int i = 0; i < 1000; ++i)
        {
            const auto a =
                steering_vector(geometry, rng.uniform(0.0, two_pi), rng.uniform(0.0, pi));
            double norm_sq = 0.0;
            for (const auto &v : a)
                norm_sq += std::norm(v);
            ok = ok && std::abs(std::sqrt(norm_sq) - 4.0) < 1e-12;
        }
        record("steering-norm", ok);
    }

    // Shape linearity over 1000 random offsets
    {
        Rng rng(2);
        const auto shape = make_default_shape(12e6, 64, tap);
        bool ok = true;
        for (int i = 0; i < 1000; ++i)
        {
            const double offset = rng.uniform(-20.0, 20.0) * tap;
            const std::complex<double> scale{rng.normal(), rng.normal()};
            ShapeFunction scaled = shape;
            for (auto &t : scaled.taps)
                t *= scale;
            const auto lhs = evaluate_shape(scaled, offset);
            const auto rhs = scale * evaluate_shape(shape, offset);
            ok = ok && std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
        }
        record("shape-linearity", ok);
    }

    const ShapeFunction shape = make_default_shape(18e6, 128, tap);
    const CirDimensions dims{30, 128, 5e-4, 18e6};

    // Superposition of noiseless synthesis
    {
        Rng rng(3);
        bool ok = true;
        for (int i = 0; i < 50; ++i)
        {
            std::vector<PathComponent> a, b, all;
            const int na = rng.uniform_int(1, 3), nb = rng.uniform_int(1, 3);
            for (int k = 0; k < na; ++k)
                a.push_back(make_path(std::polar(rng.uniform(0.2, 1.0), rng.uniform(0.0, two_pi)),
                                      rng.uniform(0.0, 100 * tap), rng.uniform(0.0, two_pi)));
            for (int k = 0; k < nb; ++k)
                b.push_back(make_path(std::polar(rng.uniform(0.2, 1.0), rng.uniform(0.0, two_pi)),
                                      rng.uniform(0.0, 100 * tap), rng.uniform(0.0, two_pi)));
            all = a;
            all.insert(all.end(), b.begin(), b.end());
            const auto sa = synthesize_snapshot(a, {}, geometry, shape, dims, {});
            const auto sb = synthesize_snapshot(b, {}, geometry, shape, dims, {});
            const auto sum = synthesize_snapshot(all, {}, geometry, shape, dims, {});
            double peak = 0.0, worst = 0.0;
            for (const auto &v : sum.data)
                peak = std::max(peak, std::abs(v));
            for (std::size_t s = 0; s < sum.data.size(); ++s)
                worst = std::max(worst, std::abs(sum.data[s] - (sa.data[s] + sb.data[s])));
            ok = ok && worst <= 1e-12 * peak;
        }
        record("superposition", ok);
    }

    // Determinism by seed (tensor equality)
    {
        std::vector<PathComponent> paths = {make_path({1.0, 0.0}, 20 * tap, 1.0)};
        SynthesisConfig scfg;
        scfg.noise_power = 1e-3;
        scfg.rng_seed = 77;
        const auto s1 = synthesize_snapshot(paths, {}, geometry, shape, dims, scfg);
        const auto s2 = synthesize_snapshot(paths, {}, geometry, shape, dims, scfg);
        record("seed-determinism", std::memcmp(s1.data.data(), s2.data.data(),
                                               s1.data.size() * sizeof(std::complex<double>)) == 0);
    }

    // SAGE residual monotonicity and phase invariance on a 3-path instance
    {
        std::vector<PathComponent> paths = {
            make_path({1.0, 0.0}, 20.3 * tap, deg_to_rad(40.0)),
            make_path({0.5, 0.5}, 35.8 * tap, deg_to_rad(170.0)),
            make_path({-0.3, 0.4}, 52.1 * tap, deg_to_rad(261.0)),
        };
        SynthesisConfig scfg;
        scfg.noise_power = 1e-4;
        scfg.rng_seed = 5;
        const auto cirs = synthesize_snapshot(paths, {}, geometry, shape, dims, scfg);
        SageConfig cfg;
        cfg.max_paths = 6;
        const auto est = sage_estimate(cirs, shape, cfg);
        bool monotone = est.convergence.residual_history.size() >= 2;
        for (std::size_t i = 1; i < est.convergence.residual_history.size(); ++i)
            monotone = monotone && est.convergence.residual_history[i] <=
                                       est.convergence.residual_history[i - 1] * (1.0 + 1e-9);
        record("sage-monotonicity", monotone);

        ArrayCirSet rotated = cirs;
        const std::complex<double> rot = std::polar(1.0, 1.234);
        for (auto &v : rotated.data)
            v *= rot;
        const auto spun = sage_estimate(rotated, shape, cfg);
        bool phase_ok = spun.model_order == est.model_order;
        for (std::size_t i = 0; phase_ok && i < est.paths.size(); ++i)
        {
            phase_ok = std::abs(est.paths[i].delay_s - spun.paths[i].delay_s) < 1e-12;
            phase_ok = phase_ok &&
                       std::abs(est.paths[i].azimuth_rad - spun.paths[i].azimuth_rad) < 1e-9;
            const auto expected = est.paths[i].amplitude * rot;
            phase_ok = phase_ok &&
                       std::abs(spun.paths[i].amplitude - expected) <= 1e-9 * std::abs(expected);
        }
        record("sage-phase-invariance", phase_ok);
    }

    // MCD metric properties over 1000 random triples
    {
        McdConfig cfg;
        Rng rng(6);
        bool ok = true;
        auto rand_path = [&] {
            return clustered_path(rng.uniform(0.1, 2.0), rng.uniform(0.0, 1e-5),
                                  rng.uniform(0.0, two_pi));
        };
        McdConfig angular_only = cfg;
        angular_only.tau_zeta_s = 1e6;
        for (int i = 0; i < 1000; ++i)
        {
            const auto a = rand_path(), b = rand_path(), c = rand_path();
            ok = ok && mcd(a, a, cfg) == 0.0;
            ok = ok && std::abs(mcd(a, b, cfg) - mcd(b, a, cfg)) < 1e-15;
            ok = ok && mcd(a, b, cfg) >= 0.0;
            ok = ok && mcd(a, c, angular_only) <=
                           mcd(a, b, angular_only) + mcd(b, c, angular_only) + 1e-12;
        }
        record("mcd-metric", ok);
    }

    // Partition completeness over 200 random clustering runs
    {
        McdConfig cfg;
        Rng rng(7);
        bool ok = true;
        for (int i = 0; i < 200; ++i)
        {
            const int n = rng.uniform_int(1, 25);
            ChannelEstimate est;
            for (int k = 0; k < n; ++k)
                est.paths.push_back(clustered_path(rng.uniform(0.01, 2.0), rng.uniform(0.0, 8e-6),
                                                   rng.uniform(0.0, two_pi)));
            est.model_order = n;
            const double eta = cfg.threshold_grid[static_cast<std::size_t>(rng.uniform_int(0, 11))];
            const auto clu = cluster_with_threshold(est, eta, cfg);
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            std::size_t covered = 0;
            for (const auto &cl : clu.clusters)
                for (int idx : cl.member_indices)
                {
                    if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)])
                    {
                        ok = false;
                        break;
                    }
                    seen[static_cast<std::size_t>(idx)] = 1;
                    ++covered;
                }
            ok = ok && covered == static_cast<std::size_t>(n);
        }
        record("partition-completeness", ok);
    }

    // Spread invariances over 1000 random channels
    {
        Rng rng(8);
        bool ok = true;
        for (int i = 0; i < 1000; ++i)
        {
            const int n = rng.uniform_int(2, 10);
            ChannelEstimate est;
            for (int k = 0; k < n; ++k)
                est.paths.push_back(clustered_path(rng.uniform(0.01, 2.0), rng.uniform(0.0, 8e-6),
                                                   rng.uniform(0.0, two_pi)));
            est.model_order = n;
            const auto [ds, as] = composite_spreads(est);

            ChannelEstimate mod = est;
            for (auto &p : mod.paths)
            {
                p.power *= 10.0;
                p.delay_s += 3e-6;
                p.azimuth_rad = wrap_angle(p.azimuth_rad + deg_to_rad(137.0));
            }
            const auto [ds2, as2] = composite_spreads(mod);
            ok = ok && std::abs(ds2 - ds) <= 1e-9 * std::max(ds, 1e-12);
            ok = ok && std::abs(as2 - as) <= 1e-9 * std::max(as, 1e-12);
        }
        record("spread-invariance", ok);
    }

    // Calibration Doppler accuracy, 50 seeds at SNR 30 dB
    {
        const auto pulse = make_default_shape(18e6, 128, tap);
        bool ok = true;
        for (std::uint64_t seed = 0; seed < 50; ++seed)
        {
            Rng rng(seed);
            const auto rec =
                simulate_calibration_recording(-12.0, 30.0, pulse, 64 * tap, 400, rng, 5e-4);
            const auto result = estimate_calibration(rec);
            ok = ok && std::abs(result.doppler_hz + 12.0) <= 1.0;
        }
        record("calibration-doppler", ok);
    }

    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() /
        1000.0;
    if (all_ok)
        os << "all invariant families hold, " << seconds << " s (budget 600)";
    return {all_ok && seconds <= 600.0, os.str()};
}

struct Criterion
{
    const char *name;
    Outcome (*run)();
};

} // namespace

int main(int argc, char **argv)
{
    const Criterion criteria[] = {
        {"1 SAGE round trip", criterion_sage_roundtrip},
        {"2 model-order selection", criterion_model_order},
        {"3 calibration", criterion_calibration},
        {"4 clustering oracle", criterion_clustering},
        {"5 statistics oracle", criterion_statistics_oracle},
        {"6 generator closure", criterion_generator_closure},
        {"7 invariant suite", criterion_invariants},
    };

    int failures = 0;
    for (const auto &criterion : criteria)
    {
        if (argc > 1 && std::string(argv[1]) != std::string(1, criterion.name[0]))
            continue;
        const auto start = Clock::now();
        const Outcome outcome = criterion.run();
        const double seconds =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() /
            1000.0;
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.name
                  << ": " << outcome.detail << " (" << seconds << " s)" << std::endl;
        if (!outcome.pass)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
