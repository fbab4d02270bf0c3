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

#include "a2g/stats.hpp"
#include "a2g/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace a2g;

namespace
{

PathEstimate path_of(double power, double delay_s, double azimuth_deg)
{
    PathEstimate p;
    p.power = power;
    p.amplitude = std::sqrt(power);
    p.delay_s = delay_s;
    p.azimuth_rad = deg_to_rad(azimuth_deg);
    p.elevation_rad = pi / 2.0;
    return p;
}

ChannelEstimate estimate_of(std::vector<PathEstimate> paths)
{
    ChannelEstimate e;
    e.paths = std::move(paths);
    e.model_order = static_cast<int>(e.paths.size());
    return e;
}

ChannelEstimate random_estimate(Rng &rng, int min_paths = 1, int max_paths = 12)
{
    const int n = rng.uniform_int(min_paths, max_paths);
    std::vector<PathEstimate> paths;
    for (int i = 0; i < n; ++i)
        paths.push_back(path_of(rng.uniform(0.01, 3.0), rng.uniform(0.0, 8e-6),
                                rng.uniform(0.0, 360.0)));
    return estimate_of(std::move(paths));
}

Clustering random_partition(const ChannelEstimate &est, Rng &rng)
{
    const int n = static_cast<int>(est.paths.size());
    const int c_count = rng.uniform_int(1, std::max(1, n / 2));
    std::vector<int> membership(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        membership[static_cast<std::size_t>(i)] = i < c_count ? i : rng.uniform_int(0, c_count - 1);
    return clustering_from_membership(membership, est);
}

} // namespace

TEST_CASE("composite spreads: degenerate and analytic cases")
{
    // Single path: both spreads zero
    auto single = estimate_of({path_of(1.0, 2e-6, 123.0)});
    auto [ds1, as1] = composite_spreads(single);
    CHECK(ds1 == 0.0);
    CHECK(as1 == 0.0);

    // Two equal-power paths 100 ns apart, same azimuth: 50 ns, 0 degrees
    // (the azimuth spread only vanishes to rounding precision here)
    auto two = estimate_of({path_of(1.0, 1.0e-6, 45.0), path_of(1.0, 1.1e-6, 45.0)});
    auto [ds2, as2] = composite_spreads(two);
    CHECK(ds2 == doctest::Approx(50e-9).epsilon(1e-9));
    CHECK(as2 <= 1e-5);

    // Two equal-power paths at 0 and 120 degrees: sqrt(-2 ln cos 60) rad
    auto split = estimate_of({path_of(1.0, 1e-6, 0.0), path_of(1.0, 1e-6, 120.0)});
    auto [ds3, as3] = composite_spreads(split);
    const double expected_deg = std::sqrt(-2.0 * std::log(0.5)) * 180.0 / pi;
    CHECK(ds3 == doctest::Approx(0.0));
    CHECK(as3 == doctest::Approx(expected_deg).epsilon(1e-9));
    CHECK(as3 == doctest::Approx(67.46).epsilon(1e-3));

    CHECK_THROWS_AS(composite_spreads(estimate_of({})), std::invalid_argument);
}

TEST_CASE("composite spreads match the oracle on 200 random estimates")
{
    Rng rng(61);
    for (int i = 0; i < 200; ++i)
    {
        auto est = random_estimate(rng, 2, 15);
        std::vector<double> powers, delays, azimuths;
        for (const auto &p : est.paths)
        {
            powers.push_back(p.power);
            delays.push_back(p.delay_s);
            azimuths.push_back(p.azimuth_rad);
        }
        auto [ds, as] = composite_spreads(est);
        CHECK(ds == doctest::Approx(oracles::delay_spread(powers, delays)).epsilon(1e-12));
        CHECK(as == doctest::Approx(oracles::azimuth_spread_deg(powers, azimuths)).epsilon(1e-12));
    }
}

TEST_CASE("spread invariances: power rescale, azimuth rotation, delay shift")
{
    Rng rng(67);
    for (int i = 0; i < 1000; ++i)
    {
        auto est = random_estimate(rng, 2, 10);
        auto [ds, as] = composite_spreads(est);

        for (double scale : {10.0, 0.001})
        {
            auto scaled = est;
            for (auto &p : scaled.paths)
            {
                p.power *= scale;
                p.amplitude *= std::sqrt(scale);
            }
            auto [ds_s, as_s] = composite_spreads(scaled);
            CHECK(ds_s == doctest::Approx(ds).epsilon(1e-12));
            CHECK(as_s == doctest::Approx(as).epsilon(1e-12));
        }

        auto rotated = est;
        for (auto &p : rotated.paths)
            p.azimuth_rad = wrap_angle(p.azimuth_rad + deg_to_rad(137.0));
        auto [ds_r, as_r] = composite_spreads(rotated);
        CHECK(ds_r == doctest::Approx(ds).epsilon(1e-12));
        CHECK(as_r == doctest::Approx(as).epsilon(1e-9));

        auto shifted = est;
        for (auto &p : shifted.paths)
            p.delay_s += 3e-6;
        auto [ds_h, as_h] = composite_spreads(shifted);
        CHECK(ds_h == doctest::Approx(ds).epsilon(1e-9));
        CHECK(as_h == doctest::Approx(as).epsilon(1e-12));
    }
}

TEST_CASE("cluster-level stats: K, offsets and flags")
{
    // Three clusters with powers 10, 5, 5: K = 0 dB, power offsets 3.01 dB
    std::vector<PathEstimate> paths = {path_of(10.0, 1.0e-6, 10.0), path_of(5.0, 2.0e-6, 100.0),
                                       path_of(5.0, 3.0e-6, 250.0)};
    auto est = estimate_of(paths);
    auto clu = clustering_from_membership(std::vector<int>{0, 1, 2}, est);
    auto stats = cluster_level_stats(clu, est);

    CHECK(stats.cluster_count == 3);
    REQUIRE(stats.cluster_k_db.has_value());
    CHECK(*stats.cluster_k_db == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(stats.power_offsets_db.size() == 2);
    CHECK(stats.power_offsets_db[0] == doctest::Approx(3.0103).epsilon(1e-4));
    CHECK(stats.power_offsets_db[1] == doctest::Approx(3.0103).epsilon(1e-4));
    CHECK(stats.delay_offsets_s[0] == doctest::Approx(1.0e-6));
    CHECK(stats.delay_offsets_s[1] == doctest::Approx(2.0e-6));
    CHECK_FALSE(stats.single_path);
    CHECK_FALSE(stats.single_cluster);

    // Azimuth offset wraps: dominant at 350, other at 10 -> 20 degrees
    std::vector<PathEstimate> wrap = {path_of(2.0, 1e-6, 350.0), path_of(1.0, 2e-6, 10.0)};
    auto est2 = estimate_of(wrap);
    auto clu2 = clustering_from_membership(std::vector<int>{0, 1}, est2);
    auto stats2 = cluster_level_stats(clu2, est2);
    REQUIRE(stats2.azimuth_offsets_deg.size() == 1);
    CHECK(stats2.azimuth_offsets_deg[0] == doctest::Approx(20.0).epsilon(1e-9));

    // Single cluster: no K, empty offset lists, flag set
    auto est3 = estimate_of({path_of(1.0, 1e-6, 10.0), path_of(0.5, 1.1e-6, 12.0)});
    auto clu3 = clustering_from_membership(std::vector<int>{0, 0}, est3);
    auto stats3 = cluster_level_stats(clu3, est3);
    CHECK_FALSE(stats3.cluster_k_db.has_value());
    CHECK(stats3.delay_offsets_s.empty());
    CHECK(stats3.single_cluster);
    CHECK_FALSE(stats3.single_path);
}

TEST_CASE("partition mismatches are rejected")
{
    auto est = estimate_of({path_of(1.0, 1e-6, 10.0), path_of(0.5, 2e-6, 50.0)});
    Clustering clu = clustering_from_membership(std::vector<int>{0, 1}, est);

    Clustering missing = clu;
    missing.clusters.pop_back();
    CHECK_THROWS_AS(cluster_level_stats(missing, est), std::invalid_argument);

    Clustering duplicated = clu;
    duplicated.clusters[1].member_indices = {0};
    CHECK_THROWS_AS(cluster_level_stats(duplicated, est), std::invalid_argument);
}

TEST_CASE("K saturates instead of overflowing when the rest underflows")
{
    std::vector<PathEstimate> paths = {path_of(1.0, 1e-6, 10.0), path_of(1e-320, 2e-6, 100.0)};
    auto est = estimate_of(paths);
    auto clu = clustering_from_membership(std::vector<int>{0, 1}, est);
    auto stats = cluster_level_stats(clu, est);
    CHECK(stats.cluster_count == 2);
    const bool guarded = stats.k_saturated || (stats.cluster_k_db && std::isfinite(*stats.cluster_k_db));
    CHECK(guarded);
}

TEST_CASE("cluster powers always sum to the total path power")
{
    Rng rng(71);
    for (int i = 0; i < 1000; ++i)
    {
        auto est = random_estimate(rng, 1, 12);
        auto clu = random_partition(est, rng);

        double cluster_sum = 0.0;
        for (const auto &c : clu.clusters)
            cluster_sum += c.power;
        double path_sum = 0.0;
        for (const auto &p : est.paths)
            path_sum += p.power;
        CHECK(cluster_sum == doctest::Approx(path_sum).epsilon(1e-12));
    }
}

TEST_CASE("cluster-level stats match a direct re-computation on 200 random instances")
{
    Rng rng(73);
    for (int i = 0; i < 200; ++i)
    {
        auto est = random_estimate(rng, 2, 12);
        auto clu = random_partition(est, rng);
        auto stats = cluster_level_stats(clu, est);

        // Composite spreads against the oracle
        std::vector<double> powers, delays, azimuths;
        for (const auto &p : est.paths)
        {
            powers.push_back(p.power);
            delays.push_back(p.delay_s);
            azimuths.push_back(p.azimuth_rad);
        }
        CHECK(stats.composite_delay_spread_s ==
              doctest::Approx(oracles::delay_spread(powers, delays)).epsilon(1e-12));
        CHECK(stats.composite_azimuth_spread_deg ==
              doctest::Approx(oracles::azimuth_spread_deg(powers, azimuths)).epsilon(1e-12));

        // Per-cluster spreads and K against direct formulas
        REQUIRE(stats.cluster_sizes.size() == clu.clusters.size());
        double dominant = clu.clusters[0].power;
        double rest = 0.0;
        for (std::size_t c = 0; c < clu.clusters.size(); ++c)
        {
            std::vector<double> cp, cd, ca;
            for (int idx : clu.clusters[c].member_indices)
            {
                cp.push_back(est.paths[static_cast<std::size_t>(idx)].power);
                cd.push_back(est.paths[static_cast<std::size_t>(idx)].delay_s);
                ca.push_back(est.paths[static_cast<std::size_t>(idx)].azimuth_rad);
            }
            CHECK(stats.intra_delay_spread_s[c] ==
                  doctest::Approx(oracles::delay_spread(cp, cd)).epsilon(1e-12));
            CHECK(stats.intra_azimuth_spread_deg[c] ==
                  doctest::Approx(oracles::azimuth_spread_deg(cp, ca)).epsilon(1e-12));
            if (c > 0)
                rest += clu.clusters[c].power;
        }
        if (clu.clusters.size() >= 2)
        {
            REQUIRE(stats.cluster_k_db.has_value());
            CHECK(*stats.cluster_k_db ==
                  doctest::Approx(10.0 * std::log10(dominant / rest)).epsilon(1e-12));
        }
        for (double off : stats.power_offsets_db)
            CHECK(off >= -1e-12);
        for (double az : stats.azimuth_offsets_deg)
        {
            CHECK(az >= 0.0);
            CHECK(az <= 180.0 + 1e-12);
        }

        // K is invariant under a global power rescale
        if (stats.cluster_k_db)
        {
            auto scaled_est = est;
            for (auto &p : scaled_est.paths)
            {
                p.power *= 42.0;
                p.amplitude *= std::sqrt(42.0);
            }
            std::vector<int> membership(est.paths.size());
            for (std::size_t c = 0; c < clu.clusters.size(); ++c)
                for (int idx : clu.clusters[c].member_indices)
                    membership[static_cast<std::size_t>(idx)] = static_cast<int>(c);
            auto scaled_clu = clustering_from_membership(membership, scaled_est);
            auto scaled_stats = cluster_level_stats(scaled_clu, scaled_est);
            REQUIRE(scaled_stats.cluster_k_db.has_value());
            CHECK(*scaled_stats.cluster_k_db == doctest::Approx(*stats.cluster_k_db).epsilon(1e-12));
        }
    }
}

TEST_CASE("estimate_from_paths preserves parameters and sorts by power")
{
    std::vector<PathComponent> paths(2);
    paths[0].amplitude = {0.3, 0.0};
    paths[0].delay_s = 2e-6;
    paths[0].azimuth_rad = 1.0;
    paths[1].amplitude = {0.0, 0.9};
    paths[1].delay_s = 1e-6;
    paths[1].azimuth_rad = 2.0;

    auto est = estimate_from_paths(paths);
    REQUIRE(est.paths.size() == 2);
    CHECK(est.paths[0].delay_s == 1e-6); // the stronger one first
    CHECK(est.paths[0].power == doctest::Approx(0.81));
    CHECK(est.model_order == 2);
}
