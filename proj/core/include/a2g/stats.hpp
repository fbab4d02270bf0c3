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

#ifndef A2G_STATS_HPP
#define A2G_STATS_HPP

#include "a2g/clustering.hpp"
#include "a2g/path.hpp"
#include "a2g/sage.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace a2g
{

// Composite and cluster-level statistics of one channel. Spreads are RMS
// (power-weighted); the azimuth spread uses the circular form
// sqrt(-2 ln |sum p exp(j phi) / sum p|), reported in degrees. Offsets are
// taken against the dominant (highest-power) cluster: signed delay
// differences, azimuth distances folded to [0, 180] degrees, and
// non-negative power ratios in dB.
struct ChannelStats
{
    double composite_delay_spread_s = 0.0;
    double composite_azimuth_spread_deg = 0.0;

    int cluster_count = 1;
    std::optional<double> cluster_k_db; // absent for single-cluster channels
    bool k_saturated = false;           // non-dominant power underflowed

    std::vector<int> cluster_sizes;                // per cluster, power-rank order
    std::vector<double> intra_delay_spread_s;      // per cluster
    std::vector<double> intra_azimuth_spread_deg;  // per cluster

    std::vector<double> delay_offsets_s;     // length cluster_count - 1
    std::vector<double> azimuth_offsets_deg; // folded to [0, 180]
    std::vector<double> power_offsets_db;    // >= 0

    bool single_path = false;
    bool single_cluster = false;
};

// RMS delay spread and circular azimuth spread over all paths of the
// estimate. Returns (seconds, degrees). Throws std::invalid_argument for an
// empty estimate.
std::pair<double, double> composite_spreads(const ChannelEstimate &estimate);

// Same spreads restricted to a member subset (used per cluster)
std::pair<double, double> subset_spreads(std::span<const PathEstimate> paths,
                                         std::span<const int> member_indices);

// Full per-channel statistics from a clustering of an estimate. Validates
// that the clustering partitions the estimate's paths exactly once.
ChannelStats cluster_level_stats(const Clustering &clustering, const ChannelEstimate &estimate);

// ChannelEstimate adapter for ground-truth path lists (each path keeps its
// amplitude/delay/angles; per-antenna amplitudes stay empty).
ChannelEstimate estimate_from_paths(std::span<const PathComponent> paths);

// JSON array round trip for batches of per-channel records
void save_channel_stats(std::span<const ChannelStats> stats, const std::filesystem::path &path);
std::vector<ChannelStats> load_channel_stats(const std::filesystem::path &path);

} // namespace a2g

#endif
