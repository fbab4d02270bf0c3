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

#ifndef A2G_SCENARIO_HPP
#define A2G_SCENARIO_HPP

#include "a2g/path.hpp"
#include "a2g/rng.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace a2g
{

// (mean, second) pair of one tabulated metric. `second` is the standard
// deviation for every metric except the cluster delay offsets, whose second
// column is another location statistic in log10 seconds; sigma() resolves
// the spread to use for drawing in both cases.
struct StatPair
{
    double mean = 0.0;
    double second = 0.0;

    double sigma() const { return second; }
    double sigma_from_location() const { return std::abs(second - mean); }
};

// Distribution parameters of one (scenario, height) cell: ratios plus the
// per-metric (mean, std) pairs in the units of the summary table.
struct HeightStats
{
    double r1 = 0.0; // single-path channel ratio
    double r2 = 0.0; // single-cluster channel ratio
    double r3 = 0.0; // single-path cluster ratio

    StatPair composite_delay_spread_log10_s;
    StatPair composite_azimuth_spread_log10_deg;
    StatPair cluster_count;
    StatPair cluster_k_db;
    StatPair cluster_azimuth_spread_log10_deg;
    StatPair cluster_delay_spread_log10_s;
    StatPair cluster_delay_offset_log10_s; // second column is a location, not a std
    StatPair cluster_azimuth_offset_deg;
    StatPair cluster_power_offset_db;
};

// Per-height distribution parameters for the three measured scenarios.
// Acts as the generator configuration and mirrors the summary-table layout.
class ScenarioStatsConfig
{
  public:
    using Key = std::pair<std::string, int>; // (scenario, height_m)

    const HeightStats &at(const std::string &scenario, int height_m) const;
    bool contains(const std::string &scenario, int height_m) const;
    void set(const std::string &scenario, int height_m, const HeightStats &stats);

    const std::map<Key, HeightStats> &entries() const { return entries_; }

    // Validates ratio ranges and non-negative spreads (the delay-offset
    // second column is exempt: it is a location statistic)
    void validate() const;

    // The measured defaults: rural/urban/industrial at heights 0..40 m
    static const ScenarioStatsConfig &builtin();

    // JSON round trip, long format:
    //   {"entries": [{"scenario", "height_m", "metric", "mean", "std"}, ...]}
    // Ratios appear as metrics single_path_ratio / single_cluster_ratio /
    // single_path_cluster_ratio with the value in "mean".
    static ScenarioStatsConfig load(const std::filesystem::path &path);
    void save(const std::filesystem::path &path) const;

  private:
    std::map<Key, HeightStats> entries_;
};

// One synthetic channel: the path list plus the generating cluster structure
// (cluster index per path), which downstream closure checks use as ground
// truth without re-running cluster identification.
struct DrawnChannel
{
    std::vector<PathComponent> paths;
    std::vector<int> cluster_of_path;
    int num_clusters = 0;
};

// Draws one channel from the configured statistics:
//  - single-cluster with probability r2 (single-path with probability r1/r2
//    inside that branch), otherwise C >= 2 clusters;
//  - dominant cluster power 1, non-dominant powers from the power-offset
//    stats jointly rescaled to meet the drawn K exactly;
//  - centroids placed by delay/azimuth offset draws (random azimuth sign);
//  - intra-cluster delays one-sided exponential from the first arrival,
//    azimuths wrapped Gaussian, per-cluster path count 1 with probability r3
//    else uniform 2..10;
//  - channel delays rescaled about the power-weighted mean so the realized
//    composite delay spread equals a draw from the composite distribution
//    (azimuths are left untouched: rescaling is ill-defined on the circle);
//  - all Doppler 0.
// Throws std::out_of_range for an unknown (scenario, height) key.
DrawnChannel draw_scenario_channel(const ScenarioStatsConfig &cfg, const std::string &scenario,
                                   int height_m, Rng &rng);

} // namespace a2g

#endif
