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

#ifndef A2G_CLUSTERING_HPP
#define A2G_CLUSTERING_HPP

#include "a2g/sage.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace a2g
{

// Multipath-component-distance configuration. The delay scaling factor
// equates the angular distance of a 30 degree split with the delay distance
// of a 2 us split (2e-6 / sin(15 deg) = 7.727e-6), so intra-cluster spreads
// weigh similarly in both domains. Elevation is ignored by default: the UCA
// has low elevation sensitivity and arrival elevations are all similar.
struct McdConfig
{
    double tau_zeta_s = 7.727e-6;
    bool include_elevation = false;
    std::vector<double> threshold_grid = default_threshold_grid();
    int max_sweep_iterations = 50;

    // 12 candidates, geometric from 0.05 to 0.6
    static std::vector<double> default_threshold_grid();
};

void validate_mcd_config(const McdConfig &cfg);

// Joint delay/angle dissimilarity between two paths:
//   sqrt(MCD_angle^2 + (|dtau| / tau_zeta)^2)
// where MCD_angle is half the chord distance between the unit direction
// vectors (elevation forced to 90 degrees unless include_elevation).
double mcd(const PathEstimate &a, const PathEstimate &b, const McdConfig &cfg);

// Same metric between raw parameter tuples (used for centroids)
double mcd_params(double delay_a, double azimuth_a, double elevation_a, double delay_b,
                  double azimuth_b, double elevation_b, const McdConfig &cfg);

// Group of paths with similar delays and azimuths. The centroid is the
// power-weighted mean delay and the circular power-weighted mean azimuth.
struct Cluster
{
    std::vector<int> member_indices; // indices into ChannelEstimate.paths, ascending
    double centroid_delay_s = 0.0;
    double centroid_azimuth_rad = 0.0;
    double power = 0.0; // sum of member path powers
};

struct Clustering
{
    std::vector<Cluster> clusters; // power-descending
    double threshold_used = 0.0;
    double ch_score = 0.0;
    double db_score = 0.0;
    int refinement_sweeps = 0; // sweeps until the assignment stopped changing
    bool converged = true;     // false when max_sweep_iterations was exhausted
};

// Power-weighted centroid (mean delay, circular mean azimuth) of a member
// set. Throws std::invalid_argument on an empty set.
std::pair<double, double> cluster_centroid(std::span<const PathEstimate> paths,
                                           std::span<const int> member_indices);

// Threshold clustering at a fixed MCD threshold: seed clusters from the
// strongest unassigned path absorbing everything within the threshold, then
// iterate centroid updates and nearest-centroid reassignment (re-seeding
// orphans) to a fixed point. The result partitions all path indices.
Clustering cluster_with_threshold(const ChannelEstimate &estimate, double threshold,
                                  const McdConfig &cfg);

// Sweeps the threshold grid and keeps the candidate with the best joint
// validity: the power-weighted Calinski-Harabasz index (higher is better)
// and Davies-Bouldin criterion (lower is better) vote by rank, ties broken
// by the lower DB. Degenerate candidates (single cluster, or every path its
// own cluster) carry CH = 0 and win only when no threshold finds structure.
Clustering select_optimal_clustering(const ChannelEstimate &estimate, const McdConfig &cfg);

// Builds a Clustering from a known membership (one cluster id per path),
// e.g. generator ground truth. Ids may be arbitrary; clusters come out
// power-sorted with centroids computed.
Clustering clustering_from_membership(std::span<const int> cluster_of_path,
                                      const ChannelEstimate &estimate);

// Validity scores of an existing partition (power-weighted, MCD distances):
// returns {CH, DB}. CH is 0 for single-cluster or all-singleton partitions;
// DB is +inf for a single cluster.
std::pair<double, double> clustering_validity(const Clustering &clustering,
                                              const ChannelEstimate &estimate,
                                              const McdConfig &cfg);

// Serialization: CSV (path_id, cluster_id) plus JSON with per-cluster
// centroids, powers, the chosen threshold and the validity scores.
void save_clustering(const Clustering &clustering, const std::filesystem::path &csv_path,
                     const std::filesystem::path &json_path);
Clustering load_clustering(const std::filesystem::path &csv_path,
                           const std::filesystem::path &json_path);

} // namespace a2g

#endif
