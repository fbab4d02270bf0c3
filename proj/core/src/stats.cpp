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
#include "a2g/geometry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace a2g
{

namespace
{

std::pair<double, double> spreads_impl(std::span<const PathEstimate> paths,
                                       std::span<const int> members)
{
    if (members.size() == 1)
        return {0.0, 0.0}; // a lone path has no spread, exactly

    double power = 0.0;
    double mean = 0.0, mean_sq = 0.0;
    std::complex<double> resultant{0.0, 0.0};
    for (int idx : members)
    {
        const auto &p = paths[static_cast<std::size_t>(idx)];
        power += p.power;
        mean += p.power * p.delay_s;
        mean_sq += p.power * p.delay_s * p.delay_s;
        resultant += p.power * std::complex<double>{std::cos(p.azimuth_rad), std::sin(p.azimuth_rad)};
    }
    if (!(power > 0.0))
        throw std::invalid_argument("spreads: paths carry no power");

    mean /= power;
    mean_sq /= power;
    const double delay_spread = std::sqrt(std::max(0.0, mean_sq - mean * mean));

    // |R| can exceed 1 by rounding for a single path
    const double r = std::min(1.0, std::abs(resultant) / power);
    const double azimuth_spread_rad = std::sqrt(std::max(0.0, -2.0 * std::log(r)));
    return {delay_spread, rad_to_deg(azimuth_spread_rad)};
}

} // namespace

std::pair<double, double> composite_spreads(const ChannelEstimate &estimate)
{
    if (estimate.paths.empty())
        throw std::invalid_argument("composite_spreads: estimate has no paths");
    std::vector<int> all(estimate.paths.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = static_cast<int>(i);
    return spreads_impl(estimate.paths, all);
}

std::pair<double, double> subset_spreads(std::span<const PathEstimate> paths,
                                         std::span<const int> member_indices)
{
    if (member_indices.empty())
        throw std::invalid_argument("subset_spreads: empty member set");
    return spreads_impl(paths, member_indices);
}

ChannelStats cluster_level_stats(const Clustering &clustering, const ChannelEstimate &estimate)
{
    const std::size_t n = estimate.paths.size();
    if (n == 0)
        throw std::invalid_argument("cluster_level_stats: estimate has no paths");

    // The clustering must partition the path indices exactly once
    std::vector<char> seen(n, 0);
    std::size_t covered = 0;
    for (const auto &c : clustering.clusters)
    {
        if (c.member_indices.empty())
            throw std::invalid_argument("cluster_level_stats: empty cluster");
        for (int idx : c.member_indices)
        {
            if (idx < 0 || static_cast<std::size_t>(idx) >= n || seen[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("cluster_level_stats: clustering does not partition the paths");
            seen[static_cast<std::size_t>(idx)] = 1;
            ++covered;
        }
    }
    if (covered != n)
        throw std::invalid_argument("cluster_level_stats: clustering does not cover all paths");

    ChannelStats stats;
    auto [sigma_tau, sigma_phi] = composite_spreads(estimate);
    stats.composite_delay_spread_s = sigma_tau;
    stats.composite_azimuth_spread_deg = sigma_phi;

    const int c_count = static_cast<int>(clustering.clusters.size());
    stats.cluster_count = c_count;
    stats.single_path = (n == 1);
    stats.single_cluster = (c_count == 1);

    for (const auto &c : clustering.clusters)
    {
        stats.cluster_sizes.push_back(static_cast<int>(c.member_indices.size()));
        auto [intra_tau, intra_phi] = subset_spreads(estimate.paths, c.member_indices);
        stats.intra_delay_spread_s.push_back(intra_tau);
        stats.intra_azimuth_spread_deg.push_back(intra_phi);
    }

    if (c_count >= 2)
    {
        const auto &dominant = clustering.clusters.front();
        double other_power = 0.0;
        for (int c = 1; c < c_count; ++c)
        {
            const auto &cl = clustering.clusters[static_cast<std::size_t>(c)];
            other_power += cl.power;
            stats.delay_offsets_s.push_back(cl.centroid_delay_s - dominant.centroid_delay_s);
            stats.azimuth_offsets_deg.push_back(std::abs(rad_to_deg(
                circular_difference(cl.centroid_azimuth_rad, dominant.centroid_azimuth_rad))));
            stats.power_offsets_db.push_back(10.0 * std::log10(dominant.power / cl.power));
        }
        // Guard the K ratio against underflow of the non-dominant power sum
        if (other_power > 0.0 && std::isfinite(dominant.power / other_power))
            stats.cluster_k_db = 10.0 * std::log10(dominant.power / other_power);
        else
            stats.k_saturated = true;
    }

    return stats;
}

ChannelEstimate estimate_from_paths(std::span<const PathComponent> paths)
{
    ChannelEstimate est;
    est.paths.reserve(paths.size());
    for (const auto &p : paths)
    {
        PathEstimate e;
        e.amplitude = p.amplitude;
        e.delay_s = p.delay_s;
        e.azimuth_rad = p.azimuth_rad;
        e.elevation_rad = p.elevation_rad;
        e.doppler_hz = p.doppler_hz;
        e.power = std::norm(p.amplitude);
        est.paths.push_back(std::move(e));
    }
    std::stable_sort(est.paths.begin(), est.paths.end(),
                     [](const PathEstimate &a, const PathEstimate &b) { return a.power > b.power; });
    est.model_order = static_cast<int>(est.paths.size());
    return est;
}

namespace
{

nlohmann::json stats_to_json(const ChannelStats &s)
{
    nlohmann::json j;
    j["composite_delay_spread_s"] = s.composite_delay_spread_s;
    j["composite_azimuth_spread_deg"] = s.composite_azimuth_spread_deg;
    j["cluster_count"] = s.cluster_count;
    j["cluster_k_db"] = s.cluster_k_db ? nlohmann::json(*s.cluster_k_db) : nlohmann::json(nullptr);
    j["k_saturated"] = s.k_saturated;
    j["cluster_sizes"] = s.cluster_sizes;
    j["intra_delay_spread_s"] = s.intra_delay_spread_s;
    j["intra_azimuth_spread_deg"] = s.intra_azimuth_spread_deg;
    j["delay_offsets_s"] = s.delay_offsets_s;
    j["azimuth_offsets_deg"] = s.azimuth_offsets_deg;
    j["power_offsets_db"] = s.power_offsets_db;
    j["single_path"] = s.single_path;
    j["single_cluster"] = s.single_cluster;
    return j;
}

ChannelStats stats_from_json(const nlohmann::json &j)
{
    ChannelStats s;
    s.composite_delay_spread_s = j.at("composite_delay_spread_s").get<double>();
    s.composite_azimuth_spread_deg = j.at("composite_azimuth_spread_deg").get<double>();
    s.cluster_count = j.at("cluster_count").get<int>();
    if (!j.at("cluster_k_db").is_null())
        s.cluster_k_db = j["cluster_k_db"].get<double>();
    s.k_saturated = j.at("k_saturated").get<bool>();
    s.cluster_sizes = j.at("cluster_sizes").get<std::vector<int>>();
    s.intra_delay_spread_s = j.at("intra_delay_spread_s").get<std::vector<double>>();
    s.intra_azimuth_spread_deg = j.at("intra_azimuth_spread_deg").get<std::vector<double>>();
    s.delay_offsets_s = j.at("delay_offsets_s").get<std::vector<double>>();
    s.azimuth_offsets_deg = j.at("azimuth_offsets_deg").get<std::vector<double>>();
    s.power_offsets_db = j.at("power_offsets_db").get<std::vector<double>>();
    s.single_path = j.at("single_path").get<bool>();
    s.single_cluster = j.at("single_cluster").get<bool>();
    return s;
}

} // namespace

void save_channel_stats(std::span<const ChannelStats> stats, const std::filesystem::path &path)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &s : stats)
        arr.push_back(stats_to_json(s));
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_channel_stats: cannot open " + path.string());
    os << arr.dump(2) << '\n';
}

std::vector<ChannelStats> load_channel_stats(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("load_channel_stats: cannot open " + path.string());
    nlohmann::json arr;
    is >> arr;
    std::vector<ChannelStats> out;
    for (const auto &j : arr)
        out.push_back(stats_from_json(j));
    return out;
}

} // namespace a2g
