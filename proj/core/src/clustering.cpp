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

#include "a2g/clustering.hpp"
#include "a2g/geometry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace a2g
{

std::vector<double> McdConfig::default_threshold_grid()
{
    std::vector<double> grid(12);
    const double lo = 0.05, hi = 0.6;
    for (int i = 0; i < 12; ++i)
        grid[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / 11.0);
    return grid;
}

void validate_mcd_config(const McdConfig &cfg)
{
    if (!(cfg.tau_zeta_s > 0.0))
        throw std::invalid_argument("McdConfig: tau_zeta_s must be positive");
    if (cfg.threshold_grid.empty())
        throw std::invalid_argument("McdConfig: threshold_grid must be non-empty");
    for (std::size_t i = 0; i < cfg.threshold_grid.size(); ++i)
    {
        if (!(cfg.threshold_grid[i] > 0.0))
            throw std::invalid_argument("McdConfig: thresholds must be positive");
        if (i > 0 && cfg.threshold_grid[i] <= cfg.threshold_grid[i - 1])
            throw std::invalid_argument("McdConfig: threshold_grid must be ascending");
    }
    if (cfg.max_sweep_iterations < 1)
        throw std::invalid_argument("McdConfig: max_sweep_iterations must be >= 1");
}

double mcd_params(double delay_a, double azimuth_a, double elevation_a, double delay_b,
                  double azimuth_b, double elevation_b, const McdConfig &cfg)
{
    const double theta_a = cfg.include_elevation ? elevation_a : pi / 2.0;
    const double theta_b = cfg.include_elevation ? elevation_b : pi / 2.0;

    const double ax = std::sin(theta_a) * std::cos(azimuth_a);
    const double ay = std::sin(theta_a) * std::sin(azimuth_a);
    const double az = std::cos(theta_a);
    const double bx = std::sin(theta_b) * std::cos(azimuth_b);
    const double by = std::sin(theta_b) * std::sin(azimuth_b);
    const double bz = std::cos(theta_b);

    const double angular =
        0.5 * std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by) + (az - bz) * (az - bz));
    const double delay = std::abs(delay_a - delay_b) / cfg.tau_zeta_s;
    return std::sqrt(angular * angular + delay * delay);
}

double mcd(const PathEstimate &a, const PathEstimate &b, const McdConfig &cfg)
{
    return mcd_params(a.delay_s, a.azimuth_rad, a.elevation_rad, b.delay_s, b.azimuth_rad,
                      b.elevation_rad, cfg);
}

std::pair<double, double> cluster_centroid(std::span<const PathEstimate> paths,
                                           std::span<const int> member_indices)
{
    if (member_indices.empty())
        throw std::invalid_argument("cluster_centroid: empty member set");

    double power = 0.0;
    double delay_acc = 0.0;
    std::complex<double> az_acc{0.0, 0.0};
    for (int idx : member_indices)
    {
        const auto &p = paths[static_cast<std::size_t>(idx)];
        power += p.power;
        delay_acc += p.power * p.delay_s;
        az_acc += p.power * std::complex<double>{std::cos(p.azimuth_rad), std::sin(p.azimuth_rad)};
    }
    if (!(power > 0.0))
        throw std::invalid_argument("cluster_centroid: members carry no power");
    return {delay_acc / power, wrap_angle(std::arg(az_acc))};
}

namespace
{

Cluster make_cluster(const std::vector<PathEstimate> &paths, std::vector<int> members)
{
    std::sort(members.begin(), members.end());
    Cluster c;
    auto centroid = cluster_centroid(paths, members);
    c.centroid_delay_s = centroid.first;
    c.centroid_azimuth_rad = centroid.second;
    c.power = 0.0;
    for (int idx : members)
        c.power += paths[static_cast<std::size_t>(idx)].power;
    c.member_indices = std::move(members);
    return c;
}

// Greedy seeding: strongest unassigned path becomes a centroid and absorbs
// all unassigned paths within the threshold of it.
void seed_clusters(const std::vector<PathEstimate> &paths, std::vector<char> &assigned,
                   std::vector<int> &cluster_of, int &next_cluster_id, double threshold,
                   const McdConfig &cfg)
{
    const int n = static_cast<int>(paths.size());
    for (;;)
    {
        int strongest = -1;
        double strongest_power = -1.0;
        for (int i = 0; i < n; ++i)
            if (!assigned[static_cast<std::size_t>(i)] &&
                paths[static_cast<std::size_t>(i)].power > strongest_power)
            {
                strongest_power = paths[static_cast<std::size_t>(i)].power;
                strongest = i;
            }
        if (strongest < 0)
            break;

        const int id = next_cluster_id++;
        for (int i = 0; i < n; ++i)
        {
            if (assigned[static_cast<std::size_t>(i)])
                continue;
            if (i == strongest ||
                mcd(paths[static_cast<std::size_t>(i)], paths[static_cast<std::size_t>(strongest)],
                    cfg) <= threshold)
            {
                assigned[static_cast<std::size_t>(i)] = 1;
                cluster_of[static_cast<std::size_t>(i)] = id;
            }
        }
    }
}

Clustering finalize(const ChannelEstimate &estimate, const std::vector<int> &cluster_of,
                    double threshold)
{
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < cluster_of.size(); ++i)
        groups[cluster_of[i]].push_back(static_cast<int>(i));

    Clustering result;
    result.threshold_used = threshold;
    for (auto &[id, members] : groups)
        result.clusters.push_back(make_cluster(estimate.paths, std::move(members)));
    std::sort(result.clusters.begin(), result.clusters.end(),
              [](const Cluster &a, const Cluster &b) { return a.power > b.power; });
    return result;
}

} // namespace

Clustering cluster_with_threshold(const ChannelEstimate &estimate, double threshold,
                                  const McdConfig &cfg)
{
    validate_mcd_config(cfg);
    if (estimate.paths.empty())
        throw std::invalid_argument("cluster_with_threshold: estimate has no paths");
    if (!(threshold > 0.0))
        throw std::invalid_argument("cluster_with_threshold: threshold must be positive");

    const auto &paths = estimate.paths;
    const int n = static_cast<int>(paths.size());

    std::vector<char> assigned(static_cast<std::size_t>(n), 0);
    std::vector<int> cluster_of(static_cast<std::size_t>(n), -1);
    int next_id = 0;
    seed_clusters(paths, assigned, cluster_of, next_id, threshold, cfg);

    // Refinement: recompute centroids, reassign each path to the nearest
    // centroid within the threshold (ties to the stronger cluster), re-seed
    // orphans, until the assignment stops changing.
    int sweeps_used = cfg.max_sweep_iterations;
    bool converged = false;
    for (int sweep = 0; sweep < cfg.max_sweep_iterations; ++sweep)
    {
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < n; ++i)
            groups[cluster_of[static_cast<std::size_t>(i)]].push_back(i);

        struct CentroidInfo
        {
            int id;
            double delay, azimuth, power;
        };
        std::vector<CentroidInfo> centroids;
        for (auto &[id, members] : groups)
        {
            auto c = cluster_centroid(paths, members);
            double p = 0.0;
            for (int idx : members)
                p += paths[static_cast<std::size_t>(idx)].power;
            centroids.push_back({id, c.first, c.second, p});
        }
        // Strongest first so that equidistant paths go to the stronger cluster
        std::sort(centroids.begin(), centroids.end(),
                  [](const CentroidInfo &a, const CentroidInfo &b) { return a.power > b.power; });

        std::vector<int> next_assignment(static_cast<std::size_t>(n), -1);
        std::vector<char> next_assigned(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i)
        {
            double best = std::numeric_limits<double>::infinity();
            int best_id = -1;
            for (const auto &c : centroids)
            {
                const double d =
                    mcd_params(paths[static_cast<std::size_t>(i)].delay_s,
                               paths[static_cast<std::size_t>(i)].azimuth_rad,
                               paths[static_cast<std::size_t>(i)].elevation_rad, c.delay, c.azimuth,
                               pi / 2.0, cfg);
                if (d <= threshold && d < best)
                {
                    best = d;
                    best_id = c.id;
                }
            }
            if (best_id >= 0)
            {
                next_assignment[static_cast<std::size_t>(i)] = best_id;
                next_assigned[static_cast<std::size_t>(i)] = 1;
            }
        }

        // Orphans restart the seeding pass
        seed_clusters(paths, next_assigned, next_assignment, next_id, threshold, cfg);

        if (next_assignment == cluster_of)
        {
            sweeps_used = sweep + 1;
            converged = true;
            break;
        }
        cluster_of = std::move(next_assignment);
    }

    Clustering result = finalize(estimate, cluster_of, threshold);
    result.refinement_sweeps = sweeps_used;
    result.converged = converged;
    return result;
}

std::pair<double, double> clustering_validity(const Clustering &clustering,
                                              const ChannelEstimate &estimate,
                                              const McdConfig &cfg)
{
    const auto &paths = estimate.paths;
    const int n = static_cast<int>(paths.size());
    const int c_count = static_cast<int>(clustering.clusters.size());

    if (c_count <= 1)
        return {0.0, std::numeric_limits<double>::infinity()};

    // Global power-weighted centroid
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        all[static_cast<std::size_t>(i)] = i;
    const auto global = cluster_centroid(paths, all);

    double between = 0.0;
    double within = 0.0;
    std::vector<double> scatter(static_cast<std::size_t>(c_count), 0.0); // power-weighted mean MCD
    for (int c = 0; c < c_count; ++c)
    {
        const auto &cl = clustering.clusters[static_cast<std::size_t>(c)];
        const double d_global = mcd_params(cl.centroid_delay_s, cl.centroid_azimuth_rad, pi / 2.0,
                                           global.first, global.second, pi / 2.0, cfg);
        between += cl.power * d_global * d_global;

        double s_acc = 0.0;
        for (int idx : cl.member_indices)
        {
            const auto &p = paths[static_cast<std::size_t>(idx)];
            const double d = mcd_params(p.delay_s, p.azimuth_rad, p.elevation_rad,
                                        cl.centroid_delay_s, cl.centroid_azimuth_rad, pi / 2.0, cfg);
            within += p.power * d * d;
            s_acc += p.power * d;
        }
        scatter[static_cast<std::size_t>(c)] = cl.power > 0.0 ? s_acc / cl.power : 0.0;
    }

    double ch;
    if (n == c_count)
        ch = 0.0; // every path its own cluster: no within-dispersion evidence
    else if (within > 0.0)
        ch = (between / within) * (static_cast<double>(n - c_count) / (c_count - 1));
    else
        ch = between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;

    double db = 0.0;
    for (int i = 0; i < c_count; ++i)
    {
        double worst = 0.0;
        for (int j = 0; j < c_count; ++j)
        {
            if (i == j)
                continue;
            const auto &ci = clustering.clusters[static_cast<std::size_t>(i)];
            const auto &cj = clustering.clusters[static_cast<std::size_t>(j)];
            const double d = mcd_params(ci.centroid_delay_s, ci.centroid_azimuth_rad, pi / 2.0,
                                        cj.centroid_delay_s, cj.centroid_azimuth_rad, pi / 2.0, cfg);
            const double ratio =
                d > 0.0 ? (scatter[static_cast<std::size_t>(i)] + scatter[static_cast<std::size_t>(j)]) / d
                        : std::numeric_limits<double>::infinity();
            worst = std::max(worst, ratio);
        }
        db += worst;
    }
    db /= c_count;

    return {ch, db};
}

Clustering select_optimal_clustering(const ChannelEstimate &estimate, const McdConfig &cfg)
{
    validate_mcd_config(cfg);
    if (estimate.paths.empty())
        throw std::invalid_argument("select_optimal_clustering: estimate has no paths");

    std::vector<Clustering> candidates;
    candidates.reserve(cfg.threshold_grid.size());
    for (double eta : cfg.threshold_grid)
    {
        Clustering candidate = cluster_with_threshold(estimate, eta, cfg);
        const auto [ch, db] = clustering_validity(candidate, estimate, cfg);
        candidate.ch_score = ch;
        candidate.db_score = db;
        candidates.push_back(std::move(candidate));
    }

    // CH and DB vote by rank over the structured candidates (CH > 0). CH
    // alone rewards shaving boundary paths off a cluster, DB alone is blind
    // to singleton fragments; their rank sum keeps both failure modes out.
    // Candidates without between/within evidence (single cluster, or every
    // path its own cluster) carry CH = 0 and stand only when no threshold
    // produces structure, in which case the partition is the same for every
    // threshold anyway and the first one is returned.
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].ch_score > 0.0)
            eligible.push_back(i);
    if (eligible.empty())
        return candidates.front();

    auto competition_rank = [&](auto strictly_better) {
        std::vector<int> rank(eligible.size(), 1);
        for (std::size_t a = 0; a < eligible.size(); ++a)
            for (std::size_t b = 0; b < eligible.size(); ++b)
                if (strictly_better(candidates[eligible[b]], candidates[eligible[a]]))
                    ++rank[a];
        return rank;
    };
    const auto ch_rank = competition_rank(
        [](const Clustering &x, const Clustering &y) { return x.ch_score > y.ch_score; });
    const auto db_rank = competition_rank(
        [](const Clustering &x, const Clustering &y) { return x.db_score < y.db_score; });

    std::size_t best = 0;
    int best_sum = ch_rank[0] + db_rank[0];
    for (std::size_t a = 1; a < eligible.size(); ++a)
    {
        const int sum = ch_rank[a] + db_rank[a];
        const bool better = sum < best_sum ||
                            (sum == best_sum && candidates[eligible[a]].db_score <
                                                    candidates[eligible[best]].db_score);
        if (better)
        {
            best = a;
            best_sum = sum;
        }
    }
    return candidates[eligible[best]];
}

Clustering clustering_from_membership(std::span<const int> cluster_of_path,
                                      const ChannelEstimate &estimate)
{
    if (cluster_of_path.size() != estimate.paths.size())
        throw std::invalid_argument("clustering_from_membership: membership size mismatch");
    if (estimate.paths.empty())
        throw std::invalid_argument("clustering_from_membership: estimate has no paths");

    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < cluster_of_path.size(); ++i)
        groups[cluster_of_path[i]].push_back(static_cast<int>(i));

    Clustering result;
    for (auto &[id, members] : groups)
        result.clusters.push_back(make_cluster(estimate.paths, std::move(members)));
    std::sort(result.clusters.begin(), result.clusters.end(),
              [](const Cluster &a, const Cluster &b) { return a.power > b.power; });
    return result;
}

void save_clustering(const Clustering &clustering, const std::filesystem::path &csv_path,
                     const std::filesystem::path &json_path)
{
    std::vector<int> cluster_of;
    std::size_t n = 0;
    for (const auto &c : clustering.clusters)
        for (int idx : c.member_indices)
            n = std::max(n, static_cast<std::size_t>(idx) + 1);
    cluster_of.assign(n, -1);
    for (std::size_t c = 0; c < clustering.clusters.size(); ++c)
        for (int idx : clustering.clusters[c].member_indices)
            cluster_of[static_cast<std::size_t>(idx)] = static_cast<int>(c);

    std::ofstream os(csv_path);
    if (!os)
        throw std::runtime_error("save_clustering: cannot open " + csv_path.string());
    os << "path_id,cluster_id\n";
    for (std::size_t i = 0; i < cluster_of.size(); ++i)
        os << i << ',' << cluster_of[i] << '\n';

    nlohmann::json j;
    j["threshold_used"] = clustering.threshold_used;
    j["ch_score"] = clustering.ch_score;
    j["db_score"] = std::isfinite(clustering.db_score) ? nlohmann::json(clustering.db_score)
                                                       : nlohmann::json(nullptr);
    auto &arr = j["clusters"];
    arr = nlohmann::json::array();
    for (const auto &c : clustering.clusters)
        arr.push_back({{"centroid_delay_s", c.centroid_delay_s},
                       {"centroid_azimuth_rad", c.centroid_azimuth_rad},
                       {"power", c.power},
                       {"size", c.member_indices.size()}});
    std::ofstream js(json_path);
    if (!js)
        throw std::runtime_error("save_clustering: cannot open " + json_path.string());
    js << j.dump(2) << '\n';
}

Clustering load_clustering(const std::filesystem::path &csv_path,
                           const std::filesystem::path &json_path)
{
    std::ifstream is(csv_path);
    if (!is)
        throw std::runtime_error("load_clustering: cannot open " + csv_path.string());

    std::string line;
    std::getline(is, line);
    std::map<int, std::vector<int>> groups;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string a, b;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        groups[std::stoi(b)].push_back(std::stoi(a));
    }

    std::ifstream js(json_path);
    if (!js)
        throw std::runtime_error("load_clustering: cannot open " + json_path.string());
    nlohmann::json j;
    js >> j;

    Clustering result;
    result.threshold_used = j.at("threshold_used").get<double>();
    result.ch_score = j.at("ch_score").get<double>();
    result.db_score = j.at("db_score").is_null() ? std::numeric_limits<double>::infinity()
                                                 : j["db_score"].get<double>();

    const auto &arr = j.at("clusters");
    // Cluster ids in the CSV are power-rank order, matching the JSON array
    for (std::size_t c = 0; c < arr.size(); ++c)
    {
        Cluster cl;
        cl.centroid_delay_s = arr[c].at("centroid_delay_s").get<double>();
        cl.centroid_azimuth_rad = arr[c].at("centroid_azimuth_rad").get<double>();
        cl.power = arr[c].at("power").get<double>();
        auto it = groups.find(static_cast<int>(c));
        if (it == groups.end())
            throw std::runtime_error("load_clustering: cluster missing from CSV membership");
        cl.member_indices = it->second;
        std::sort(cl.member_indices.begin(), cl.member_indices.end());
        result.clusters.push_back(std::move(cl));
    }
    if (groups.size() != arr.size())
        throw std::runtime_error("load_clustering: CSV/JSON cluster count mismatch");
    return result;
}

} // namespace a2g
