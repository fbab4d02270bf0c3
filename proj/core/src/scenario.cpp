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

#include "a2g/scenario.hpp"
#include "a2g/geometry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace a2g
{

namespace
{

// Delay budget of the generator. The default acquisition window is ~11 us
// (200 taps at 18 MHz); the base delay anchors the first arrival and the cap
// keeps rare heavy-tailed draws inside the window.
constexpr double base_delay_s = 1.0e-6;
constexpr double max_delay_s = 10.8e-6;

struct TableRow
{
    const char *scenario;
    int height_m;
    double r1, r2, r3;
    double cds_m, cds_s; // composite delay spread [log10 s]
    double cas_m, cas_s; // composite azimuth spread [log10 deg]
    double cn_m, cn_s;   // cluster number
    double k_m, k_s;     // cluster K [dB]
    double as_m, as_s;   // cluster azimuth spread [log10 deg]
    double ds_m, ds_s;   // cluster delay spread [log10 s]
    double do_m, do_s;   // cluster delay offset [log10 s] (second col: location)
    double ao_m, ao_s;   // cluster azimuth offset [deg]
    double po_m, po_s;   // cluster power offset [dB]
};

// Measured per-height statistics of the three scenarios
const TableRow builtin_rows[] = {
    {"rural", 0, 0.45, 0.84, 0.57, -7.24, 0.51, -1.0, 2.9, 2.3, 0.5, 9.0, 8.4, -2.1, 2.7, -7.38, 0.24, -5.90, -5.73, 103, 46, 8.4, 7.1},
    {"rural", 5, 0.46, 0.90, 0.54, -7.23, 0.64, -1.6, 3.1, 2.5, 0.5, 8.4, 3.3, -2.3, 3.0, -7.47, 0.23, -5.49, -5.60, 91, 25, 9.6, 2.8},
    {"rural", 10, 0.48, 0.95, 0.53, -7.33, 0.31, -2.9, 3.1, 2.2, 0.4, 16.5, 1.1, -3.2, 2.9, -7.40, 0.18, -5.63, -5.67, 91, 35, 17.2, 1.1},
    {"rural", 15, 0.43, 0.93, 0.51, -7.43, 0.23, -2.6, 3.2, 2.0, 0.0, 17.3, 2.6, -3.4, 3.0, -7.37, 0.10, -6.67, -6.61, 132, 25, 17.3, 2.6},
    {"rural", 20, 0.58, 0.97, 0.62, -7.40, 0.18, -3.6, 3.0, 2.2, 0.4, 13.9, 1.9, -3.9, 2.9, -7.38, 0.14, -6.80, -6.68, 154, 34, 15.1, 3.0},
    {"rural", 25, 0.52, 0.97, 0.56, -7.39, 0.21, -2.7, 3.1, 2.0, 0.0, 16.2, 4.0, -3.0, 3.0, -7.36, 0.15, -6.82, -6.69, 121, 60, 16.2, 4.0},
    {"rural", 30, 0.68, 0.98, 0.71, -7.44, 0.23, -3.3, 3.0, 2.0, 0.0, 17.7, 1.7, -3.5, 2.9, -7.39, 0.17, -7.20, -8.33, 139, 20, 17.7, 1.7},
    {"rural", 35, 0.69, 0.98, 0.71, -7.35, 0.26, -4.1, 2.9, 2.0, 0.0, 9.1, 6.4, -4.5, 2.6, -7.39, 0.13, -5.92, -5.81, 103, 25, 9.1, 6.4},
    {"rural", 40, 0.64, 0.98, 0.65, -7.37, 0.15, -3.3, 3.1, 2.1, 0.4, 15.1, 5.4, -3.4, 2.9, -7.39, 0.09, -6.27, -6.96, 125, 22, 16.2, 5.7},
    {"urban", 0, 0.17, 0.36, 0.59, -7.12, 0.36, 1.1, 1.8, 2.7, 1.1, 6.5, 5.1, -1.6, 3.0, -7.20, 0.31, -6.60, -6.59, 119, 49, 9.1, 5.3},
    {"urban", 5, 0.26, 0.59, 0.60, -7.10, 0.43, 0.6, 2.2, 2.7, 1.2, 6.8, 5.8, -1.3, 2.8, -7.18, 0.28, -6.49, -6.47, 112, 51, 8.7, 5.3},
    {"urban", 10, 0.38, 0.62, 0.68, -7.16, 0.44, 0.1, 2.7, 2.4, 0.8, 8.6, 6.4, -2.1, 3.1, -7.24, 0.29, -6.41, -6.28, 114, 52, 9.3, 5.8},
    {"urban", 15, 0.48, 0.64, 0.69, -7.29, 0.37, -1.0, 3.1, 2.2, 0.5, 11.0, 5.5, -2.9, 3.0, -7.33, 0.21, -6.43, -6.34, 110, 53, 11.8, 5.5},
    {"urban", 20, 0.55, 0.60, 0.71, -7.24, 0.43, -1.1, 3.2, 2.2, 0.5, 10.7, 5.3, -2.8, 3.1, -7.32, 0.21, -6.33, -6.25, 100, 53, 11.2, 5.0},
    {"urban", 25, 0.57, 0.60, 0.73, -7.20, 0.42, -1.1, 3.1, 2.4, 0.7, 9.7, 6.1, -2.7, 3.1, -7.32, 0.22, -6.27, -6.19, 96, 55, 10.6, 5.8},
    {"urban", 30, 0.62, 0.60, 0.74, -7.18, 0.83, -1.2, 3.2, 2.3, 0.6, 8.7, 5.2, -2.6, 3.2, -7.36, 0.82, -6.23, -6.24, 104, 54, 9.8, 5.0},
    {"urban", 35, 0.62, 0.62, 0.73, -7.20, 0.44, -1.6, 3.3, 2.3, 0.7, 10.8, 4.8, -2.9, 3.2, -7.35, 0.27, -6.23, -6.25, 103, 55, 11.6, 4.3},
    {"urban", 40, 0.64, 0.75, 0.73, -7.21, 0.37, -1.7, 3.3, 2.3, 0.8, 9.7, 5.0, -2.6, 3.2, -7.28, 0.25, -6.28, -6.31, 99, 57, 10.8, 4.9},
    {"industrial", 0, 0.06, 0.19, 0.54, -6.74, 0.40, 0.6, 2.3, 4.3, 1.9, 8.6, 6.3, -1.0, 2.7, -7.17, 0.22, -6.15, -6.35, 113, 42, 14.5, 5.4},
    {"industrial", 5, 0.10, 0.20, 0.50, -6.75, 0.47, 0.9, 2.2, 3.7, 1.3, 7.0, 5.6, -1.0, 2.7, -7.25, 0.30, -6.06, -6.11, 106, 41, 11.6, 5.4},
    {"industrial", 10, 0.24, 0.57, 0.47, -7.08, 1.78, 0.1, 2.3, 3.9, 1.9, 8.4, 7.1, -1.0, 2.5, -7.30, 1.36, -5.94, -6.04, 104, 36, 11.5, 5.7},
    {"industrial", 15, 0.27, 0.43, 0.56, -7.22, 2.81, 0.4, 2.5, 3.7, 2.0, 7.2, 6.4, -1.7, 3.1, -7.50, 2.20, -5.93, -5.92, 105, 41, 10.2, 5.2},
    {"industrial", 20, 0.37, 0.55, 0.56, -7.09, 2.44, -0.6, 3.2, 3.7, 1.5, 6.0, 6.0, -1.8, 3.1, -7.39, 1.86, -5.89, -5.87, 86, 44, 11.1, 5.9},
    {"industrial", 25, 0.30, 0.60, 0.57, -7.21, 2.61, -0.5, 3.0, 3.5, 1.8, 7.8, 6.1, -2.0, 3.0, -7.51, 2.24, -5.89, -6.05, 103, 48, 11.6, 5.3},
    {"industrial", 30, 0.58, 0.75, 0.64, -6.90, 0.50, -1.6, 3.5, 2.8, 1.4, 10.9, 6.4, -2.4, 3.1, -7.26, 0.33, -5.90, -6.20, 108, 36, 13.8, 5.6},
    {"industrial", 35, 0.51, 0.80, 0.65, -7.01, 0.47, -2.6, 3.5, 2.3, 0.4, 13.6, 6.8, -4.0, 2.9, -7.28, 0.17, -5.76, -5.99, 91, 33, 14.4, 6.8},
    {"industrial", 40, 0.50, 0.84, 0.62, -7.10, 0.36, -2.1, 3.3, 2.3, 0.5, 12.2, 6.6, -3.5, 3.1, -7.29, 0.18, -5.90, -6.21, 97, 49, 13.7, 6.5},
};

HeightStats row_to_stats(const TableRow &r)
{
    HeightStats h;
    h.r1 = r.r1;
    h.r2 = r.r2;
    h.r3 = r.r3;
    h.composite_delay_spread_log10_s = {r.cds_m, r.cds_s};
    h.composite_azimuth_spread_log10_deg = {r.cas_m, r.cas_s};
    h.cluster_count = {r.cn_m, r.cn_s};
    h.cluster_k_db = {r.k_m, r.k_s};
    h.cluster_azimuth_spread_log10_deg = {r.as_m, r.as_s};
    h.cluster_delay_spread_log10_s = {r.ds_m, r.ds_s};
    h.cluster_delay_offset_log10_s = {r.do_m, r.do_s};
    h.cluster_azimuth_offset_deg = {r.ao_m, r.ao_s};
    h.cluster_power_offset_db = {r.po_m, r.po_s};
    return h;
}

void validate_pair(const StatPair &p, const char *name, bool std_may_be_location)
{
    if (!std::isfinite(p.mean) || !std::isfinite(p.second))
        throw std::invalid_argument(std::string("ScenarioStatsConfig: non-finite entry in ") + name);
    if (!std_may_be_location && p.second < 0.0)
        throw std::invalid_argument(std::string("ScenarioStatsConfig: negative std in ") + name);
}

} // namespace

const HeightStats &ScenarioStatsConfig::at(const std::string &scenario, int height_m) const
{
    auto it = entries_.find({scenario, height_m});
    if (it == entries_.end())
        throw std::out_of_range("ScenarioStatsConfig: no entry for scenario '" + scenario +
                                "' at height " + std::to_string(height_m) + " m");
    return it->second;
}

bool ScenarioStatsConfig::contains(const std::string &scenario, int height_m) const
{
    return entries_.count({scenario, height_m}) > 0;
}

void ScenarioStatsConfig::set(const std::string &scenario, int height_m, const HeightStats &stats)
{
    entries_[{scenario, height_m}] = stats;
}

void ScenarioStatsConfig::validate() const
{
    for (const auto &[key, h] : entries_)
    {
        const std::string where = key.first + "/" + std::to_string(key.second);
        for (double r : {h.r1, h.r2, h.r3})
            if (!(r >= 0.0 && r <= 1.0))
                throw std::invalid_argument("ScenarioStatsConfig: ratio outside [0,1] in " + where);
        if (h.cluster_count.mean < 1.0)
            throw std::invalid_argument("ScenarioStatsConfig: cluster-count mean below 1 in " + where);
        validate_pair(h.composite_delay_spread_log10_s, "composite delay spread", false);
        validate_pair(h.composite_azimuth_spread_log10_deg, "composite azimuth spread", false);
        validate_pair(h.cluster_count, "cluster count", false);
        validate_pair(h.cluster_k_db, "cluster K", false);
        validate_pair(h.cluster_azimuth_spread_log10_deg, "cluster azimuth spread", false);
        validate_pair(h.cluster_delay_spread_log10_s, "cluster delay spread", false);
        validate_pair(h.cluster_delay_offset_log10_s, "cluster delay offset", true);
        validate_pair(h.cluster_azimuth_offset_deg, "cluster azimuth offset", false);
        validate_pair(h.cluster_power_offset_db, "cluster power offset", false);
    }
}

const ScenarioStatsConfig &ScenarioStatsConfig::builtin()
{
    static const ScenarioStatsConfig cfg = [] {
        ScenarioStatsConfig c;
        for (const auto &row : builtin_rows)
            c.set(row.scenario, row.height_m, row_to_stats(row));
        c.validate();
        return c;
    }();
    return cfg;
}

namespace
{

const std::vector<std::pair<std::string, StatPair HeightStats::*>> &metric_fields()
{
    static const std::vector<std::pair<std::string, StatPair HeightStats::*>> fields = {
        {"composite_delay_spread_log10_s", &HeightStats::composite_delay_spread_log10_s},
        {"composite_azimuth_spread_log10_deg", &HeightStats::composite_azimuth_spread_log10_deg},
        {"cluster_count", &HeightStats::cluster_count},
        {"cluster_k_db", &HeightStats::cluster_k_db},
        {"cluster_azimuth_spread_log10_deg", &HeightStats::cluster_azimuth_spread_log10_deg},
        {"cluster_delay_spread_log10_s", &HeightStats::cluster_delay_spread_log10_s},
        {"cluster_delay_offset_log10_s", &HeightStats::cluster_delay_offset_log10_s},
        {"cluster_azimuth_offset_deg", &HeightStats::cluster_azimuth_offset_deg},
        {"cluster_power_offset_db", &HeightStats::cluster_power_offset_db},
    };
    return fields;
}

} // namespace

ScenarioStatsConfig ScenarioStatsConfig::load(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("ScenarioStatsConfig::load: cannot open " + path.string());
    nlohmann::json j;
    is >> j;

    ScenarioStatsConfig cfg;
    for (const auto &entry : j.at("entries"))
    {
        const std::string scenario = entry.at("scenario").get<std::string>();
        const int height = entry.at("height_m").get<int>();
        const std::string metric = entry.at("metric").get<std::string>();
        const double mean = entry.at("mean").get<double>();
        const double std_val = entry.at("std").get<double>();

        HeightStats h = cfg.contains(scenario, height) ? cfg.at(scenario, height) : HeightStats{};
        bool known = true;
        if (metric == "single_path_ratio")
            h.r1 = mean;
        else if (metric == "single_cluster_ratio")
            h.r2 = mean;
        else if (metric == "single_path_cluster_ratio")
            h.r3 = mean;
        else
        {
            known = false;
            for (const auto &[name, member] : metric_fields())
                if (name == metric)
                {
                    h.*member = {mean, std_val};
                    known = true;
                    break;
                }
        }
        if (!known)
            throw std::runtime_error("ScenarioStatsConfig::load: unknown metric '" + metric + "'");
        cfg.set(scenario, height, h);
    }
    cfg.validate();
    return cfg;
}

void ScenarioStatsConfig::save(const std::filesystem::path &path) const
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &[key, h] : entries_)
    {
        auto push = [&](const std::string &metric, double mean, double std_val) {
            entries.push_back({{"scenario", key.first},
                               {"height_m", key.second},
                               {"metric", metric},
                               {"mean", mean},
                               {"std", std_val}});
        };
        push("single_path_ratio", h.r1, 0.0);
        push("single_cluster_ratio", h.r2, 0.0);
        push("single_path_cluster_ratio", h.r3, 0.0);
        for (const auto &[name, member] : metric_fields())
            push(name, (h.*member).mean, (h.*member).second);
    }
    nlohmann::json j;
    j["entries"] = std::move(entries);
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("ScenarioStatsConfig::save: cannot open " + path.string());
    os << j.dump(2) << '\n';
}

namespace
{

// Scatters one cluster: powers are normalized Exp(1) draws (strongest first),
// delays one-sided exponential offsets from the centroid rescaled so the
// power-weighted spread meets the target exactly (the first arrival stays at
// the centroid), azimuths wrapped Gaussian around the centroid.
void scatter_cluster(int num_paths, double cluster_power, double centroid_delay_s,
                     double centroid_azimuth_rad, double delay_spread_target_s,
                     double azimuth_spread_target_deg, int cluster_id, Rng &rng,
                     DrawnChannel &out)
{
    std::vector<double> powers(static_cast<std::size_t>(num_paths));
    double total = 0.0;
    for (auto &p : powers)
    {
        p = rng.exponential(1.0) + 1e-12;
        total += p;
    }
    for (auto &p : powers)
        p *= cluster_power / total;
    std::sort(powers.begin(), powers.end(), std::greater<>());

    std::vector<double> offsets(static_cast<std::size_t>(num_paths));
    for (auto &d : offsets)
        d = rng.exponential(1.0);
    const double lead = *std::min_element(offsets.begin(), offsets.end());
    for (auto &d : offsets)
        d -= lead;
    std::sort(offsets.begin(), offsets.end()); // strongest path arrives first

    // Rescale so the realized power-weighted spread equals the target
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < num_paths; ++i)
    {
        m1 += powers[static_cast<std::size_t>(i)] * offsets[static_cast<std::size_t>(i)];
        m2 += powers[static_cast<std::size_t>(i)] * offsets[static_cast<std::size_t>(i)] *
              offsets[static_cast<std::size_t>(i)];
    }
    m1 /= cluster_power;
    m2 /= cluster_power;
    const double realized = std::sqrt(std::max(0.0, m2 - m1 * m1));
    if (realized > 0.0)
        for (auto &d : offsets)
            d *= delay_spread_target_s / realized;

    const double az_std_rad = deg_to_rad(std::min(azimuth_spread_target_deg, 720.0));
    for (int i = 0; i < num_paths; ++i)
    {
        PathComponent p;
        const double phase = rng.uniform(0.0, two_pi);
        p.amplitude = std::sqrt(powers[static_cast<std::size_t>(i)]) *
                      std::complex<double>{std::cos(phase), std::sin(phase)};
        p.delay_s = centroid_delay_s + offsets[static_cast<std::size_t>(i)];
        p.azimuth_rad = wrap_angle(centroid_azimuth_rad + rng.normal(0.0, az_std_rad));
        p.elevation_rad = pi / 2.0;
        p.doppler_hz = 0.0;
        out.paths.push_back(p);
        out.cluster_of_path.push_back(cluster_id);
    }
}

void clamp_delays(DrawnChannel &channel)
{
    for (auto &p : channel.paths)
        p.delay_s = std::clamp(p.delay_s, 0.0, max_delay_s);
}

// Affine delay rescale about the power-weighted mean so the composite spread
// meets `target_s`, then a shift putting the first arrival at the base delay
void rescale_composite_delay_spread(DrawnChannel &channel, double target_s)
{
    double power = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto &p : channel.paths)
    {
        const double pw = p.power();
        power += pw;
        m1 += pw * p.delay_s;
        m2 += pw * p.delay_s * p.delay_s;
    }
    m1 /= power;
    m2 /= power;
    const double realized = std::sqrt(std::max(0.0, m2 - m1 * m1));
    if (realized > 0.0)
    {
        const double scale = target_s / realized;
        for (auto &p : channel.paths)
            p.delay_s = m1 + (p.delay_s - m1) * scale;
    }
    double first = channel.paths.front().delay_s;
    for (const auto &p : channel.paths)
        first = std::min(first, p.delay_s);
    for (auto &p : channel.paths)
        p.delay_s += base_delay_s - first;
}

} // namespace

DrawnChannel draw_scenario_channel(const ScenarioStatsConfig &cfg, const std::string &scenario,
                                   int height_m, Rng &rng)
{
    const HeightStats &hs = cfg.at(scenario, height_m);

    DrawnChannel out;
    const bool single_cluster = rng.bernoulli(hs.r2);

    if (single_cluster)
    {
        out.num_clusters = 1;
        const double p_single_path = hs.r2 > 0.0 ? std::clamp(hs.r1 / hs.r2, 0.0, 1.0) : 0.0;
        const double azimuth = rng.uniform(0.0, two_pi);
        if (rng.bernoulli(p_single_path))
        {
            PathComponent p;
            p.amplitude = {1.0, 0.0};
            p.delay_s = base_delay_s;
            p.azimuth_rad = azimuth;
            p.elevation_rad = pi / 2.0;
            out.paths.push_back(p);
            out.cluster_of_path.push_back(0);
        }
        else
        {
            // A single-cluster channel's composite spread is its cluster
            // spread, so the target comes from the composite distribution.
            const int n = rng.uniform_int(2, 10);
            const double ds = std::pow(10.0, rng.normal(hs.composite_delay_spread_log10_s.mean,
                                                        hs.composite_delay_spread_log10_s.sigma()));
            const double as = std::pow(10.0, rng.normal(hs.composite_azimuth_spread_log10_deg.mean,
                                                        hs.composite_azimuth_spread_log10_deg.sigma()));
            scatter_cluster(n, 1.0, base_delay_s, azimuth, ds, as, 0, rng, out);
        }
        clamp_delays(out);
        return out;
    }

    // Multi-cluster branch
    const int c_count =
        std::max(2, static_cast<int>(std::lround(
                        rng.normal(hs.cluster_count.mean, hs.cluster_count.sigma()))));
    out.num_clusters = c_count;

    const double k_db = rng.normal(hs.cluster_k_db.mean, hs.cluster_k_db.sigma());

    // Non-dominant powers from the power-offset stats, jointly rescaled so
    // the dominant-to-rest ratio meets the K draw exactly
    std::vector<double> cluster_power(static_cast<std::size_t>(c_count));
    cluster_power[0] = 1.0;
    double rest = 0.0;
    for (int c = 1; c < c_count; ++c)
    {
        const double off_db = std::max(
            0.0, rng.normal(hs.cluster_power_offset_db.mean, hs.cluster_power_offset_db.sigma()));
        cluster_power[static_cast<std::size_t>(c)] = std::pow(10.0, -off_db / 10.0);
        rest += cluster_power[static_cast<std::size_t>(c)];
    }
    const double rest_target = std::pow(10.0, -k_db / 10.0);
    for (int c = 1; c < c_count; ++c)
        cluster_power[static_cast<std::size_t>(c)] *= rest_target / rest;

    // Centroids: non-dominant delays offset from the dominant one, azimuth
    // offsets applied with a random sign. The delay-offset second column is
    // a location statistic, so the draw spread is |second - mean|.
    const double dominant_azimuth = rng.uniform(0.0, two_pi);
    std::vector<double> centroid_delay(static_cast<std::size_t>(c_count), base_delay_s);
    std::vector<double> centroid_azimuth(static_cast<std::size_t>(c_count), dominant_azimuth);
    for (int c = 1; c < c_count; ++c)
    {
        const double off = std::pow(10.0, rng.normal(hs.cluster_delay_offset_log10_s.mean,
                                                     hs.cluster_delay_offset_log10_s.sigma_from_location()));
        centroid_delay[static_cast<std::size_t>(c)] = base_delay_s + off;
        const double az_off = std::abs(
            rng.normal(hs.cluster_azimuth_offset_deg.mean, hs.cluster_azimuth_offset_deg.sigma()));
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        centroid_azimuth[static_cast<std::size_t>(c)] =
            wrap_angle(dominant_azimuth + sign * deg_to_rad(az_off));
    }

    for (int c = 0; c < c_count; ++c)
    {
        const int n = rng.bernoulli(hs.r3) ? 1 : rng.uniform_int(2, 10);
        if (n == 1)
        {
            PathComponent p;
            const double phase = rng.uniform(0.0, two_pi);
            p.amplitude = std::sqrt(cluster_power[static_cast<std::size_t>(c)]) *
                          std::complex<double>{std::cos(phase), std::sin(phase)};
            p.delay_s = centroid_delay[static_cast<std::size_t>(c)];
            p.azimuth_rad = centroid_azimuth[static_cast<std::size_t>(c)];
            p.elevation_rad = pi / 2.0;
            out.paths.push_back(p);
            out.cluster_of_path.push_back(c);
        }
        else
        {
            const double ds = std::pow(10.0, rng.normal(hs.cluster_delay_spread_log10_s.mean,
                                                        hs.cluster_delay_spread_log10_s.sigma()));
            const double as = std::pow(10.0, rng.normal(hs.cluster_azimuth_spread_log10_deg.mean,
                                                        hs.cluster_azimuth_spread_log10_deg.sigma()));
            scatter_cluster(n, cluster_power[static_cast<std::size_t>(c)],
                            centroid_delay[static_cast<std::size_t>(c)],
                            centroid_azimuth[static_cast<std::size_t>(c)], ds, as, c, rng, out);
        }
    }

    // Composite delay-spread closure
    const double composite_target =
        std::pow(10.0, rng.normal(hs.composite_delay_spread_log10_s.mean,
                                  hs.composite_delay_spread_log10_s.sigma()));
    rescale_composite_delay_spread(out, composite_target);
    clamp_delays(out);
    return out;
}

} // namespace a2g
