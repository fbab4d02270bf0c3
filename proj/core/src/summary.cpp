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

#include "a2g/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace a2g
{

namespace
{

// Percentile with linear interpolation between order statistics at the
// positions (k - 0.5)/n, the convention of MATLAB's prctile/boxplot
double percentile_sorted(const std::vector<double> &sorted, double p)
{
    const std::size_t n = sorted.size();
    const double pos = p * static_cast<double>(n) + 0.5;
    if (pos <= 1.0)
        return sorted.front();
    if (pos >= static_cast<double>(n))
        return sorted.back();
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos)) - 1;
    const double frac = pos - std::floor(pos);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void append_positive_log10(std::vector<double> &out, double value)
{
    if (std::isfinite(value) && value > 0.0)
        out.push_back(std::log10(value));
}

} // namespace

MetricSummary summarize_sample(std::span<const double> values)
{
    MetricSummary s;
    s.count = static_cast<int>(values.size());
    if (values.empty())
        return s;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    double mean = 0.0;
    for (double v : sorted)
        mean += v;
    mean /= static_cast<double>(sorted.size());
    double var = 0.0;
    for (double v : sorted)
        var += (v - mean) * (v - mean);
    s.mean = mean;
    s.stddev = sorted.size() > 1 ? std::sqrt(var / static_cast<double>(sorted.size() - 1)) : 0.0;

    s.q25 = percentile_sorted(sorted, 0.25);
    s.median = percentile_sorted(sorted, 0.50);
    s.q75 = percentile_sorted(sorted, 0.75);

    const double iqr = s.q75 - s.q25;
    const double lo_fence = s.q25 - 1.5 * iqr;
    const double hi_fence = s.q75 + 1.5 * iqr;
    s.whisker_min = s.q25;
    s.whisker_max = s.q75;
    int outliers = 0;
    bool found_lo = false, found_hi = false;
    for (double v : sorted)
    {
        if (v < lo_fence || v > hi_fence)
        {
            ++outliers;
            continue;
        }
        if (!found_lo)
        {
            s.whisker_min = v;
            found_lo = true;
        }
        s.whisker_max = v;
        found_hi = true;
    }
    if (!found_hi)
    {
        // Everything was an outlier (possible only for degenerate fences)
        s.whisker_min = sorted.front();
        s.whisker_max = sorted.back();
        outliers = 0;
    }
    s.outlier_count = outliers;
    return s;
}

SummaryRow ensemble_summary(std::span<const ChannelStats> stats, const std::string &scenario,
                            int height_m)
{
    if (stats.empty())
        throw std::invalid_argument("ensemble_summary: empty input");

    SummaryRow row;
    row.scenario = scenario;
    row.height_m = height_m;
    row.num_channels = static_cast<int>(stats.size());

    int single_path = 0, single_cluster = 0, single_path_clusters = 0, clusters = 0;
    std::vector<double> comp_ds, comp_as, cluster_count, k_db;
    std::vector<double> intra_ds, intra_as, delay_off, azimuth_off, power_off;

    for (const auto &s : stats)
    {
        if (s.single_path)
            ++single_path;
        if (s.single_cluster)
            ++single_cluster;
        clusters += s.cluster_count;
        for (int size : s.cluster_sizes)
            if (size == 1)
                ++single_path_clusters;

        // Zero-spread (single-path) channels are excluded from the spread
        // samples; zero azimuth spreads of degenerate multi-path channels
        // drop out of the log10 domain the same way.
        if (!s.single_path)
        {
            append_positive_log10(comp_ds, s.composite_delay_spread_s);
            append_positive_log10(comp_as, s.composite_azimuth_spread_deg);
        }

        if (s.cluster_count >= 2)
        {
            cluster_count.push_back(static_cast<double>(s.cluster_count));
            if (s.cluster_k_db && !s.k_saturated)
                k_db.push_back(*s.cluster_k_db);
        }

        for (std::size_t c = 0; c < s.cluster_sizes.size(); ++c)
        {
            if (s.cluster_sizes[c] <= 1)
                continue; // single-path clusters excluded from spread samples
            append_positive_log10(intra_ds, s.intra_delay_spread_s[c]);
            append_positive_log10(intra_as, s.intra_azimuth_spread_deg[c]);
        }

        for (double d : s.delay_offsets_s)
            append_positive_log10(delay_off, std::abs(d));
        for (double a : s.azimuth_offsets_deg)
            azimuth_off.push_back(a);
        for (double p : s.power_offsets_db)
            power_off.push_back(p);
    }

    row.num_clusters = clusters;
    row.r1 = static_cast<double>(single_path) / row.num_channels;
    row.r2 = static_cast<double>(single_cluster) / row.num_channels;
    row.r3 = clusters > 0 ? static_cast<double>(single_path_clusters) / clusters : 0.0;

    row.metrics["composite_delay_spread_log10_s"] = summarize_sample(comp_ds);
    row.metrics["composite_azimuth_spread_log10_deg"] = summarize_sample(comp_as);
    row.metrics["cluster_count"] = summarize_sample(cluster_count);
    row.metrics["cluster_k_db"] = summarize_sample(k_db);
    row.metrics["cluster_delay_spread_log10_s"] = summarize_sample(intra_ds);
    row.metrics["cluster_azimuth_spread_log10_deg"] = summarize_sample(intra_as);
    row.metrics["cluster_delay_offset_log10_s"] = summarize_sample(delay_off);
    row.metrics["cluster_azimuth_offset_deg"] = summarize_sample(azimuth_off);
    row.metrics["cluster_power_offset_db"] = summarize_sample(power_off);
    return row;
}

void save_summary_csv(const SummaryTable &table, const std::filesystem::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_summary_csv: cannot open " + path.string());
    os.precision(17);
    os << "scenario,height_m,metric,statistic,value\n";
    for (const auto &row : table)
    {
        const std::string prefix = row.scenario + "," + std::to_string(row.height_m) + ",";
        os << prefix << "channels,count," << row.num_channels << '\n';
        os << prefix << "clusters,count," << row.num_clusters << '\n';
        os << prefix << "single_path_ratio,value," << row.r1 << '\n';
        os << prefix << "single_cluster_ratio,value," << row.r2 << '\n';
        os << prefix << "single_path_cluster_ratio,value," << row.r3 << '\n';
        for (const auto &[name, m] : row.metrics)
        {
            os << prefix << name << ",count," << m.count << '\n';
            if (m.count == 0)
                continue; // empty sample: the count row is the explicit marker
            os << prefix << name << ",mean," << m.mean << '\n';
            os << prefix << name << ",std," << m.stddev << '\n';
            os << prefix << name << ",q25," << m.q25 << '\n';
            os << prefix << name << ",median," << m.median << '\n';
            os << prefix << name << ",q75," << m.q75 << '\n';
            os << prefix << name << ",whisker_min," << m.whisker_min << '\n';
            os << prefix << name << ",whisker_max," << m.whisker_max << '\n';
            os << prefix << name << ",outliers," << m.outlier_count << '\n';
        }
    }
}

std::string format_summary_text(const SummaryTable &table)
{
    static const std::vector<std::pair<std::string, std::string>> columns = {
        {"composite_delay_spread_log10_s", "CompDS[log10 s]"},
        {"composite_azimuth_spread_log10_deg", "CompAS[log10 deg]"},
        {"cluster_count", "Clusters"},
        {"cluster_k_db", "K[dB]"},
        {"cluster_azimuth_spread_log10_deg", "CluAS[log10 deg]"},
        {"cluster_delay_spread_log10_s", "CluDS[log10 s]"},
        {"cluster_delay_offset_log10_s", "DelayOff[log10 s]"},
        {"cluster_azimuth_offset_deg", "AzOff[deg]"},
        {"cluster_power_offset_db", "PowOff[dB]"},
    };

    std::ostringstream os;
    os << std::left << std::setw(12) << "scenario" << std::setw(7) << "h[m]" << std::setw(20)
       << "(r1; r2; r3)";
    for (const auto &[key, label] : columns)
        os << std::setw(18) << label;
    os << '\n';

    auto cell = [](const MetricSummary &m) {
        if (m.count == 0)
            return std::string("-");
        std::ostringstream c;
        c << '(' << std::fixed << std::setprecision(2) << m.mean << ", " << m.stddev << ')';
        return c.str();
    };

    for (const auto &row : table)
    {
        std::ostringstream ratios;
        ratios << '(' << std::fixed << std::setprecision(2) << row.r1 << "; " << row.r2 << "; "
               << row.r3 << ')';
        os << std::left << std::setw(12) << row.scenario << std::setw(7) << row.height_m
           << std::setw(20) << ratios.str();
        for (const auto &[key, label] : columns)
        {
            auto it = row.metrics.find(key);
            os << std::setw(18) << (it == row.metrics.end() ? "-" : cell(it->second));
        }
        os << '\n';
    }
    return os.str();
}

} // namespace a2g
