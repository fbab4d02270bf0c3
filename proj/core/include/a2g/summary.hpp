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

#ifndef A2G_SUMMARY_HPP
#define A2G_SUMMARY_HPP

#include "a2g/stats.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace a2g
{

// Boxplot-style summary of one metric sample: moments plus quartiles,
// whiskers at the most extreme points within 1.5 IQR of the quartiles, and
// the count of observations beyond the whiskers. count == 0 marks an empty
// sample (all other fields meaningless then); stddev is 0 for count == 1.
struct MetricSummary
{
    int count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double whisker_min = 0.0;
    double whisker_max = 0.0;
    int outlier_count = 0;
};

MetricSummary summarize_sample(std::span<const double> values);

// Aggregated statistics of one (scenario, height) ensemble. Metric keys:
//   composite_delay_spread_log10_s      log10 seconds, single-path channels excluded
//   composite_azimuth_spread_log10_deg  log10 degrees, single-path channels excluded
//   cluster_count                       multi-cluster channels only
//   cluster_k_db                        multi-cluster channels only, saturated excluded
//   cluster_delay_spread_log10_s        per cluster, single-path clusters excluded
//   cluster_azimuth_spread_log10_deg    per cluster, single-path clusters excluded
//   cluster_delay_offset_log10_s        log10 |offset|, zero offsets excluded
//   cluster_azimuth_offset_deg
//   cluster_power_offset_db
// Zero or non-finite values are dropped before taking log10.
struct SummaryRow
{
    std::string scenario;
    int height_m = 0;
    int num_channels = 0;
    int num_clusters = 0;
    double r1 = 0.0; // single-path channels / channels
    double r2 = 0.0; // single-cluster channels / channels
    double r3 = 0.0; // single-path clusters / clusters
    std::map<std::string, MetricSummary> metrics;
};

using SummaryTable = std::vector<SummaryRow>;

// Aggregates per-channel records into one summary row. Throws
// std::invalid_argument for an empty input.
SummaryRow ensemble_summary(std::span<const ChannelStats> stats, const std::string &scenario,
                            int height_m);

// Long-format CSV: scenario, height_m, metric, statistic, value
void save_summary_csv(const SummaryTable &table, const std::filesystem::path &path);

// Aligned text table, one (mean, std) cell per metric and scenario row
std::string format_summary_text(const SummaryTable &table);

} // namespace a2g

#endif
