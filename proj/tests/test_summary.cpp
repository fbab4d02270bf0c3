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
#include "a2g/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace a2g;

namespace
{

ChannelStats single_path_channel()
{
    ChannelStats s;
    s.cluster_count = 1;
    s.cluster_sizes = {1};
    s.intra_delay_spread_s = {0.0};
    s.intra_azimuth_spread_deg = {0.0};
    s.single_path = true;
    s.single_cluster = true;
    return s;
}

ChannelStats spread_channel(double delay_spread_s, double azimuth_spread_deg)
{
    ChannelStats s;
    s.composite_delay_spread_s = delay_spread_s;
    s.composite_azimuth_spread_deg = azimuth_spread_deg;
    s.cluster_count = 1;
    s.cluster_sizes = {2};
    s.intra_delay_spread_s = {delay_spread_s};
    s.intra_azimuth_spread_deg = {azimuth_spread_deg};
    s.single_cluster = true;
    return s;
}

} // namespace

TEST_CASE("summarize_sample matches the direct-formula oracle on 200 random samples")
{
    Rng rng(83);
    for (int i = 0; i < 200; ++i)
    {
        const int n = rng.uniform_int(1, 60);
        std::vector<double> values;
        for (int k = 0; k < n; ++k)
            values.push_back(rng.normal(rng.uniform(-5.0, 5.0), rng.uniform(0.1, 3.0)));

        const auto s = summarize_sample(values);
        REQUIRE(s.count == n);
        CHECK(s.mean == doctest::Approx(oracles::mean(values)).epsilon(1e-12));
        CHECK(s.stddev == doctest::Approx(oracles::sample_std(values)).epsilon(1e-12));
        CHECK(s.q25 == doctest::Approx(oracles::percentile(values, 0.25)).epsilon(1e-12));
        CHECK(s.median == doctest::Approx(oracles::percentile(values, 0.50)).epsilon(1e-12));
        CHECK(s.q75 == doctest::Approx(oracles::percentile(values, 0.75)).epsilon(1e-12));
        CHECK(s.q25 <= s.median + 1e-15);
        CHECK(s.median <= s.q75 + 1e-15);
        CHECK(s.whisker_min <= s.q25 + 1e-15);
        CHECK(s.whisker_max >= s.q75 - 1e-15);
    }
}

TEST_CASE("whiskers and outliers follow the 1.5 IQR rule")
{
    std::vector<double> values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0};
    const auto s = summarize_sample(values);
    CHECK(s.outlier_count == 1);
    CHECK(s.whisker_max == doctest::Approx(8.0));
    CHECK(s.whisker_min == doctest::Approx(1.0));
}

TEST_CASE("all single-path channels: ratios 1, spread samples empty")
{
    std::vector<ChannelStats> stats(10, single_path_channel());
    const auto row = ensemble_summary(stats, "rural", 0);
    CHECK(row.r1 == doctest::Approx(1.0));
    CHECK(row.r2 == doctest::Approx(1.0));
    CHECK(row.r3 == doctest::Approx(1.0));
    CHECK(row.metrics.at("composite_delay_spread_log10_s").count == 0);
    CHECK(row.metrics.at("composite_azimuth_spread_log10_deg").count == 0);
    CHECK(row.metrics.at("cluster_k_db").count == 0);

    CHECK_THROWS_AS(ensemble_summary({}, "rural", 0), std::invalid_argument);
}

TEST_CASE("a two-channel ensemble reproduces target sample moments exactly")
{
    // Construct spreads whose log10 values have sample mean -7.24 and sample
    // std 0.51: a symmetric pair at -7.24 +- 0.51/sqrt(2)
    const double d = 0.51 / std::sqrt(2.0);
    std::vector<ChannelStats> stats = {
        spread_channel(std::pow(10.0, -7.24 - d), 10.0),
        spread_channel(std::pow(10.0, -7.24 + d), 10.0),
    };
    const auto row = ensemble_summary(stats, "rural", 0);
    const auto &m = row.metrics.at("composite_delay_spread_log10_s");
    REQUIRE(m.count == 2);
    CHECK(m.mean == doctest::Approx(-7.24).epsilon(1e-12));
    CHECK(m.stddev == doctest::Approx(0.51).epsilon(1e-12));
}

TEST_CASE("exclusion rules: single-path clusters, saturated K, multi-cluster counts")
{
    ChannelStats multi;
    multi.composite_delay_spread_s = 1e-7;
    multi.composite_azimuth_spread_deg = 30.0;
    multi.cluster_count = 3;
    multi.cluster_k_db = 6.0;
    multi.cluster_sizes = {3, 1, 2};
    multi.intra_delay_spread_s = {1e-7, 0.0, 5e-8};
    multi.intra_azimuth_spread_deg = {3.0, 0.0, 2.0};
    multi.delay_offsets_s = {1e-6, -2e-6};
    multi.azimuth_offsets_deg = {45.0, 120.0};
    multi.power_offsets_db = {3.0, 8.0};

    ChannelStats saturated = multi;
    saturated.cluster_k_db.reset();
    saturated.k_saturated = true;

    std::vector<ChannelStats> stats = {multi, saturated, single_path_channel()};
    const auto row = ensemble_summary(stats, "urban", 20);

    CHECK(row.num_channels == 3);
    CHECK(row.num_clusters == 3 + 3 + 1);
    CHECK(row.r1 == doctest::Approx(1.0 / 3.0));
    CHECK(row.r2 == doctest::Approx(1.0 / 3.0));
    CHECK(row.r3 == doctest::Approx(3.0 / 7.0)); // one singleton per multi + the single-path one

    // K sample: only the unsaturated multi-cluster channel
    CHECK(row.metrics.at("cluster_k_db").count == 1);
    CHECK(row.metrics.at("cluster_k_db").mean == doctest::Approx(6.0));

    // Cluster-count sample: multi-cluster channels only
    CHECK(row.metrics.at("cluster_count").count == 2);
    CHECK(row.metrics.at("cluster_count").mean == doctest::Approx(3.0));

    // Intra-spread samples skip single-path clusters: 2 clusters per
    // multi-cluster channel qualify
    CHECK(row.metrics.at("cluster_delay_spread_log10_s").count == 4);

    // Delay offsets aggregate log10 |offset|
    const auto &off = row.metrics.at("cluster_delay_offset_log10_s");
    REQUIRE(off.count == 4);
    CHECK(off.mean ==
          doctest::Approx((std::log10(1e-6) + std::log10(2e-6)) / 2.0).epsilon(1e-12));
}

TEST_CASE("summary CSV and text render")
{
    std::vector<ChannelStats> stats = {spread_channel(1e-7, 20.0), single_path_channel()};
    SummaryTable table{ensemble_summary(stats, "industrial", 25)};

    auto dir = std::filesystem::temp_directory_path() / "a2glab_summary_io";
    std::filesystem::create_directories(dir);
    save_summary_csv(table, dir / "summary.csv");

    std::ifstream is(dir / "summary.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "scenario,height_m,metric,statistic,value");
    std::string line;
    int rows = 0;
    bool has_ratio = false;
    while (std::getline(is, line))
    {
        ++rows;
        if (line.find("single_path_ratio,value,0.5") != std::string::npos)
            has_ratio = true;
    }
    CHECK(rows > 10);
    CHECK(has_ratio);

    const std::string text = format_summary_text(table);
    CHECK(text.find("industrial") != std::string::npos);
    CHECK(text.find("(r1; r2; r3)") != std::string::npos);

    std::filesystem::remove_all(dir);
}

TEST_CASE("channel stats JSON round trip")
{
    ChannelStats s;
    s.composite_delay_spread_s = 2.5e-7;
    s.composite_azimuth_spread_deg = 31.0;
    s.cluster_count = 2;
    s.cluster_k_db = 7.25;
    s.cluster_sizes = {2, 1};
    s.intra_delay_spread_s = {1e-7, 0.0};
    s.intra_azimuth_spread_deg = {2.0, 0.0};
    s.delay_offsets_s = {-5e-7};
    s.azimuth_offsets_deg = {160.0};
    s.power_offsets_db = {4.0};

    auto dir = std::filesystem::temp_directory_path() / "a2glab_stats_io";
    std::filesystem::create_directories(dir);
    save_channel_stats(std::vector<ChannelStats>{s, single_path_channel()}, dir / "stats.json");
    const auto loaded = load_channel_stats(dir / "stats.json");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].composite_delay_spread_s == doctest::Approx(s.composite_delay_spread_s));
    REQUIRE(loaded[0].cluster_k_db.has_value());
    CHECK(*loaded[0].cluster_k_db == doctest::Approx(7.25));
    CHECK(loaded[0].delay_offsets_s == s.delay_offsets_s);
    CHECK(loaded[1].single_path);
    CHECK_FALSE(loaded[1].cluster_k_db.has_value());
    std::filesystem::remove_all(dir);
}
