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
#include "a2g/shape.hpp"
#include "a2g/stats.hpp"
#include "a2g/synthesis.hpp"

#include <benchmark/benchmark.h>

using namespace a2g;

namespace
{
const UcaGeometry geometry;
const double tap = 1.0 / 18e6;
}

static void BM_SteeringVector(benchmark::State &state)
{
    std::vector<std::complex<double>> out(16);
    double az = 0.0;
    for (auto _ : state)
    {
        steering_vector_into(geometry, az, 1.2, out.data());
        benchmark::DoNotOptimize(out.data());
        az += 0.001;
    }
}
BENCHMARK(BM_SteeringVector);

static void BM_EvaluateShape(benchmark::State &state)
{
    const auto shape = make_default_shape(18e6, static_cast<int>(state.range(0)), tap);
    double offset = 0.0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(evaluate_shape(shape, offset));
        offset += 0.37 * tap;
        if (offset > 20 * tap)
            offset = -20 * tap;
    }
}
BENCHMARK(BM_EvaluateShape)->Arg(64)->Arg(200);

static void BM_SynthesizeSnapshot(benchmark::State &state)
{
    const auto shape = make_default_shape(18e6, 200, tap);
    const CirDimensions dims{static_cast<int>(state.range(0)), 200, 5e-4, 18e6};
    std::vector<PathComponent> paths(3);
    paths[0].delay_s = 20.5 * tap;
    paths[1].delay_s = 44.0 * tap;
    paths[1].azimuth_rad = 2.0;
    paths[2].delay_s = 90.3 * tap;
    paths[2].azimuth_rad = 4.0;
    SynthesisConfig cfg;
    cfg.noise_power = 0.01;
    for (auto _ : state)
    {
        auto cirs = synthesize_snapshot(paths, {}, geometry, shape, dims, cfg);
        benchmark::DoNotOptimize(cirs.data.data());
    }
}
BENCHMARK(BM_SynthesizeSnapshot)->Arg(30)->Arg(180)->Unit(benchmark::kMillisecond);

static void BM_McdPair(benchmark::State &state)
{
    McdConfig cfg;
    PathEstimate a, b;
    a.delay_s = 1e-6;
    a.azimuth_rad = 0.3;
    a.elevation_rad = 1.5;
    b = a;
    b.delay_s = 3e-6;
    b.azimuth_rad = 2.1;
    for (auto _ : state)
        benchmark::DoNotOptimize(mcd(a, b, cfg));
}
BENCHMARK(BM_McdPair);

static void BM_SelectOptimalClustering(benchmark::State &state)
{
    McdConfig cfg;
    Rng rng(5);
    ChannelEstimate est;
    const int clusters = 4;
    for (int c = 0; c < clusters; ++c)
        for (int i = 0; i < static_cast<int>(state.range(0)) / clusters; ++i)
        {
            PathEstimate p;
            p.power = rng.uniform(0.1, 1.0);
            p.amplitude = std::sqrt(p.power);
            p.delay_s = 1e-6 + c * 8e-6 + rng.uniform(0.0, 2e-7);
            p.azimuth_rad = wrap_angle(c * 1.5 + rng.uniform(-0.05, 0.05));
            p.elevation_rad = pi / 2.0;
            est.paths.push_back(p);
        }
    est.model_order = static_cast<int>(est.paths.size());
    for (auto _ : state)
    {
        auto clu = select_optimal_clustering(est, cfg);
        benchmark::DoNotOptimize(clu.clusters.size());
    }
}
BENCHMARK(BM_SelectOptimalClustering)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

static void BM_CompositeSpreads(benchmark::State &state)
{
    Rng rng(9);
    ChannelEstimate est;
    for (int i = 0; i < 20; ++i)
    {
        PathEstimate p;
        p.power = rng.uniform(0.1, 1.0);
        p.delay_s = rng.uniform(0.0, 1e-5);
        p.azimuth_rad = rng.uniform(0.0, two_pi);
        est.paths.push_back(p);
    }
    est.model_order = 20;
    for (auto _ : state)
        benchmark::DoNotOptimize(composite_spreads(est));
}
BENCHMARK(BM_CompositeSpreads);
