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

#include "a2g/sage.hpp"
#include "a2g/synthesis.hpp"

#include <benchmark/benchmark.h>

using namespace a2g;

namespace
{

const UcaGeometry geometry;
const double tap = 1.0 / 18e6;

ArrayCirSet three_path_set(int num_snapshots, int num_taps)
{
    const auto shape = make_default_shape(18e6, num_taps, tap);
    const CirDimensions dims{num_snapshots, num_taps, 5e-4, 18e6};
    std::vector<PathComponent> paths(3);
    paths[0].amplitude = {1.0, 0.0};
    paths[0].delay_s = 20.4 * tap;
    paths[0].azimuth_rad = 0.7;
    paths[1].amplitude = {0.0, 0.7};
    paths[1].delay_s = 26.8 * tap;
    paths[1].azimuth_rad = 2.6;
    paths[2].amplitude = {0.5, -0.3};
    paths[2].delay_s = 40.1 * tap;
    paths[2].azimuth_rad = 4.9;
    for (auto &p : paths)
        p.elevation_rad = pi / 2.0;
    SynthesisConfig cfg;
    cfg.noise_power = 0.01;
    cfg.rng_seed = 1;
    return synthesize_snapshot(paths, {}, geometry, shape, dims, cfg);
}

} // namespace

static void BM_SageEstimate(benchmark::State &state)
{
    const int num_snapshots = static_cast<int>(state.range(0));
    const int num_taps = static_cast<int>(state.range(1));
    const auto cirs = three_path_set(num_snapshots, num_taps);
    const auto shape = make_default_shape(18e6, num_taps, tap);
    SageConfig cfg;
    cfg.max_paths = static_cast<int>(state.range(2));
    for (auto _ : state)
    {
        auto est = sage_estimate(cirs, shape, cfg);
        benchmark::DoNotOptimize(est.model_order);
    }
}
BENCHMARK(BM_SageEstimate)
    ->Args({30, 128, 4})
    ->Args({60, 128, 8})
    ->Args({180, 200, 8})
    ->Unit(benchmark::kMillisecond)
    ->Iterations(3);

static void BM_Calibration(benchmark::State &state)
{
    const auto pulse = make_default_shape(18e6, 200, tap);
    Rng rng(2);
    const auto rec = simulate_calibration_recording(-12.0, 30.0, pulse, 100 * tap,
                                                    static_cast<int>(state.range(0)), rng, 5e-4);
    for (auto _ : state)
    {
        auto result = estimate_calibration(rec);
        benchmark::DoNotOptimize(result.doppler_hz);
    }
}
BENCHMARK(BM_Calibration)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_Apdp(benchmark::State &state)
{
    const auto cirs = three_path_set(180, 200);
    for (auto _ : state)
    {
        auto profile = apdp(cirs, 0);
        benchmark::DoNotOptimize(profile.data());
    }
}
BENCHMARK(BM_Apdp)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
