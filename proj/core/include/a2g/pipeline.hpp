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

#ifndef A2G_PIPELINE_HPP
#define A2G_PIPELINE_HPP

#include "a2g/clustering.hpp"
#include "a2g/sage.hpp"
#include "a2g/synthesis.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace a2g
{

// Batch driver configuration. One mode per invocation:
//   synth      - draw channels and write ArrayCirSet containers + ground truth
//   estimate   - run the estimator over *.cir.json inputs
//   cluster    - run cluster identification over *.est.csv inputs
//   stats      - per-channel statistics from estimate/clustering pairs
//   table      - aggregate channel_stats.json into a summary table
//   calibrate  - pulse/Doppler calibration from a single-channel recording
//   roundtrip  - synth -> estimate -> cluster -> stats -> table in memory,
//                plus a configured-vs-recovered comparison report
struct PipelineConfig
{
    std::string mode;
    std::filesystem::path out_dir;
    std::filesystem::path input; // input file or directory (mode dependent)

    std::string scenario = "rural";
    int height_m = 0;
    int num_channels = 1;
    std::uint64_t rng_seed = 1;
    int jobs = 1;
    std::string stats_file = "builtin"; // "builtin" or a JSON path

    // Synthesis
    double noise_power = 0.0;
    GainModel gain_model{};
    int num_snapshots = 180;
    int num_taps = 200;
    double snapshot_spacing_s = 5e-4;
    double bandwidth_hz = 18e6;

    // Estimation / clustering overrides
    SageConfig sage{};
    McdConfig mcd{};

    // Calibration-recording parameters (mode calibrate without an input file)
    double calib_doppler_hz = -12.0;
    double calib_snr_db = 30.0;
    double calib_delay_s = 0.0;
    int calib_num_cirs = 400;

    bool write_cir = false; // roundtrip: also write the synthesized tensors
};

// Strict JSON parsing: unknown or ill-typed fields raise std::runtime_error
// naming the offending key. The JSON mirrors the struct; nested objects are
// "gain_model", "sage", "mcd", "calib".
PipelineConfig parse_pipeline_config(const std::string &json_text);
PipelineConfig load_pipeline_config(const std::filesystem::path &path);

// Applies a flat dotted-key override ("sage.max_paths=12") onto config JSON
std::string apply_config_override(const std::string &json_text, const std::string &dotted_key,
                                  const std::string &value);

// Runs one pipeline invocation. Creates out_dir, writes the outputs of the
// mode plus a manifest echoing the configuration. Throws on any error
// (missing files, schema violations); callers report and set the exit code.
void run_pipeline(const PipelineConfig &cfg);

} // namespace a2g

#endif
