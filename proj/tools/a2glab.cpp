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

#include "a2g/log.hpp"
#include "a2g/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char **argv)
{
    CLI::App app{"a2glab - synthesize, estimate, cluster and summarize UCA air-to-ground "
                 "channel snapshots"};

    std::string mode, config_path, out_dir, scenario, input;
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    int jobs = 0, height = -1, num_channels = 0;

    app.add_option("--mode", mode,
                   "Pipeline mode: synth|estimate|cluster|stats|table|calibrate|roundtrip");
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_option("--jobs", jobs, "Parallel channel workers");
    app.add_option("--out-dir", out_dir, "Output directory");
    app.add_option("--scenario", scenario, "Scenario: rural|urban|industrial");
    app.add_option("--height", height, "Height in meters (0, 5, ..., 40)");
    app.add_option("--num-channels", num_channels, "Number of channels to process");
    app.add_option("--input", input, "Input file or directory (mode dependent)");
    app.add_option("--set", overrides,
                   "Flat dotted-key config override, e.g. --set sage.max_paths=12")
        ->take_all();

    CLI11_PARSE(app, argc, argv);

    try
    {
        std::string json_text = "{}";
        if (!config_path.empty())
        {
            std::ifstream is(config_path);
            if (!is)
                throw std::runtime_error("cannot open config file " + config_path);
            std::stringstream buffer;
            buffer << is.rdbuf();
            json_text = buffer.str();
        }

        for (const auto &kv : overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("--set expects key=value, got '" + kv + "'");
            json_text = a2g::apply_config_override(json_text, kv.substr(0, eq), kv.substr(eq + 1));
        }

        // Explicit flags take precedence over the config file
        if (!mode.empty())
            json_text = a2g::apply_config_override(json_text, "mode", "\"" + mode + "\"");
        if (!out_dir.empty())
            json_text = a2g::apply_config_override(json_text, "out_dir", "\"" + out_dir + "\"");
        if (!scenario.empty())
            json_text = a2g::apply_config_override(json_text, "scenario", "\"" + scenario + "\"");
        if (!input.empty())
            json_text = a2g::apply_config_override(json_text, "input", "\"" + input + "\"");
        if (seed >= 0)
            json_text = a2g::apply_config_override(json_text, "rng_seed", std::to_string(seed));
        if (jobs > 0)
            json_text = a2g::apply_config_override(json_text, "jobs", std::to_string(jobs));
        if (height >= 0)
            json_text = a2g::apply_config_override(json_text, "height_m", std::to_string(height));
        if (num_channels > 0)
            json_text =
                a2g::apply_config_override(json_text, "num_channels", std::to_string(num_channels));

        const a2g::PipelineConfig cfg = a2g::parse_pipeline_config(json_text);
        a2g::run_pipeline(cfg);
    }
    catch (const std::exception &e)
    {
        std::cerr << "a2glab: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
