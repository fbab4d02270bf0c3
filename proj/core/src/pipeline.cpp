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

#include "a2g/pipeline.hpp"
#include "a2g/log.hpp"
#include "a2g/scenario.hpp"
#include "a2g/stats.hpp"
#include "a2g/summary.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace a2g
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr int schema_version = 1;

// ---- strict config parsing ----------------------------------------------

void check_keys(const json &j, const std::string &where,
                std::initializer_list<const char *> allowed)
{
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        bool known = false;
        for (const char *k : allowed)
            if (it.key() == k)
            {
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error("config: unknown field '" + where + it.key() + "'");
    }
}

template <typename T> void read_field(const json &j, const std::string &where, const char *key, T &out)
{
    if (!j.contains(key))
        return;
    try
    {
        out = j.at(key).get<T>();
    }
    catch (const json::exception &)
    {
        throw std::runtime_error("config: field '" + where + key + "' has the wrong type");
    }
}

GainModel parse_gain_model(const json &j)
{
    check_keys(j, "gain_model.", {"kind", "ripple_std_db", "depth_db", "arc_deg"});
    GainModel g;
    std::string kind = "uniform";
    read_field(j, "gain_model.", "kind", kind);
    if (kind == "uniform")
        g.kind = GainModel::Kind::uniform;
    else if (kind == "log_normal_ripple")
        g.kind = GainModel::Kind::log_normal_ripple;
    else if (kind == "blockage")
        g.kind = GainModel::Kind::blockage;
    else
        throw std::runtime_error("config: field 'gain_model.kind' must be uniform, "
                                 "log_normal_ripple or blockage");
    read_field(j, "gain_model.", "ripple_std_db", g.ripple_std_db);
    read_field(j, "gain_model.", "depth_db", g.blockage_depth_db);
    read_field(j, "gain_model.", "arc_deg", g.blockage_arc_deg);
    return g;
}

} // namespace

PipelineConfig parse_pipeline_config(const std::string &json_text)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::exception &e)
    {
        throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
    }

    check_keys(j, "",
               {"mode", "out_dir", "input", "scenario", "height_m", "num_channels", "rng_seed",
                "jobs", "stats_file", "noise_power", "gain_model", "num_snapshots", "num_taps",
                "snapshot_spacing_s", "bandwidth_hz", "sage", "mcd", "calib", "write_cir"});

    PipelineConfig cfg;
    read_field(j, "", "mode", cfg.mode);
    std::string path;
    read_field(j, "", "out_dir", path);
    cfg.out_dir = path;
    path.clear();
    read_field(j, "", "input", path);
    cfg.input = path;
    read_field(j, "", "scenario", cfg.scenario);
    read_field(j, "", "height_m", cfg.height_m);
    read_field(j, "", "num_channels", cfg.num_channels);
    read_field(j, "", "rng_seed", cfg.rng_seed);
    read_field(j, "", "jobs", cfg.jobs);
    read_field(j, "", "stats_file", cfg.stats_file);
    read_field(j, "", "noise_power", cfg.noise_power);
    read_field(j, "", "num_snapshots", cfg.num_snapshots);
    read_field(j, "", "num_taps", cfg.num_taps);
    read_field(j, "", "snapshot_spacing_s", cfg.snapshot_spacing_s);
    read_field(j, "", "bandwidth_hz", cfg.bandwidth_hz);
    read_field(j, "", "write_cir", cfg.write_cir);

    if (j.contains("gain_model"))
        cfg.gain_model = parse_gain_model(j["gain_model"]);

    if (j.contains("sage"))
    {
        const json &s = j["sage"];
        check_keys(s, "sage.",
                   {"max_paths", "snr_keep_threshold_db", "max_iterations", "convergence_tol",
                    "delay_grid_oversampling", "azimuth_grid_deg", "doppler_pad_factor"});
        read_field(s, "sage.", "max_paths", cfg.sage.max_paths);
        read_field(s, "sage.", "snr_keep_threshold_db", cfg.sage.snr_keep_threshold_db);
        read_field(s, "sage.", "max_iterations", cfg.sage.max_iterations);
        read_field(s, "sage.", "convergence_tol", cfg.sage.convergence_tol);
        read_field(s, "sage.", "delay_grid_oversampling", cfg.sage.delay_grid_oversampling);
        read_field(s, "sage.", "azimuth_grid_deg", cfg.sage.azimuth_grid_deg);
        read_field(s, "sage.", "doppler_pad_factor", cfg.sage.doppler_pad_factor);
    }

    if (j.contains("mcd"))
    {
        const json &m = j["mcd"];
        check_keys(m, "mcd.",
                   {"tau_zeta_s", "include_elevation", "threshold_grid", "max_sweep_iterations"});
        read_field(m, "mcd.", "tau_zeta_s", cfg.mcd.tau_zeta_s);
        read_field(m, "mcd.", "include_elevation", cfg.mcd.include_elevation);
        read_field(m, "mcd.", "threshold_grid", cfg.mcd.threshold_grid);
        read_field(m, "mcd.", "max_sweep_iterations", cfg.mcd.max_sweep_iterations);
    }

    if (j.contains("calib"))
    {
        const json &c = j["calib"];
        check_keys(c, "calib.", {"doppler_hz", "snr_db", "delay_s", "num_cirs"});
        read_field(c, "calib.", "doppler_hz", cfg.calib_doppler_hz);
        read_field(c, "calib.", "snr_db", cfg.calib_snr_db);
        read_field(c, "calib.", "delay_s", cfg.calib_delay_s);
        read_field(c, "calib.", "num_cirs", cfg.calib_num_cirs);
    }

    if (cfg.mode.empty())
        throw std::runtime_error("config: field 'mode' is required");
    static const char *modes[] = {"synth", "estimate", "cluster", "stats",
                                  "table", "calibrate", "roundtrip"};
    if (std::none_of(std::begin(modes), std::end(modes),
                     [&](const char *m) { return cfg.mode == m; }))
        throw std::runtime_error("config: field 'mode' has unknown value '" + cfg.mode + "'");
    if (cfg.num_channels < 1)
        throw std::runtime_error("config: field 'num_channels' must be >= 1");
    if (cfg.jobs < 1)
        throw std::runtime_error("config: field 'jobs' must be >= 1");
    validate_sage_config(cfg.sage);
    validate_mcd_config(cfg.mcd);
    return cfg;
}

PipelineConfig load_pipeline_config(const fs::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << is.rdbuf();
    return parse_pipeline_config(buffer.str());
}

std::string apply_config_override(const std::string &json_text, const std::string &dotted_key,
                                  const std::string &value)
{
    json j = json_text.empty() ? json::object() : json::parse(json_text);

    std::vector<std::string> parts;
    std::stringstream ss(dotted_key);
    std::string part;
    while (std::getline(ss, part, '.'))
        parts.push_back(part);
    if (parts.empty())
        throw std::runtime_error("config override: empty key");

    json *node = &j;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
        node = &(*node)[parts[i]];

    // Interpret the value as JSON when possible (numbers, booleans, arrays),
    // otherwise as a plain string
    json parsed = json::parse(value, nullptr, false);
    (*node)[parts.back()] = parsed.is_discarded() ? json(value) : parsed;
    return j.dump();
}

namespace
{

// ---- shared helpers ------------------------------------------------------

std::string channel_name(int index)
{
    std::ostringstream os;
    os << "channel_" << std::setw(4) << std::setfill('0') << index;
    return os.str();
}

// Deterministic parallel map: worker threads pull indices from a counter;
// any exception is re-thrown after the join.
void parallel_for(int jobs, int count, const std::function<void(int)> &body)
{
    if (jobs <= 1 || count <= 1)
    {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;)
        {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, count);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

json config_echo(const PipelineConfig &cfg)
{
    json j;
    j["mode"] = cfg.mode;
    j["out_dir"] = cfg.out_dir.string();
    j["input"] = cfg.input.string();
    j["scenario"] = cfg.scenario;
    j["height_m"] = cfg.height_m;
    j["num_channels"] = cfg.num_channels;
    j["rng_seed"] = cfg.rng_seed;
    j["jobs"] = cfg.jobs;
    j["stats_file"] = cfg.stats_file;
    j["noise_power"] = cfg.noise_power;
    j["gain_model"] = {{"kind",
                        cfg.gain_model.kind == GainModel::Kind::uniform ? "uniform"
                        : cfg.gain_model.kind == GainModel::Kind::log_normal_ripple
                            ? "log_normal_ripple"
                            : "blockage"},
                       {"ripple_std_db", cfg.gain_model.ripple_std_db},
                       {"depth_db", cfg.gain_model.blockage_depth_db},
                       {"arc_deg", cfg.gain_model.blockage_arc_deg}};
    j["num_snapshots"] = cfg.num_snapshots;
    j["num_taps"] = cfg.num_taps;
    j["snapshot_spacing_s"] = cfg.snapshot_spacing_s;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["sage"] = {{"max_paths", cfg.sage.max_paths},
                 {"snr_keep_threshold_db", cfg.sage.snr_keep_threshold_db},
                 {"max_iterations", cfg.sage.max_iterations},
                 {"convergence_tol", cfg.sage.convergence_tol},
                 {"delay_grid_oversampling", cfg.sage.delay_grid_oversampling},
                 {"azimuth_grid_deg", cfg.sage.azimuth_grid_deg},
                 {"doppler_pad_factor", cfg.sage.doppler_pad_factor}};
    j["mcd"] = {{"tau_zeta_s", cfg.mcd.tau_zeta_s},
                {"include_elevation", cfg.mcd.include_elevation},
                {"threshold_grid", cfg.mcd.threshold_grid},
                {"max_sweep_iterations", cfg.mcd.max_sweep_iterations}};
    j["calib"] = {{"doppler_hz", cfg.calib_doppler_hz},
                  {"snr_db", cfg.calib_snr_db},
                  {"delay_s", cfg.calib_delay_s},
                  {"num_cirs", cfg.calib_num_cirs}};
    j["write_cir"] = cfg.write_cir;
    return j;
}

void write_manifest(const PipelineConfig &cfg)
{
    json j;
    j["tool"] = "a2glab";
    j["schema_versions"] = {{"cir", schema_version},
                            {"estimate", schema_version},
                            {"clustering", schema_version},
                            {"channel_stats", schema_version},
                            {"summary", schema_version}};
    j["seed"] = cfg.rng_seed;
    j["config"] = config_echo(cfg);
    std::ofstream os(cfg.out_dir / "manifest.json");
    if (!os)
        throw std::runtime_error("cannot write manifest in " + cfg.out_dir.string());
    os << j.dump(2) << '\n';
}

const ScenarioStatsConfig &resolve_stats(const PipelineConfig &cfg, ScenarioStatsConfig &storage)
{
    if (cfg.stats_file == "builtin" || cfg.stats_file.empty())
        return ScenarioStatsConfig::builtin();
    storage = ScenarioStatsConfig::load(cfg.stats_file);
    return storage;
}

std::vector<fs::path> sorted_inputs(const fs::path &dir, const std::string &suffix)
{
    if (!fs::exists(dir))
        throw std::runtime_error("input path does not exist: " + dir.string());
    std::vector<fs::path> files;
    if (fs::is_regular_file(dir))
    {
        files.push_back(dir);
        return files;
    }
    for (const auto &entry : fs::directory_iterator(dir))
    {
        const std::string name = entry.path().filename().string();
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw std::runtime_error("no *" + suffix + " inputs under " + dir.string());
    return files;
}

void save_truth(const DrawnChannel &channel, const fs::path &csv_path)
{
    std::ofstream os(csv_path);
    if (!os)
        throw std::runtime_error("cannot open " + csv_path.string());
    os.precision(17);
    os << "path_id,cluster_id,power,delay_s,azimuth_deg,elevation_deg,doppler_hz,re_alpha,im_alpha\n";
    for (std::size_t i = 0; i < channel.paths.size(); ++i)
    {
        const auto &p = channel.paths[i];
        os << i << ',' << channel.cluster_of_path[i] << ',' << p.power() << ',' << p.delay_s << ','
           << rad_to_deg(p.azimuth_rad) << ',' << rad_to_deg(p.elevation_rad) << ',' << p.doppler_hz
           << ',' << p.amplitude.real() << ',' << p.amplitude.imag() << '\n';
    }
}

ShapeFunction shape_for_cir(const fs::path &cir_json, const ArrayCirSet &cirs)
{
    const std::string ref = cir_set_shape_ref(cir_json);
    if (ref == "default")
        return make_default_shape(cirs.bandwidth_hz, cirs.num_taps, cirs.tap_spacing_s);
    fs::path shape_path(ref);
    if (shape_path.is_relative())
        shape_path = cir_json.parent_path() / shape_path;
    return load_shape(shape_path);
}

// ---- modes ---------------------------------------------------------------

void mode_synth(const PipelineConfig &cfg)
{
    ScenarioStatsConfig storage;
    const ScenarioStatsConfig &stats = resolve_stats(cfg, storage);
    if (!stats.contains(cfg.scenario, cfg.height_m))
        throw std::runtime_error("no statistics for scenario '" + cfg.scenario + "' at height " +
                                 std::to_string(cfg.height_m) + " m");

    const UcaGeometry geometry;
    const ShapeFunction shape =
        make_default_shape(cfg.bandwidth_hz, cfg.num_taps, 1.0 / cfg.bandwidth_hz);
    const CirDimensions dims{cfg.num_snapshots, cfg.num_taps, cfg.snapshot_spacing_s,
                             cfg.bandwidth_hz};

    parallel_for(cfg.jobs, cfg.num_channels, [&](int i) {
        Rng rng(cfg.rng_seed + static_cast<std::uint64_t>(i));
        const DrawnChannel channel = draw_scenario_channel(stats, cfg.scenario, cfg.height_m, rng);

        const PerAntennaGains gains = draw_gain_vector(cfg.gain_model, geometry, rng);
        std::vector<PerAntennaGains> per_path(channel.paths.size(), gains);

        SynthesisConfig synth_cfg;
        synth_cfg.noise_power = cfg.noise_power;
        synth_cfg.gain_model = cfg.gain_model;
        synth_cfg.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(i) + 0x9e3779b97f4a7c15ull;
        const ArrayCirSet cirs =
            synthesize_snapshot(channel.paths, per_path, geometry, shape, dims, synth_cfg);

        const std::string base = channel_name(i);
        save_cir_set(cirs, cfg.out_dir / (base + ".cir.json"));
        save_truth(channel, cfg.out_dir / (base + ".truth.csv"));
    });
}

void mode_estimate(const PipelineConfig &cfg)
{
    const auto files = sorted_inputs(cfg.input, ".cir.json");
    parallel_for(cfg.jobs, static_cast<int>(files.size()), [&](int i) {
        const fs::path &file = files[static_cast<std::size_t>(i)];
        const ArrayCirSet cirs = load_cir_set(file);
        const ShapeFunction shape = shape_for_cir(file, cirs);
        const ChannelEstimate est = sage_estimate(cirs, shape, cfg.sage);

        std::string base = file.filename().string();
        base = base.substr(0, base.size() - std::string(".cir.json").size());
        save_estimate(est, cfg.out_dir / (base + ".est.csv"), cfg.out_dir / (base + ".est.json"));
    });
}

void mode_cluster(const PipelineConfig &cfg)
{
    const auto files = sorted_inputs(cfg.input, ".est.csv");
    parallel_for(cfg.jobs, static_cast<int>(files.size()), [&](int i) {
        const fs::path &file = files[static_cast<std::size_t>(i)];
        fs::path sidecar = file;
        sidecar.replace_extension(".json");
        const ChannelEstimate est = load_estimate(file, sidecar);
        if (est.paths.empty())
        {
            log_warn("skipping empty estimate " + file.string());
            return;
        }
        const Clustering clustering = select_optimal_clustering(est, cfg.mcd);

        std::string base = file.filename().string();
        base = base.substr(0, base.size() - std::string(".est.csv").size());
        save_clustering(clustering, cfg.out_dir / (base + ".clu.csv"),
                        cfg.out_dir / (base + ".clu.json"));
    });
}

void mode_stats(const PipelineConfig &cfg)
{
    const auto files = sorted_inputs(cfg.input, ".est.csv");
    std::vector<ChannelStats> all(files.size());
    parallel_for(cfg.jobs, static_cast<int>(files.size()), [&](int i) {
        const fs::path &file = files[static_cast<std::size_t>(i)];
        fs::path sidecar = file;
        sidecar.replace_extension(".json");
        const ChannelEstimate est = load_estimate(file, sidecar);

        std::string base = file.filename().string();
        base = base.substr(0, base.size() - std::string(".est.csv").size());
        const fs::path clu_csv = file.parent_path() / (base + ".clu.csv");
        const fs::path clu_json = file.parent_path() / (base + ".clu.json");
        const Clustering clustering = load_clustering(clu_csv, clu_json);
        all[static_cast<std::size_t>(i)] = cluster_level_stats(clustering, est);
    });
    save_channel_stats(all, cfg.out_dir / "channel_stats.json");
}

void mode_table(const PipelineConfig &cfg)
{
    const fs::path input = fs::is_directory(cfg.input) ? cfg.input / "channel_stats.json" : cfg.input;
    const std::vector<ChannelStats> stats = load_channel_stats(input);
    SummaryTable table{ensemble_summary(stats, cfg.scenario, cfg.height_m)};
    save_summary_csv(table, cfg.out_dir / "summary.csv");
    std::ofstream os(cfg.out_dir / "summary.txt");
    os << format_summary_text(table);
}

void mode_calibrate(const PipelineConfig &cfg)
{
    ArrayCirSet recording;
    if (!cfg.input.empty())
    {
        recording = load_cir_set(cfg.input);
    }
    else
    {
        // No recording given: simulate the direct-connection capture
        const ShapeFunction shape =
            make_default_shape(cfg.bandwidth_hz, cfg.num_taps, 1.0 / cfg.bandwidth_hz);
        Rng rng(cfg.rng_seed);
        recording =
            simulate_calibration_recording(cfg.calib_doppler_hz, cfg.calib_snr_db, shape,
                                           cfg.calib_delay_s, cfg.calib_num_cirs, rng,
                                           cfg.snapshot_spacing_s);
        save_cir_set(recording, cfg.out_dir / "calibration_recording.cir.json");
    }

    const CalibrationResult result = estimate_calibration(recording, cfg.sage.doppler_pad_factor);
    json j;
    j["doppler_hz"] = result.doppler_hz;
    j["delay_s"] = result.delay_s;
    std::ofstream os(cfg.out_dir / "calibration.json");
    if (!os)
        throw std::runtime_error("cannot write calibration.json");
    os << j.dump(2) << '\n';
    save_shape(result.shape, cfg.out_dir / "calibrated_shape.json");
}

json summary_to_json(const SummaryRow &row)
{
    json j;
    j["scenario"] = row.scenario;
    j["height_m"] = row.height_m;
    j["num_channels"] = row.num_channels;
    j["num_clusters"] = row.num_clusters;
    j["r1"] = row.r1;
    j["r2"] = row.r2;
    j["r3"] = row.r3;
    for (const auto &[name, m] : row.metrics)
    {
        json metric;
        metric["count"] = m.count;
        if (m.count > 0)
        {
            metric["mean"] = m.mean;
            metric["std"] = m.stddev;
            metric["median"] = m.median;
        }
        j["metrics"][name] = metric;
    }
    return j;
}

void mode_roundtrip(const PipelineConfig &cfg)
{
    ScenarioStatsConfig storage;
    const ScenarioStatsConfig &stats_cfg = resolve_stats(cfg, storage);
    const HeightStats &configured = stats_cfg.at(cfg.scenario, cfg.height_m);

    const UcaGeometry geometry;
    const ShapeFunction shape =
        make_default_shape(cfg.bandwidth_hz, cfg.num_taps, 1.0 / cfg.bandwidth_hz);
    const CirDimensions dims{cfg.num_snapshots, cfg.num_taps, cfg.snapshot_spacing_s,
                             cfg.bandwidth_hz};

    std::vector<ChannelStats> truth_stats(static_cast<std::size_t>(cfg.num_channels));
    std::vector<ChannelStats> recovered_stats(static_cast<std::size_t>(cfg.num_channels));

    parallel_for(cfg.jobs, cfg.num_channels, [&](int i) {
        Rng rng(cfg.rng_seed + static_cast<std::uint64_t>(i));
        const DrawnChannel channel = draw_scenario_channel(stats_cfg, cfg.scenario, cfg.height_m, rng);
        const std::string base = channel_name(i);

        // Ground-truth side
        const ChannelEstimate truth_est = estimate_from_paths(channel.paths);
        std::vector<int> membership(channel.cluster_of_path.size());
        {
            // estimate_from_paths sorts by power; rebuild the membership in
            // that order by matching original indices
            std::vector<std::size_t> order(channel.paths.size());
            for (std::size_t k = 0; k < order.size(); ++k)
                order[k] = k;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return channel.paths[a].power() > channel.paths[b].power();
            });
            for (std::size_t k = 0; k < order.size(); ++k)
                membership[k] = channel.cluster_of_path[order[k]];
        }
        const Clustering truth_clu = clustering_from_membership(membership, truth_est);
        truth_stats[static_cast<std::size_t>(i)] = cluster_level_stats(truth_clu, truth_est);

        // Recovered side: synthesize, estimate, cluster
        const PerAntennaGains gains = draw_gain_vector(cfg.gain_model, geometry, rng);
        std::vector<PerAntennaGains> per_path(channel.paths.size(), gains);
        SynthesisConfig synth_cfg;
        synth_cfg.noise_power = cfg.noise_power;
        synth_cfg.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(i) + 0x9e3779b97f4a7c15ull;
        const ArrayCirSet cirs =
            synthesize_snapshot(channel.paths, per_path, geometry, shape, dims, synth_cfg);
        if (cfg.write_cir)
            save_cir_set(cirs, cfg.out_dir / (base + ".cir.json"));

        const ChannelEstimate est = sage_estimate(cirs, shape, cfg.sage);
        save_truth(channel, cfg.out_dir / (base + ".truth.csv"));
        save_estimate(est, cfg.out_dir / (base + ".est.csv"), cfg.out_dir / (base + ".est.json"));

        if (est.paths.empty())
        {
            // Noise-only verdict: keep an explicit empty record
            ChannelStats empty;
            empty.cluster_count = 0;
            recovered_stats[static_cast<std::size_t>(i)] = empty;
            return;
        }
        const Clustering clu = select_optimal_clustering(est, cfg.mcd);
        save_clustering(clu, cfg.out_dir / (base + ".clu.csv"), cfg.out_dir / (base + ".clu.json"));
        recovered_stats[static_cast<std::size_t>(i)] = cluster_level_stats(clu, est);
    });

    // Drop noise-only records (cluster_count 0) from the recovered ensemble
    std::vector<ChannelStats> recovered;
    for (const auto &s : recovered_stats)
        if (s.cluster_count > 0)
            recovered.push_back(s);

    save_channel_stats(truth_stats, cfg.out_dir / "truth_stats.json");
    save_channel_stats(recovered, cfg.out_dir / "recovered_stats.json");

    const SummaryRow truth_row = ensemble_summary(truth_stats, cfg.scenario, cfg.height_m);
    SummaryRow recovered_row;
    if (!recovered.empty())
        recovered_row = ensemble_summary(recovered, cfg.scenario, cfg.height_m);

    save_summary_csv({truth_row}, cfg.out_dir / "summary_truth.csv");
    save_summary_csv({recovered_row}, cfg.out_dir / "summary_recovered.csv");
    {
        std::ofstream os(cfg.out_dir / "summary.txt");
        os << "ground truth:\n"
           << format_summary_text({truth_row}) << "\nrecovered:\n"
           << format_summary_text({recovered_row});
    }

    // Comparison report: configured distribution vs truth vs recovered
    auto metric_block = [&](const char *name, const StatPair &conf, const SummaryRow &row) {
        json b;
        b["configured_mean"] = conf.mean;
        b["configured_std"] = conf.second;
        auto it = row.metrics.find(name);
        if (it != row.metrics.end() && it->second.count > 0)
        {
            b["mean"] = it->second.mean;
            b["std"] = it->second.stddev;
            b["abs_error_mean"] = std::abs(it->second.mean - conf.mean);
            b["rel_error_mean"] =
                conf.mean != 0.0 ? std::abs((it->second.mean - conf.mean) / conf.mean) : 0.0;
            b["count"] = it->second.count;
        }
        else
        {
            b["count"] = 0;
        }
        return b;
    };

    json report;
    report["scenario"] = cfg.scenario;
    report["height_m"] = cfg.height_m;
    report["num_channels"] = cfg.num_channels;
    report["configured_ratios"] = {{"r1", configured.r1}, {"r2", configured.r2}, {"r3", configured.r3}};
    report["truth"] = summary_to_json(truth_row);
    report["recovered"] = summary_to_json(recovered_row);

    static const std::vector<std::pair<const char *, StatPair HeightStats::*>> compare = {
        {"composite_delay_spread_log10_s", &HeightStats::composite_delay_spread_log10_s},
        {"composite_azimuth_spread_log10_deg", &HeightStats::composite_azimuth_spread_log10_deg},
        {"cluster_count", &HeightStats::cluster_count},
        {"cluster_k_db", &HeightStats::cluster_k_db},
        {"cluster_delay_spread_log10_s", &HeightStats::cluster_delay_spread_log10_s},
        {"cluster_azimuth_spread_log10_deg", &HeightStats::cluster_azimuth_spread_log10_deg},
        {"cluster_azimuth_offset_deg", &HeightStats::cluster_azimuth_offset_deg},
        {"cluster_power_offset_db", &HeightStats::cluster_power_offset_db},
    };
    for (const auto &[name, member] : compare)
    {
        report["comparison"][name] = {{"truth", metric_block(name, configured.*member, truth_row)},
                                      {"recovered",
                                       metric_block(name, configured.*member, recovered_row)}};
    }
    report["comparison"]["ratios"] = {
        {"truth", {{"r1", truth_row.r1}, {"r2", truth_row.r2}, {"r3", truth_row.r3}}},
        {"recovered",
         {{"r1", recovered_row.r1}, {"r2", recovered_row.r2}, {"r3", recovered_row.r3}}}};

    std::ofstream os(cfg.out_dir / "report.json");
    if (!os)
        throw std::runtime_error("cannot write report.json");
    os << report.dump(2) << '\n';
}

} // namespace

void run_pipeline(const PipelineConfig &cfg)
{
    if (cfg.out_dir.empty())
        throw std::runtime_error("config: field 'out_dir' is required");
    fs::create_directories(cfg.out_dir);
    write_manifest(cfg);

    log_info("mode " + cfg.mode + " -> " + cfg.out_dir.string());
    if (cfg.mode == "synth")
        mode_synth(cfg);
    else if (cfg.mode == "estimate")
        mode_estimate(cfg);
    else if (cfg.mode == "cluster")
        mode_cluster(cfg);
    else if (cfg.mode == "stats")
        mode_stats(cfg);
    else if (cfg.mode == "table")
        mode_table(cfg);
    else if (cfg.mode == "calibrate")
        mode_calibrate(cfg);
    else if (cfg.mode == "roundtrip")
        mode_roundtrip(cfg);
    else
        throw std::runtime_error("config: unknown mode '" + cfg.mode + "'");
}

} // namespace a2g
