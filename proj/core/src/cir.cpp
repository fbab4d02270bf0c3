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

#include "a2g/cir.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "CIR binary container assumes a little-endian host");

namespace a2g
{

void ArrayCirSet::validate() const
{
    if (num_antennas < 1 || num_snapshots < 1 || num_taps < 1)
        throw std::invalid_argument("ArrayCirSet: dimensions must be positive");
    if (geometry && geometry->num_elements() != num_antennas)
        throw std::invalid_argument("ArrayCirSet: geometry element count does not match num_antennas");
    if (!(snapshot_spacing_s > 0.0))
        throw std::invalid_argument("ArrayCirSet: snapshot_spacing_s must be positive");
    if (!(tap_spacing_s > 0.0))
        throw std::invalid_argument("ArrayCirSet: tap_spacing_s must be positive");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("ArrayCirSet: bandwidth_hz must be positive");
    const std::size_t expected = static_cast<std::size_t>(num_antennas) * num_snapshots * num_taps;
    if (data.size() != expected)
        throw std::invalid_argument("ArrayCirSet: tensor size does not match metadata");
    for (const auto &v : data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("ArrayCirSet: samples must be finite");
}

void save_cir_set(const ArrayCirSet &cirs, const std::filesystem::path &json_path,
                  const std::string &shape_ref)
{
    cirs.validate();

    // channel_0000.cir.json -> channel_0000.bin (strip the full suffix)
    std::string stem = json_path.filename().string();
    for (const char *suffix : {".json", ".cir"})
    {
        const std::size_t len = std::strlen(suffix);
        if (stem.size() > len && stem.compare(stem.size() - len, len, suffix) == 0)
            stem.resize(stem.size() - len);
    }
    const std::filesystem::path bin_path = json_path.parent_path() / (stem + ".bin");

    nlohmann::json j;
    if (cirs.geometry)
    {
        j["geometry"] = {{"num_elements", cirs.geometry->num_elements()},
                         {"radius_m", cirs.geometry->radius_m()},
                         {"carrier_hz", cirs.geometry->carrier_hz()}};
    }
    else
    {
        j["geometry"] = nullptr;
    }
    j["num_antennas"] = cirs.num_antennas;
    j["num_snapshots"] = cirs.num_snapshots;
    j["num_taps"] = cirs.num_taps;
    j["bandwidth_hz"] = cirs.bandwidth_hz;
    j["tap_spacing_s"] = cirs.tap_spacing_s;
    j["snapshot_spacing_s"] = cirs.snapshot_spacing_s;
    j["shape"] = shape_ref;
    j["data_file"] = bin_path.filename().string();

    std::ofstream os(json_path);
    if (!os)
        throw std::runtime_error("save_cir_set: cannot open " + json_path.string());
    os << j.dump(2) << '\n';

    std::ofstream ob(bin_path, std::ios::binary);
    if (!ob)
        throw std::runtime_error("save_cir_set: cannot open " + bin_path.string());
    ob.write(reinterpret_cast<const char *>(cirs.data.data()),
             static_cast<std::streamsize>(cirs.data.size() * sizeof(std::complex<double>)));
    if (!ob)
        throw std::runtime_error("save_cir_set: short write to " + bin_path.string());
}

namespace
{

nlohmann::json read_container(const std::filesystem::path &json_path)
{
    std::ifstream is(json_path);
    if (!is)
        throw std::runtime_error("load_cir_set: cannot open " + json_path.string());
    nlohmann::json j;
    is >> j;
    return j;
}

} // namespace

ArrayCirSet load_cir_set(const std::filesystem::path &json_path)
{
    const nlohmann::json j = read_container(json_path);

    ArrayCirSet cirs;
    if (j.contains("geometry") && !j["geometry"].is_null())
    {
        const auto &g = j["geometry"];
        cirs.geometry = UcaGeometry(g.at("num_elements").get<int>(), g.at("radius_m").get<double>(),
                                    g.at("carrier_hz").get<double>());
    }
    cirs.num_antennas = j.at("num_antennas").get<int>();
    cirs.num_snapshots = j.at("num_snapshots").get<int>();
    cirs.num_taps = j.at("num_taps").get<int>();
    cirs.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    cirs.tap_spacing_s = j.at("tap_spacing_s").get<double>();
    cirs.snapshot_spacing_s = j.at("snapshot_spacing_s").get<double>();

    const std::filesystem::path bin_path =
        json_path.parent_path() / j.at("data_file").get<std::string>();
    std::ifstream ib(bin_path, std::ios::binary);
    if (!ib)
        throw std::runtime_error("load_cir_set: cannot open " + bin_path.string());

    const std::size_t count =
        static_cast<std::size_t>(cirs.num_antennas) * cirs.num_snapshots * cirs.num_taps;
    cirs.data.resize(count);
    ib.read(reinterpret_cast<char *>(cirs.data.data()),
            static_cast<std::streamsize>(count * sizeof(std::complex<double>)));
    if (static_cast<std::size_t>(ib.gcount()) != count * sizeof(std::complex<double>))
        throw std::runtime_error("load_cir_set: binary size does not match metadata in " +
                                 bin_path.string());

    cirs.validate();
    return cirs;
}

std::string cir_set_shape_ref(const std::filesystem::path &json_path)
{
    return read_container(json_path).at("shape").get<std::string>();
}

} // namespace a2g
