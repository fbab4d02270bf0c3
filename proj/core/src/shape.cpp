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

#include "a2g/shape.hpp"
#include "a2g/geometry.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace a2g
{

namespace
{

double sinc(double x)
{
    if (std::abs(x) < 1e-12)
        return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

} // namespace

void validate_shape(const ShapeFunction &shape)
{
    if (shape.taps.empty())
        throw std::invalid_argument("ShapeFunction: taps must be non-empty");
    if (!(shape.tap_spacing_s > 0.0) || !std::isfinite(shape.tap_spacing_s))
        throw std::invalid_argument("ShapeFunction: tap_spacing_s must be positive");
    if (shape.peak_index < 0 || shape.peak_index >= shape.num_taps())
        throw std::invalid_argument("ShapeFunction: peak_index out of range");
    if (!(shape.energy > 0.0))
        throw std::invalid_argument("ShapeFunction: energy must be positive");
    double peak = 0.0;
    for (const auto &t : shape.taps)
    {
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
            throw std::invalid_argument("ShapeFunction: taps must be finite");
        peak = std::max(peak, std::abs(t));
    }
    if (std::abs(peak - 1.0) > 1e-9)
        throw std::invalid_argument("ShapeFunction: peak magnitude must be normalized to 1");
    if (std::abs(std::abs(shape.taps[static_cast<std::size_t>(shape.peak_index)]) - peak) > 1e-12)
        throw std::invalid_argument("ShapeFunction: peak_index does not point at the peak tap");
}

ShapeFunction make_default_shape(double bandwidth_hz, int num_taps, double tap_spacing_s)
{
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
        throw std::invalid_argument("make_default_shape: bandwidth_hz must be positive");
    if (num_taps < 8)
        throw std::invalid_argument("make_default_shape: num_taps must be >= 8");
    if (!(tap_spacing_s > 0.0) || !std::isfinite(tap_spacing_s))
        throw std::invalid_argument("make_default_shape: tap_spacing_s must be positive");

    ShapeFunction shape;
    shape.tap_spacing_s = tap_spacing_s;
    shape.peak_index = num_taps / 2;
    shape.taps.resize(static_cast<std::size_t>(num_taps));

    // Hann window spanning the grid, zero at the farthest symmetric tap. The
    // window tapers the sinc tails to finite support; at Nyquist-rate
    // sampling the sinc nulls land on the grid regardless.
    const int half_span = std::min(shape.peak_index, num_taps - 1 - shape.peak_index);
    for (int k = 0; k < num_taps; ++k)
    {
        const int offset = k - shape.peak_index;
        double w = 0.0;
        if (std::abs(offset) <= half_span)
        {
            const double c = std::cos(0.5 * pi * offset / half_span);
            w = c * c;
        }
        shape.taps[static_cast<std::size_t>(k)] = w * sinc(bandwidth_hz * offset * tap_spacing_s);
    }

    double energy = 0.0;
    for (const auto &t : shape.taps)
        energy += std::norm(t);
    shape.energy = energy * tap_spacing_s;
    return shape;
}

ShapeFunction make_shape_from_taps(std::vector<std::complex<double>> taps, double tap_spacing_s)
{
    if (taps.empty())
        throw std::invalid_argument("make_shape_from_taps: taps must be non-empty");
    if (!(tap_spacing_s > 0.0))
        throw std::invalid_argument("make_shape_from_taps: tap_spacing_s must be positive");

    std::size_t peak = 0;
    double peak_mag = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k)
    {
        const double mag = std::abs(taps[k]);
        if (!std::isfinite(mag))
            throw std::invalid_argument("make_shape_from_taps: taps must be finite");
        if (mag > peak_mag)
        {
            peak_mag = mag;
            peak = k;
        }
    }
    if (peak_mag <= 0.0)
        throw std::invalid_argument("make_shape_from_taps: all taps are zero");

    // Power and phase normalization: peak tap becomes exactly 1 + 0j
    const std::complex<double> scale = 1.0 / taps[peak];
    for (auto &t : taps)
        t *= scale;

    ShapeFunction shape;
    shape.taps = std::move(taps);
    shape.tap_spacing_s = tap_spacing_s;
    shape.peak_index = static_cast<int>(peak);
    double energy = 0.0;
    for (const auto &t : shape.taps)
        energy += std::norm(t);
    shape.energy = energy * tap_spacing_s;
    return shape;
}

std::complex<double> evaluate_shape(const ShapeFunction &shape, double delay_offset_s)
{
    const int length = shape.num_taps();
    const double d = shape.peak_index + delay_offset_s / shape.tap_spacing_s;

    // Outside the tap-grid support
    if (d < -0.5 || d > length - 0.5)
        return {0.0, 0.0};

    // Exact grid hit
    const double nearest = std::round(d);
    if (std::abs(d - nearest) < 1e-9)
    {
        const long k = std::lround(nearest);
        if (k < 0 || k >= length)
            return {0.0, 0.0};
        return shape.taps[static_cast<std::size_t>(k)];
    }

    // Periodic interpolation kernel of an L-point grid, matching zero-padded
    // FFT resampling (Nyquist bin split for even L):
    //   even L: D(x) = sin(pi*x) / (L * tan(pi*x/L))
    //   odd  L: D(x) = sin(pi*x) / (L * sin(pi*x/L))
    // sin(pi*(d-k)) = (-1)^k * sin(pi*d) is hoisted out of the loop.
    const double sin_pd = std::sin(pi * d);
    const bool even = (length % 2) == 0;
    std::complex<double> acc{0.0, 0.0};
    double sign = 1.0;
    for (int k = 0; k < length; ++k)
    {
        const double xk = pi * (d - k) / length;
        const double denom = even ? std::tan(xk) : std::sin(xk);
        acc += shape.taps[static_cast<std::size_t>(k)] * (sign / denom);
        sign = -sign;
    }
    return acc * (sin_pd / length);
}

void sample_shifted_shape(const ShapeFunction &shape, double delay_s, int num_taps,
                          std::complex<double> *out)
{
    for (int k = 0; k < num_taps; ++k)
        out[k] = evaluate_shape(shape, k * shape.tap_spacing_s - delay_s);
}

void save_shape(const ShapeFunction &shape, const std::filesystem::path &path)
{
    nlohmann::json j;
    j["tap_spacing_s"] = shape.tap_spacing_s;
    j["peak_index"] = shape.peak_index;
    auto &taps = j["taps"];
    taps = nlohmann::json::array();
    for (const auto &t : shape.taps)
        taps.push_back({t.real(), t.imag()});

    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_shape: cannot open " + path.string());
    os << j.dump(2) << '\n';
}

ShapeFunction load_shape(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("load_shape: cannot open " + path.string());
    nlohmann::json j;
    is >> j;

    std::vector<std::complex<double>> taps;
    for (const auto &t : j.at("taps"))
        taps.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());

    ShapeFunction shape = make_shape_from_taps(std::move(taps), j.at("tap_spacing_s").get<double>());
    // Peak location is recomputed by make_shape_from_taps; cross-check the file
    if (j.contains("peak_index") && j["peak_index"].get<int>() != shape.peak_index)
        throw std::runtime_error("load_shape: peak_index in file does not match tap data");
    return shape;
}

} // namespace a2g
