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

#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace a2g::detail
{

namespace
{
std::mutex &plan_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(std::size_t length) : length_(length)
{
    if (length == 0)
        throw std::invalid_argument("Fft: length must be positive");

    // Throwaway buffer for planning; FFTW_UNALIGNED lets the plan execute on
    // arbitrary caller buffers later.
    std::vector<std::complex<double>> scratch(length);
    auto *ptr = reinterpret_cast<fftw_complex *>(scratch.data());

    std::lock_guard<std::mutex> lock(plan_mutex());
    forward_plan_ = fftw_plan_dft_1d(static_cast<int>(length), ptr, ptr, FFTW_FORWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_plan_ = fftw_plan_dft_1d(static_cast<int>(length), ptr, ptr, FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward_plan_ || !inverse_plan_)
        throw std::runtime_error("Fft: FFTW planning failed");
}

Fft::~Fft()
{
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fft::forward(const std::complex<double> *in, std::complex<double> *out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                     reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(in)),
                     reinterpret_cast<fftw_complex *>(out));
}

void Fft::inverse(const std::complex<double> *in, std::complex<double> *out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_),
                     reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(in)),
                     reinterpret_cast<fftw_complex *>(out));
}

} // namespace a2g::detail
