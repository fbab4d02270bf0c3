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

#ifndef A2G_FFT_HPP
#define A2G_FFT_HPP

#include <complex>
#include <cstddef>

namespace a2g::detail
{

// Complex 1-D FFT of a fixed length, backed by FFTW. Plan creation is
// serialized behind a global mutex (FFTW planning is not thread safe);
// execution on distinct buffers is safe from multiple threads. Plans use
// FFTW_ESTIMATE so results are reproducible run to run.
class Fft
{
  public:
    explicit Fft(std::size_t length);
    ~Fft();

    Fft(const Fft &) = delete;
    Fft &operator=(const Fft &) = delete;

    std::size_t length() const { return length_; }

    // out = DFT(in), exp(-j 2 pi k n / N) convention, unnormalized
    void forward(const std::complex<double> *in, std::complex<double> *out) const;
    // out = IDFT(in), unnormalized (scale by 1/N for a round trip)
    void inverse(const std::complex<double> *in, std::complex<double> *out) const;

  private:
    std::size_t length_;
    void *forward_plan_;
    void *inverse_plan_;
};

} // namespace a2g::detail

#endif
