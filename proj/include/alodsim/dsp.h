// Copyright 2026 The alodsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ALODSIM_DSP_H_
#define ALODSIM_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "alodsim/common.h"

namespace alodsim {

using Complex = std::complex<double>;

std::size_t NextPow2(std::size_t n);

// Real-input FFT of `x` zero-padded (or truncated) to `n` points; returns the
// n/2+1 non-negative frequency bins.
std::vector<Complex> Rfft(std::span<const double> x, std::size_t n);

// Inverse of Rfft, normalized so Irfft(Rfft(x, n), n) == x.
std::vector<double> Irfft(std::span<const Complex> spectrum, std::size_t n);

// Linear convolution via FFT overlap-add. Output length is
// a.size() + b.size() - 1 (empty if either input is empty).
std::vector<double> Convolve(std::span<const double> a,
                             std::span<const double> b);

// Minimum-phase sequence (length n) whose magnitude response is `magnitude`
// (n/2+1 bins), via the folded real cepstrum. Magnitudes are floored at
// `floor_rel` times their maximum before taking the log.
std::vector<double> MinimumPhase(std::span<const double> magnitude,
                                 std::size_t n, double floor_rel = 1e-9);

// Real cepstrum of x computed with an n-point FFT.
std::vector<double> RealCepstrum(std::span<const double> x, std::size_t n);

// |analytic signal| of x (Hilbert envelope).
std::vector<double> HilbertEnvelope(std::span<const double> x);

// Complementary octave-band weights on the kBandCenters grid. Band b's weight
// rises over one octave centred on its lower edge and falls over one octave
// centred on its upper edge (raised cosine in log-frequency); the weights of
// all bands sum to exactly one at every frequency. Band 0 extends to DC and
// the top band to Nyquist.
double OctaveBandWeight(std::size_t band, double frequency_hz);

// Zero-phase filtering of several band signals followed by summation:
// out = sum_b W_b * bands[b]. All inputs must share one length.
std::vector<double> SumBandFiltered(
    std::span<const std::vector<double>> bands, double sample_rate);

// Zero-phase octave-band filter of one signal.
std::vector<double> OctaveBandFilter(std::span<const double> x,
                                     std::size_t band, double sample_rate);

}  // namespace alodsim

#endif  // ALODSIM_DSP_H_
