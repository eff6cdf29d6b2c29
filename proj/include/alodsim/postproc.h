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


#ifndef ALODSIM_POSTPROC_H_
#define ALODSIM_POSTPROC_H_

#include <span>
#include <utility>
#include <vector>

#include "alodsim/spatializer.h"

namespace alodsim {

// Bin k (of n/2+1 real-FFT bins) becomes the root mean square of the bins
// within +-1/6 octave of its frequency.
std::vector<double> ThirdOctaveSmooth(std::span<const double> magnitude,
                                      double sample_rate);

// Power-domain variant: mean of the bins within +-1/6 octave.
std::vector<double> SmoothPower(std::span<const double> power);

// 10 log10(a / b) for two smoothed power spectra sharing an n-point grid
// (n/2+1 bins), sampled at 48 points per octave over [lo_hz, hi_hz] with
// linear interpolation between bins.
std::vector<double> LogGridDifferenceDb(std::span<const double> power_a,
                                        std::span<const double> power_b,
                                        double sample_rate, double lo_hz,
                                        double hi_hz);

// Channel-averaged power spectrum on an n-point grid.
std::vector<double> AveragePowerSpectrum(const ImpulseResponse& ir,
                                         std::size_t n);

struct SpectralMatchReport {
  double residual_mean_db = 0.0;  // mean |dB| over the band, after matching
  double residual_rms_db = 0.0;
  double residual_max_db = 0.0;
  double residual_before_db = 0.0;  // mean |dB| before matching
  std::pair<double, double> band_range{100.0, 16000.0};
  std::vector<double> filter_taps;
  bool clamped = false;  // the +-clamp limited the correction somewhere
};

struct SpectralMatchOptions {
  double lo_hz = 100.0;
  double hi_hz = 16000.0;
  double clamp_db = 12.0;
  std::size_t filter_taps = 2048;
};

struct SpectralMatchResult {
  ImpulseResponse corrected;
  std::vector<double> filter;
  SpectralMatchReport report;
};

// One minimum-phase correction filter, applied to every channel, that moves
// the smoothed average spectrum of `sim` onto that of `ref`.
SpectralMatchResult MatchSpectrum(const ImpulseResponse& sim,
                                  const ImpulseResponse& ref,
                                  const SpectralMatchOptions& options = {});

}  // namespace alodsim

#endif  // ALODSIM_POSTPROC_H_
