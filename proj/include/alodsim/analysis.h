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


#ifndef ALODSIM_ANALYSIS_H_
#define ALODSIM_ANALYSIS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "alodsim/common.h"
#include "alodsim/scene.h"
#include "alodsim/spatializer.h"

namespace alodsim {

inline constexpr double kEdcFloorDb = -120.0;

struct EdcCurve {
  std::vector<double> values;  // dB, 0 at t = 0, floored at kEdcFloorDb
  double sample_rate = kDefaultSampleRate;
};

// Backward-integrated energy of one channel.
EdcCurve SchroederEdc(std::span<const double> ir, double sample_rate);
// Same, from an energy sequence (e.g. squared samples summed over channels).
EdcCurve SchroederEdcFromEnergy(std::span<const double> energy,
                                double sample_rate);
// Sum over channels of h^2.
std::vector<double> ChannelEnergy(const ImpulseResponse& ir);

struct LineFit {
  double slope = 0.0;      // dB per second
  double intercept = 0.0;  // dB
  double mse = 0.0;        // dB^2
};

// Least-squares decay line over the EDC span [top_db, bottom_db].
LineFit FitDecayLine(const EdcCurve& edc, double top_db, double bottom_db);

// 60 / |slope| of the fit over [-5, -35] dB. Throws kInsufficientDecay when
// the EDC does not reach -35 dB.
double T30(const EdcCurve& edc);
// T30 of each octave band of one channel.
BandArray T30Bands(std::span<const double> ir, double sample_rate);

struct NedProfile {
  std::vector<double> times;   // window centres, seconds
  std::vector<double> values;  // 1 for Gaussian noise
  double window = 0.025;
};

NedProfile Ned(std::span<const double> ir, double sample_rate,
               double window = 0.025, double hop = 0.001);

struct DualSlopeFit {
  double slope1 = 0.0;  // dB/s
  double slope2 = 0.0;  // dB/s
  double knee_time = 0.0;
  double knee_level = 0.0;
  double residual = 0.0;         // dB^2, two segments
  double single_residual = 0.0;  // dB^2, one line over the same span
};

// Two independent line fits split at a knee level searched in 0.5 dB steps
// over the EDC span [top_db, bottom_db]. The EDC must cover >= 50 dB.
DualSlopeFit FitDualSlope(const EdcCurve& edc, double top_db = -5.0,
                          double bottom_db = -70.0);

// Mean |difference| in dB between third-octave-smoothed magnitude spectra,
// evaluated on a log-frequency grid (48 points per octave) over [lo, hi].
double SpectralDeviation(std::span<const double> a, std::span<const double> b,
                         double sample_rate, double lo_hz = 100.0,
                         double hi_hz = 16000.0);
// Multichannel form using channel-averaged power spectra.
double SpectralDeviation(const ImpulseResponse& a, const ImpulseResponse& b,
                         double lo_hz = 100.0, double hi_hz = 16000.0);

double MeanFreePath(const RoomSpec& room);

// First sample reaching -20 dB re the absolute peak.
std::size_t FirstArrival(std::span<const double> ir);

// Direct (window centred on the first arrival) to reverberant energy, dB.
// Returns +120 when there is no energy outside the window.
double Drr(std::span<const double> ir, double sample_rate,
           double direct_window = 0.0025);

// Energy-rate step across a junction: 10 log10(E[t, t+w] / E[t-w, t])
// corrected by the decay expected over w for the given T60. 0 dB means the
// decay continues smoothly.
double JunctionJumpDb(std::span<const double> energy, double sample_rate,
                      double junction, double window, double t60);

// Deviation (dB) of the EDC at `junction` from the straight line joining
// the EDC at junction - window and junction + window.
double EdcKinkDb(const EdcCurve& edc, double junction, double window);

struct MetricReport {
  std::map<std::string, double> scalars;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> curves;
};

}  // namespace alodsim

#endif  // ALODSIM_ANALYSIS_H_
