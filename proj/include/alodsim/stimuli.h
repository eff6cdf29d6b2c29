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


#ifndef ALODSIM_STIMULI_H_
#define ALODSIM_STIMULI_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "alodsim/common.h"
#include "alodsim/rng.h"
#include "alodsim/spatializer.h"

namespace alodsim {

enum class StimulusKind { kPinkPulse, kPinkPulseVariant, kEss, kExternal };

std::string_view StimulusKindName(StimulusKind kind);

inline constexpr std::size_t kNumStimulusBands = 10;
// Nominal centres 31.5 Hz .. 16 kHz; exact values are 1000 * 2^(k - 5).
double StimulusBandCenter(std::size_t band);

using BandLevels = std::array<double, kNumStimulusBands>;

// Throws kValidation unless every entry is -6, 0 or +6.
void ValidateBandLevels(const BandLevels& levels);
BandLevels RandomBandLevels(CounterRng& rng);

struct Stimulus {
  std::vector<double> samples;
  double sample_rate = kDefaultSampleRate;
  StimulusKind kind = StimulusKind::kExternal;
  BandLevels levels{};  // variants only
  // Decay rate (1/s) of the exponential gain ramp enforced on pink pulses;
  // 0 when the raw construction already met the envelope target.
  double ramp_rate = 0.0;
  // Factor applied to reach a 0 dBFS peak.
  double normalization_gain = 1.0;
};

// Throws kValidation if any sample is non-finite or |x| > 1.
void ValidateStimulus(const Stimulus& s);

// Minimum-phase pink pulse (1/sqrt(f) above 50 Hz, raised-cosine rolloff over
// the octave below). An exponential ramp is applied, with the spectrum
// pre-compensated for it, when needed to put the envelope at or below
// -60 dB by 36 ms.
Stimulus PinkPulse(double sample_rate = kDefaultSampleRate,
                   double duration = 0.5);
Stimulus PinkPulseVariant(const BandLevels& levels,
                          double sample_rate = kDefaultSampleRate,
                          double duration = 0.5);

// Envelope in dB: 10 log10 of the 1 ms centred moving average of the squared
// Hilbert envelope.
std::vector<double> EnvelopeDb(std::span<const double> x, double sample_rate,
                               double smoothing = 0.001);

// Per-channel linear convolution. Throws kRateMismatch.
ImpulseResponse ConvolveStimulus(const Stimulus& stimulus,
                                 const ImpulseResponse& ir);

struct EssParams {
  double f1 = 100.0;
  double f2 = 22050.0;
  double duration = 3.2;
  double sample_rate = kDefaultSampleRate;
  double fade = 0.01;  // raised-cosine fade-in/out, seconds
};

// Sweep phase (radians) at time t.
double EssPhase(const EssParams& p, double t);
Stimulus EssGenerate(const EssParams& p = {});
// Time-reversed sweep with a -6 dB/octave amplitude compensation, scaled so
// that the sweep convolved with it peaks at 1.
std::vector<double> EssInverseFilter(const Stimulus& sweep, const EssParams& p);
// Full linear deconvolution; the impulse of an identity system sits at index
// sweep length - 1.
std::vector<double> EssDeconvolveFull(std::span<const double> recording,
                                      const Stimulus& sweep,
                                      const EssParams& p);
// Causal part (starting at the identity-system peak), one channel per
// recording channel.
ImpulseResponse EssDeconvolve(const ImpulseResponse& recording,
                              const Stimulus& sweep, const EssParams& p);
// Peak versus the largest magnitude outside +-guard around it, dB.
double PeakToArtifactDb(std::span<const double> h, double sample_rate,
                        double guard = 0.01);

}  // namespace alodsim

#endif  // ALODSIM_STIMULI_H_
