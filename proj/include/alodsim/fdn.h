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


#ifndef ALODSIM_FDN_H_
#define ALODSIM_FDN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "alodsim/common.h"
#include "alodsim/ism.h"
#include "alodsim/rng.h"
#include "alodsim/scene.h"

namespace alodsim {

inline constexpr std::size_t kDefaultFdnLines = 12;

struct FdnConfig {
  std::vector<std::size_t> delays;        // samples
  std::vector<double> feedback_matrix;    // row-major n x n, orthogonal
  std::vector<BandArray> line_gains;      // per line, per band
  std::vector<Vec3> output_directions;    // unit, world frame
  BandArray t60{};                        // seconds per band
  double onset = 0.0;                     // seconds
  // RMS amplitude per sample of the summed line outputs at the onset.
  double input_gain = 1.0;
  // Relative level per band applied on top of input_gain.
  BandArray band_level = UniformBands(1.0);
  // Optional per-line prefill multiplier and per-line decay times used for
  // the prefill envelope (both default to uniform / t60).
  std::vector<double> prefill_scale;
  std::vector<BandArray> line_t60;
  double sample_rate = kDefaultSampleRate;

  std::size_t n_lines() const { return delays.size(); }
  // Whether all bands share one decay and level (single broadband run).
  bool IsBroadband() const;
};

struct DualSlopeConfig {
  FdnConfig primary;
  FdnConfig secondary;
  double onset_level_db = -40.0;
};

// Line gain for a delay of d samples and decay time t60.
double LineGain(double delay_samples, double sample_rate, double t60);

// Seeded Haar-random orthogonal matrix (row-major).
std::vector<double> RandomOrthogonal(std::size_t n, std::uint64_t seed);

// Quasi-uniform unit vectors (Fibonacci lattice).
std::vector<Vec3> FibonacciSphere(std::size_t n);

FdnConfig DesignFdn(const RoomSpec& room, const DecayTarget& target,
                    double sample_rate, double speed_of_sound = 343.0,
                    std::uint64_t seed = 0,
                    std::size_t n_lines = kDefaultFdnLines);

// Single-band recurrence. The delay lines start prefilled with noise that
// follows the decay envelope, so the output is dense from its first sample.
class FdnProcessor {
 public:
  FdnProcessor(const FdnConfig& config, std::size_t band);

  // Fills line i so that its k-th output sample is sigma * exp decay * N(0,1).
  void Prefill(double sigma_per_line, const CounterRng& rng);
  // Writes one output sample per line into `out` (size n_lines).
  void Step(std::span<double> out);
  // Sum of squares of everything stored in the delay lines.
  double StoredEnergy() const;

 private:
  std::size_t n_;
  std::vector<std::size_t> delays_;
  std::vector<double> matrix_;
  std::vector<double> gains_;
  std::vector<double> decay_per_sample_;
  std::vector<double> scale_;
  std::vector<std::vector<double>> lines_;
  std::vector<std::size_t> heads_;
  std::vector<double> outputs_;
};

// One stream per line, starting at the onset and ending at num_samples.
std::vector<TailStream> RunFdn(const FdnConfig& config, std::size_t num_samples,
                               const CounterRng& rng);

// Asymptote intersection: squared secondary/primary input gain ratio placing
// the crossing of the two decay asymptotes at level_db on an EDC normalized
// to the primary tail energy.
double DualSlopeGainRatio(double t60_primary, double t60_secondary,
                          double level_db);

// Secondary FDN for target.second_slope. `tail_offset_db` is the primary
// tail's share of total IR energy in dB (<= 0), so the knee lands at
// onset_level_db on the fully normalized EDC.
DualSlopeConfig DesignDualSlope(const RoomSpec& room, const DecayTarget& target,
                                double sample_rate, double speed_of_sound,
                                const FdnConfig& primary,
                                double tail_offset_db = 0.0,
                                std::uint64_t seed = 0);

struct SpliceReport {
  double onset = 0.0;          // seconds
  double window = 0.0;         // seconds
  BandArray early_rate{};      // energy per second before the junction
  BandArray target_rate{};     // tail energy per second at the junction
  bool analytic_fallback = false;
};

// Sets config.onset, input_gain and band_level so the energy rate of early
// plus tail is continuous at the junction.
SpliceReport CalibrateSplice(const SpatialIR& early, double onset,
                             const RoomSpec& room, double speed_of_sound,
                             FdnConfig& config);

// Appends tail streams to the early IR; taps are untouched.
SpatialIR Splice(SpatialIR early, std::vector<TailStream> tail, double onset);

// Tail onset for a profile: the first arrival of the first order the ISM
// does not render, or the direct delay when no images are rendered.
double TailOnset(const RoomSpec& room, const Vec3& source_pos,
                 const Vec3& receiver_pos, const RenderingProfile& profile,
                 double speed_of_sound);

}  // namespace alodsim

#endif  // ALODSIM_FDN_H_
