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


#include "alodsim/fdn.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "alodsim/dsp.h"

namespace alodsim {
namespace {

constexpr double kLn1e6 = 13.815510557964274;  // ln(10^6): 60 dB in energy

double EnergyDecayRate(double t60) { return kLn1e6 / t60; }

double TapEnergy(const ReflectionTap& tap, std::size_t band) {
  double e = tap.amplitude[band] * tap.amplitude[band];
  if (tap.diffuse_burst) {
    e += tap.diffuse_burst->amplitude[band] * tap.diffuse_burst->amplitude[band];
  }
  return e;
}

}  // namespace

bool FdnConfig::IsBroadband() const {
  auto uniform = [](const BandArray& a) {
    for (std::size_t b = 1; b < kNumBands; ++b) {
      if (a[b] != a[0]) return false;
    }
    return true;
  };
  if (!uniform(t60) || !uniform(band_level)) return false;
  for (const BandArray& g : line_gains) {
    if (!uniform(g)) return false;
  }
  for (const BandArray& t : line_t60) {
    if (!uniform(t)) return false;
  }
  return true;
}

double LineGain(double delay_samples, double sample_rate, double t60) {
  if (!std::isfinite(t60)) return 1.0;
  return std::pow(10.0, -3.0 * delay_samples / (sample_rate * t60));
}

std::vector<double> RandomOrthogonal(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0x0f0f);
  Eigen::MatrixXd g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.Gaussian();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = q(i, j);
  }
  return out;
}

std::vector<Vec3> FibonacciSphere(std::size_t n) {
  std::vector<Vec3> out;
  out.reserve(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return out;
}

FdnConfig DesignFdn(const RoomSpec& room, const DecayTarget& target,
                    double sample_rate, double speed_of_sound,
                    std::uint64_t seed, std::size_t n_lines) {
  if (n_lines < 1) throw Error(ErrorKind::kInvalidArgument, "n_lines must be >= 1");
  for (double t : target.t30) {
    if (!(t > 0.0)) throw Error(ErrorKind::kInfeasible, "decay target must be > 0");
  }
  const Vec3& d = room.dims;
  const std::vector<double> paths = {
      d.x, d.y, d.z,
      std::hypot(d.x, d.y), std::hypot(d.x, d.z), std::hypot(d.y, d.z),
      std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z)};
  std::vector<double> lengths;
  for (std::size_t i = 0; i < n_lines; ++i) {
    const double scale = 1.0 + 0.5 * static_cast<double>(i / paths.size());
    lengths.push_back(paths[i % paths.size()] * scale);
  }
  const double longest = *std::max_element(lengths.begin(), lengths.end());
  if (longest * sample_rate / speed_of_sound < 2.0 * n_lines) {
    throw Error(ErrorKind::kDegenerateGeometry,
                "room too small for distinct FDN delays");
  }

  FdnConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.t60 = target.t30;
  for (double len : lengths) {
    auto delay = static_cast<std::size_t>(
        std::max(1L, std::lround(len * sample_rate / speed_of_sound)));
    // Walk upwards to the next value coprime with all previous delays.
    for (;;) {
      bool ok = true;
      for (std::size_t prev : cfg.delays) ok = ok && std::gcd(prev, delay) == 1;
      if (ok) break;
      ++delay;
    }
    cfg.delays.push_back(delay);
  }
  for (std::size_t delay : cfg.delays) {
    BandArray g;
    for (std::size_t b = 0; b < kNumBands; ++b) {
      g[b] = LineGain(static_cast<double>(delay), sample_rate, target.t30[b]);
    }
    cfg.line_gains.push_back(g);
  }
  cfg.feedback_matrix = RandomOrthogonal(n_lines, seed);
  cfg.output_directions = FibonacciSphere(n_lines);
  return cfg;
}

FdnProcessor::FdnProcessor(const FdnConfig& config, std::size_t band)
    : n_(config.n_lines()),
      delays_(config.delays),
      matrix_(config.feedback_matrix),
      gains_(n_),
      decay_per_sample_(n_),
      scale_(n_, 1.0),
      lines_(n_),
      heads_(n_, 0),
      outputs_(n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    gains_[i] = config.line_gains[i][band];
    const double t60 =
        config.line_t60.empty() ? config.t60[band] : config.line_t60[i][band];
    decay_per_sample_[i] = LineGain(1.0, config.sample_rate, t60);
    scale_[i] = config.prefill_scale.empty() ? 1.0 : config.prefill_scale[i];
    lines_[i].assign(delays_[i], 0.0);
  }
}

void FdnProcessor::Prefill(double sigma_per_line, const CounterRng& rng) {
  for (std::size_t i = 0; i < n_; ++i) {
    CounterRng r = rng.Substream(i);
    double env = sigma_per_line * scale_[i];
    for (std::size_t k = 0; k < delays_[i]; ++k) {
      lines_[i][k] = env * r.Gaussian();
      env *= decay_per_sample_[i];
    }
    heads_[i] = 0;
  }
}

void FdnProcessor::Step(std::span<double> out) {
  for (std::size_t j = 0; j < n_; ++j) outputs_[j] = lines_[j][heads_[j]];
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = &matrix_[i * n_];
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += row[j] * outputs_[j];
    lines_[i][heads_[i]] = gains_[i] * acc;
    if (++heads_[i] == delays_[i]) heads_[i] = 0;
  }
  std::copy(outputs_.begin(), outputs_.end(), out.begin());
}

double FdnProcessor::StoredEnergy() const {
  double e = 0.0;
  for (const auto& line : lines_) {
    for (double v : line) e += v * v;
  }
  return e;
}

std::vector<TailStream> RunFdn(const FdnConfig& config, std::size_t num_samples,
                               const CounterRng& rng) {
  const std::size_t n = config.n_lines();
  const auto start = static_cast<std::size_t>(
      std::max(0L, std::lround(config.onset * config.sample_rate)));
  if (start >= num_samples) {
    throw Error(ErrorKind::kInvalidArgument, "duration must exceed tail onset");
  }
  const std::size_t len = num_samples - start;
  std::vector<TailStream> streams(n);
  for (std::size_t i = 0; i < n; ++i) {
    streams[i].direction = config.output_directions[i];
    streams[i].start = start;
    streams[i].samples.assign(len, 0.0);
  }
  if (config.input_gain == 0.0) return streams;

  const double per_line = config.input_gain / std::sqrt(static_cast<double>(n));
  std::vector<double> frame(n);
  auto run_band = [&](std::size_t band, std::vector<std::vector<double>>& out) {
    FdnProcessor proc(config, band);
    proc.Prefill(per_line * config.band_level[band], rng);
    for (std::size_t t = 0; t < len; ++t) {
      proc.Step(frame);
      for (std::size_t i = 0; i < n; ++i) out[i][t] = frame[i];
    }
  };

  if (config.IsBroadband()) {
    std::vector<std::vector<double>> out(n, std::vector<double>(len));
    run_band(0, out);
    for (std::size_t i = 0; i < n; ++i) streams[i].samples = std::move(out[i]);
    return streams;
  }
  std::vector<std::vector<double>> out(n, std::vector<double>(len));
  for (std::size_t b = 0; b < kNumBands; ++b) {
    if (config.band_level[b] == 0.0) continue;
    run_band(b, out);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> filtered =
          OctaveBandFilter(out[i], b, config.sample_rate);
      for (std::size_t t = 0; t < len; ++t) streams[i].samples[t] += filtered[t];
    }
  }
  return streams;
}

double DualSlopeGainRatio(double t60_primary, double t60_secondary,
                          double level_db) {
  const double a1 = EnergyDecayRate(t60_primary);
  const double a2 = EnergyDecayRate(t60_secondary);
  return (a2 / a1) * std::pow(10.0, (level_db / 10.0) * (1.0 - a2 / a1));
}

DualSlopeConfig DesignDualSlope(const RoomSpec& room, const DecayTarget& target,
                                double sample_rate, double speed_of_sound,
                                const FdnConfig& primary, double tail_offset_db,
                                std::uint64_t seed) {
  if (!target.second_slope) {
    throw Error(ErrorKind::kInvalidArgument, "decay target has no second slope");
  }
  const SecondSlope& s = *target.second_slope;
  const double t1 = BandMean(primary.t60);
  if (!(s.t30 > t1 * (1.0 + 1e-9))) {
    throw Error(ErrorKind::kInvalidArgument,
                "second slope must decay slower than the primary");
  }
  if (!(s.onset_level_db < -20.0)) {
    throw Error(ErrorKind::kInvalidArgument, "onset_level_db must be < -20 dB");
  }
  DualSlopeConfig out;
  out.primary = primary;
  out.onset_level_db = s.onset_level_db;
  out.secondary = DesignFdn(room, DecayTarget::Broadband(s.t30), sample_rate,
                            speed_of_sound, seed ^ 0x5ec0dULL,
                            primary.n_lines());
  out.secondary.onset = primary.onset;
  out.secondary.band_level = primary.band_level;
  const double level = s.onset_level_db - std::min(0.0, tail_offset_db);
  out.secondary.input_gain =
      primary.input_gain * std::sqrt(DualSlopeGainRatio(t1, s.t30, level));
  return out;
}

SpliceReport CalibrateSplice(const SpatialIR& early, double onset,
                             const RoomSpec& room, double speed_of_sound,
                             FdnConfig& config) {
  SpliceReport rep;
  rep.onset = onset;
  config.onset = onset;
  const double t_first = early.taps.empty() ? onset : early.taps.front().delay;
  const double w = std::min(0.010, 0.5 * (onset - t_first));
  rep.window = w;

  BandArray before{};
  BandArray after{};
  if (w > 0.0) {
    for (const ReflectionTap& tap : early.taps) {
      const bool in_before = tap.delay >= onset - w && tap.delay < onset;
      const bool in_after = tap.delay >= onset && tap.delay < onset + w;
      for (std::size_t b = 0; b < kNumBands; ++b) {
        if (in_before) before[b] += TapEnergy(tap, b);
        if (in_after) after[b] += TapEnergy(tap, b);
      }
    }
  }
  rep.analytic_fallback = !(w > 0.0) || BandMean(before) <= 0.0;

  BandArray r0{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    const double a = EnergyDecayRate(config.t60[b]);
    if (rep.analytic_fallback) {
      // Diffuse-field image density: 4 pi c / V images per second per unit
      // 1/r^2 energy, weighted by the direct sound's level.
      double level = 1.0;
      if (!early.taps.empty()) {
        const ReflectionTap& d = early.taps.front();
        const double r = d.delay * speed_of_sound;
        level = TapEnergy(d, b) * r * r;
      }
      rep.early_rate[b] = 4.0 * kPi * speed_of_sound / BoxVolume(room) * level *
                          std::exp(-a * onset);
      r0[b] = rep.early_rate[b];
    } else {
      rep.early_rate[b] = before[b] / w;
      const double target_energy = before[b] * std::exp(-a * w);
      const double tail_energy = std::max(target_energy - after[b],
                                          0.25 * target_energy);
      r0[b] = tail_energy * a / (1.0 - std::exp(-a * w));
    }
    rep.target_rate[b] = r0[b];
  }
  const double mean = BandMean(r0);
  config.input_gain = std::sqrt(mean / config.sample_rate);
  for (std::size_t b = 0; b < kNumBands; ++b) {
    config.band_level[b] = mean > 0.0 ? std::sqrt(r0[b] / mean) : 0.0;
  }
  return rep;
}

SpatialIR Splice(SpatialIR early, std::vector<TailStream> tail, double onset) {
  early.tail_onset = onset;
  for (TailStream& s : tail) {
    early.length = std::max(early.length, s.start + s.samples.size());
    early.tail.push_back(std::move(s));
  }
  return early;
}

double TailOnset(const RoomSpec& room, const Vec3& source_pos,
                 const Vec3& receiver_pos, const RenderingProfile& profile,
                 double speed_of_sound) {
  const int order = profile.anechoic ? 0 : profile.ism_order;
  return FirstArrivalOfOrder(room, source_pos, receiver_pos, order + 1,
                             speed_of_sound);
}

}  // namespace alodsim
