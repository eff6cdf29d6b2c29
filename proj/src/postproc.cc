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


#include "alodsim/postproc.h"

#include <cmath>

#include "alodsim/dsp.h"

namespace alodsim {
namespace {

constexpr int kRefineIterations = 3;

struct Stats {
  double mean = 0.0;
  double rms = 0.0;
  double max = 0.0;
};

Stats AbsStats(const std::vector<double>& d) {
  Stats s;
  if (d.empty()) return s;
  for (double v : d) {
    s.mean += std::abs(v);
    s.rms += v * v;
    s.max = std::max(s.max, std::abs(v));
  }
  s.mean /= static_cast<double>(d.size());
  s.rms = std::sqrt(s.rms / static_cast<double>(d.size()));
  return s;
}

// Gain (dB) that the correction may apply at f: the in-band value, tapered to
// 0 dB over half an octave outside [lo, hi].
double TaperWeight(double f, double lo, double hi) {
  if (f >= lo && f <= hi) return 1.0;
  const double oct = f < lo ? std::log2(lo / std::max(f, 1e-9)) : std::log2(f / hi);
  if (oct >= 0.5) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * oct / 0.5));
}

}  // namespace

std::vector<double> SmoothPower(std::span<const double> power) {
  const std::size_t n = power.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  std::vector<double> cs(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cs[i + 1] = cs[i] + power[i];
  const double down = std::pow(2.0, -1.0 / 6.0);
  const double up = std::pow(2.0, 1.0 / 6.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = static_cast<std::size_t>(std::ceil(i * down));
    std::size_t hi = std::min(n - 1, static_cast<std::size_t>(std::floor(i * up)));
    if (hi < lo) lo = hi = i;
    out[i] = (cs[hi + 1] - cs[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> ThirdOctaveSmooth(std::span<const double> magnitude,
                                      double sample_rate) {
  (void)sample_rate;  // bin-relative; kept for interface symmetry
  std::vector<double> p(magnitude.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = magnitude[i] * magnitude[i];
  std::vector<double> s = SmoothPower(p);
  for (double& v : s) v = std::sqrt(v);
  return s;
}

std::vector<double> LogGridDifferenceDb(std::span<const double> power_a,
                                        std::span<const double> power_b,
                                        double sample_rate, double lo_hz,
                                        double hi_hz) {
  if (power_a.size() != power_b.size() || power_a.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "spectra must share a grid");
  }
  const double bin_hz = sample_rate / (2.0 * static_cast<double>(power_a.size() - 1));
  hi_hz = std::min(hi_hz, sample_rate / 2.0);
  if (!(lo_hz > 0.0) || !(lo_hz < hi_hz)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid frequency range");
  }
  const auto points = static_cast<std::size_t>(std::floor(48.0 * std::log2(hi_hz / lo_hz))) + 1;
  auto at = [&](std::span<const double> p, double f) {
    const double x = f / bin_hz;
    const auto k = std::min(static_cast<std::size_t>(x), p.size() - 2);
    const double frac = x - static_cast<double>(k);
    return (1.0 - frac) * p[k] + frac * p[k + 1];
  };
  std::vector<double> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = lo_hz * std::pow(2.0, static_cast<double>(i) / 48.0);
    const double a = at(power_a, f);
    const double b = at(power_b, f);
    if (!(a > 0.0) || !(b > 0.0)) {
      throw Error(ErrorKind::kInfeasible, "spectrum has no energy at a grid frequency");
    }
    out.push_back(10.0 * std::log10(a / b));
  }
  return out;
}

std::vector<double> AveragePowerSpectrum(const ImpulseResponse& ir,
                                         std::size_t n) {
  std::vector<double> p(n / 2 + 1, 0.0);
  for (const auto& ch : ir.channels) {
    const std::vector<Complex> spec = Rfft(ch, n);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += std::norm(spec[k]);
  }
  if (!ir.channels.empty()) {
    for (double& v : p) v /= static_cast<double>(ir.channels.size());
  }
  return p;
}

SpectralMatchResult MatchSpectrum(const ImpulseResponse& sim,
                                  const ImpulseResponse& ref,
                                  const SpectralMatchOptions& options) {
  if (sim.sample_rate != ref.sample_rate) {
    throw Error(ErrorKind::kRateMismatch, "sim and reference sample rates differ");
  }
  ValidateImpulseResponse(sim);
  ValidateImpulseResponse(ref);
  if (options.filter_taps < 16) {
    throw Error(ErrorKind::kInvalidArgument, "filter needs at least 16 taps");
  }
  const double fs = sim.sample_rate;
  const double lo = options.lo_hz;
  const double hi = std::min(options.hi_hz, fs / 2.0);
  const std::size_t n = NextPow2(std::max({sim.length(), ref.length(),
                                           2 * options.filter_taps,
                                           std::size_t{16384}}));
  const std::size_t bins = n / 2 + 1;
  const std::vector<double> p_sim = AveragePowerSpectrum(sim, n);
  const std::vector<double> s_sim = SmoothPower(p_sim);
  const std::vector<double> s_ref = SmoothPower(AveragePowerSpectrum(ref, n));

  std::vector<double> freq(bins);
  for (std::size_t k = 0; k < bins; ++k) freq[k] = k * fs / n;
  for (std::size_t k = 0; k < bins; ++k) {
    if (freq[k] >= lo && freq[k] <= hi && !(s_sim[k] > 0.0 && s_ref[k] > 0.0)) {
      throw Error(ErrorKind::kInfeasible,
                  "no energy in the matching band; cannot design a correction");
    }
  }

  // Desired correction in dB, defined in band and held at the band edge
  // value outside before tapering.
  auto ratio_db = [&](std::size_t k) {
    return 10.0 * std::log10(s_ref[k] / s_sim[k]);
  };
  std::size_t k_lo = 0;
  while (k_lo + 1 < bins && freq[k_lo] < lo) ++k_lo;
  std::size_t k_hi = bins - 1;
  while (k_hi > k_lo && freq[k_hi] > hi) --k_hi;

  SpectralMatchResult result;
  std::vector<double> gain_db(bins, 0.0);
  bool clamped = false;
  auto clamp = [&](double v) {
    if (v > options.clamp_db || v < -options.clamp_db) clamped = true;
    return std::clamp(v, -options.clamp_db, options.clamp_db);
  };
  for (std::size_t k = 0; k < bins; ++k) {
    const std::size_t kk = std::clamp(k, k_lo, k_hi);
    gain_db[k] = clamp(ratio_db(kk));
  }

  std::vector<double> filter;
  auto design = [&]() {
    std::vector<double> mag(bins);
    for (std::size_t k = 0; k < bins; ++k) {
      mag[k] = DbToAmplitude(gain_db[k] * TaperWeight(freq[k], lo, hi));
    }
    filter = MinimumPhase(mag, n);
    filter.resize(options.filter_taps);
    const std::size_t fade = options.filter_taps / 8;
    for (std::size_t i = 0; i < fade; ++i) {
      const double w = 0.5 * (1.0 + std::cos(kPi * (i + 1) / static_cast<double>(fade)));
      filter[options.filter_taps - fade + i] *= w;
    }
  };
  auto corrected_smooth = [&]() {
    const std::vector<Complex> fr = Rfft(filter, n);
    std::vector<double> p(bins);
    for (std::size_t k = 0; k < bins; ++k) p[k] = p_sim[k] * std::norm(fr[k]);
    return SmoothPower(p);
  };

  design();
  for (int it = 0; it < kRefineIterations; ++it) {
    const std::vector<double> s_corr = corrected_smooth();
    for (std::size_t k = 0; k < bins; ++k) {
      const std::size_t kk = std::clamp(k, k_lo, k_hi);
      if (!(s_corr[kk] > 0.0)) continue;
      gain_db[k] = clamp(gain_db[k] + 10.0 * std::log10(s_ref[kk] / s_corr[kk]));
    }
    design();
  }

  const std::vector<double> s_corr = corrected_smooth();
  const Stats after = AbsStats(LogGridDifferenceDb(s_corr, s_ref, fs, lo, hi));
  const Stats before = AbsStats(LogGridDifferenceDb(s_sim, s_ref, fs, lo, hi));

  result.corrected.sample_rate = fs;
  result.corrected.semantics = sim.semantics;
  for (const auto& ch : sim.channels) {
    result.corrected.channels.push_back(Convolve(ch, filter));
  }
  result.report.residual_mean_db = after.mean;
  result.report.residual_rms_db = after.rms;
  result.report.residual_max_db = after.max;
  result.report.residual_before_db = before.mean;
  result.report.band_range = {lo, hi};
  result.report.filter_taps = filter;
  result.report.clamped = clamped;
  result.filter = std::move(filter);
  return result;
}

}  // namespace alodsim
