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


#include "alodsim/stimuli.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "alodsim/dsp.h"

namespace alodsim {
namespace {

constexpr double kPinkLowEdge = 50.0;
constexpr double kEnvelopeTime = 0.036;
constexpr double kEnvelopeTarget = -60.0;
constexpr double kEnvelopeMargin = 0.5;
constexpr int kVariantIterations = 20;
constexpr double kVariantStep = 0.6;
constexpr double kVariantFade = 1.0 / 6.0;  // octaves
constexpr int kPrecompIterations = 48;

// Mean of x over [i * 2^-1/6, i * 2^1/6] for each bin i.
std::vector<double> SixthOctaveMean(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> cs(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cs[i + 1] = cs[i] + x[i];
  std::vector<double> out(n);
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

struct PinkDesign {
  std::size_t fft_size = 0;
  std::size_t length = 0;
  double ramp_rate = 0.0;
  std::vector<double> magnitude;  // n/2+1 bins, pre-compensated
};

// Truncated, ramped minimum-phase sequence (not yet normalized).
std::vector<double> Synthesize(const std::vector<double>& mag, std::size_t n,
                               std::size_t length, double ramp,
                               double fs) {
  // A -100 dB floor keeps the cepstrum from aliasing on the zeroed
  // region below the pink rolloff.
  std::vector<double> h = MinimumPhase(mag, n, 1e-5);
  h.resize(length);
  if (ramp > 0.0) {
    for (std::size_t i = 0; i < length; ++i) {
      h[i] *= std::exp(-ramp * static_cast<double>(i) / fs);
    }
  }
  return h;
}

double PeakAbs(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

double EnvelopeAt(const std::vector<double>& h, double fs, double t) {
  const double peak = PeakAbs(h);
  std::vector<double> x(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) x[i] = h[i] / peak;
  const std::vector<double> env = EnvelopeDb(x, fs);
  const auto idx = static_cast<std::size_t>(std::lround(t * fs));
  return env[std::min(idx, env.size() - 1)];
}

PinkDesign DesignPink(double fs, std::size_t length) {
  PinkDesign d;
  d.length = length;
  d.fft_size = NextPow2(std::max<std::size_t>(2 * length, 1 << 16));
  const std::size_t n = d.fft_size;
  const std::size_t bins = n / 2 + 1;
  std::vector<double> freq(bins);
  for (std::size_t k = 0; k < bins; ++k) freq[k] = k * fs / n;

  std::vector<double> target(bins, 0.0);
  const double rise_start = kPinkLowEdge / 2.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = freq[k];
    if (f >= kPinkLowEdge) {
      target[k] = 1.0 / std::sqrt(f);
    } else if (f >= rise_start) {
      const double x = std::log2(f / rise_start);
      target[k] = 0.5 * (1.0 - std::cos(kPi * x)) / std::sqrt(kPinkLowEdge);
    }
  }
  d.magnitude = target;

  std::vector<double> h = Synthesize(target, n, length, 0.0, fs);
  if (EnvelopeAt(h, fs, kEnvelopeTime) <= kEnvelopeTarget) return d;

  std::vector<double> target_pow(bins);
  for (std::size_t k = 0; k < bins; ++k) target_pow[k] = target[k] * target[k];
  const std::vector<double> target_smooth = SixthOctaveMean(target_pow);
  const double ref_lo = 500.0;
  const double ref_hi = std::min(8000.0, fs / 4.0);
  // Bins below the lower half of the rolloff are left alone.
  const double comp_lo = 30.0;

  for (double ramp = 60.0;; ramp *= 1.15) {
    std::vector<double> mag = target;
    for (int it = 0; it < kPrecompIterations; ++it) {
      h = Synthesize(mag, n, length, ramp, fs);
      const std::vector<Complex> spec = Rfft(h, n);
      std::vector<double> pow(bins);
      for (std::size_t k = 0; k < bins; ++k) pow[k] = std::norm(spec[k]);
      const std::vector<double> smooth = SixthOctaveMean(pow);
      double m_ref = 0.0;
      double t_ref = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        if (freq[k] > ref_lo && freq[k] < ref_hi) {
          m_ref += smooth[k];
          t_ref += target_smooth[k];
        }
      }
      const double norm = m_ref / t_ref;
      for (std::size_t k = 0; k < bins; ++k) {
        if (freq[k] < comp_lo || smooth[k] <= 0.0) continue;
        double r = std::sqrt(target_smooth[k] / smooth[k] * norm);
        r = std::clamp(r, 0.5, 2.0);
        mag[k] *= std::pow(r, 0.7);
      }
    }
    h = Synthesize(mag, n, length, ramp, fs);
    if (EnvelopeAt(h, fs, kEnvelopeTime) <= kEnvelopeTarget - kEnvelopeMargin ||
        ramp > 2000.0) {
      d.ramp_rate = ramp;
      d.magnitude = std::move(mag);
      return d;
    }
  }
}

const PinkDesign& CachedPinkDesign(double fs, std::size_t length) {
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, PinkDesign> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(fs, length);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, DesignPink(fs, length)).first;
  return it->second;
}

std::size_t PulseLength(double fs, double duration) {
  if (!(fs >= 8000.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sample rate must be >= 8 kHz");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorKind::kInvalidArgument, "duration must be positive");
  }
  return static_cast<std::size_t>(std::lround(duration * fs));
}

Stimulus Finish(std::vector<double> h, double fs, StimulusKind kind,
                double ramp) {
  Stimulus s;
  const double peak = PeakAbs(h);
  s.normalization_gain = peak > 0.0 ? 1.0 / peak : 1.0;
  for (double& v : h) v *= s.normalization_gain;
  s.samples = std::move(h);
  s.sample_rate = fs;
  s.kind = kind;
  s.ramp_rate = ramp;
  return s;
}

}  // namespace

std::string_view StimulusKindName(StimulusKind kind) {
  switch (kind) {
    case StimulusKind::kPinkPulse: return "pink_pulse";
    case StimulusKind::kPinkPulseVariant: return "pink_pulse_variant";
    case StimulusKind::kEss: return "ess";
    case StimulusKind::kExternal: return "external";
  }
  return "external";
}

double StimulusBandCenter(std::size_t band) {
  return 1000.0 * std::pow(2.0, static_cast<double>(band) - 5.0);
}

void ValidateBandLevels(const BandLevels& levels) {
  for (double v : levels) {
    if (v != -6.0 && v != 0.0 && v != 6.0) {
      throw Error(ErrorKind::kValidation,
                  "band levels must each be -6, 0 or +6 dB");
    }
  }
}

BandLevels RandomBandLevels(CounterRng& rng) {
  static constexpr double kChoices[3] = {-6.0, 0.0, 6.0};
  BandLevels out;
  for (double& v : out) v = kChoices[rng.Below(3)];
  return out;
}

void ValidateStimulus(const Stimulus& s) {
  for (double v : s.samples) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kValidation, "stimulus has non-finite samples");
    if (std::abs(v) > 1.0) throw Error(ErrorKind::kValidation, "stimulus exceeds 0 dBFS");
  }
}

Stimulus PinkPulse(double sample_rate, double duration) {
  const std::size_t length = PulseLength(sample_rate, duration);
  const PinkDesign& d = CachedPinkDesign(sample_rate, length);
  return Finish(Synthesize(d.magnitude, d.fft_size, length, d.ramp_rate, sample_rate),
                sample_rate, StimulusKind::kPinkPulse, d.ramp_rate);
}

Stimulus PinkPulseVariant(const BandLevels& levels, double sample_rate,
                          double duration) {
  ValidateBandLevels(levels);
  const std::size_t length = PulseLength(sample_rate, duration);
  const PinkDesign& d = CachedPinkDesign(sample_rate, length);
  const std::size_t n = d.fft_size;
  const std::size_t bins = d.magnitude.size();
  std::vector<double> log_f(bins);
  // Bands tile the axis; the outer ones extend to DC and Nyquist.
  std::vector<std::size_t> band_of(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = k * sample_rate / static_cast<double>(n);
    log_f[k] = std::log2(std::max(f, 1.0));
    std::size_t band = 0;
    while (band + 1 < kNumStimulusBands &&
           f >= StimulusBandCenter(band) * std::sqrt(2.0)) {
      ++band;
    }
    band_of[k] = band;
  }
  // Gains cross-fade over +-kVariantFade octaves around each band edge.
  auto shaped = [&](const BandLevels& gains_db) {
    std::vector<double> mag = d.magnitude;
    for (std::size_t k = 0; k < bins; ++k) {
      double g = gains_db[0];
      for (std::size_t e = 0; e + 1 < kNumStimulusBands; ++e) {
        const double edge = std::log2(StimulusBandCenter(e) * std::sqrt(2.0));
        const double t = std::clamp((log_f[k] - edge + kVariantFade) / (2.0 * kVariantFade), 0.0, 1.0);
        g += 0.5 * (1.0 - std::cos(kPi * t)) * (gains_db[e + 1] - gains_db[e]);
      }
      mag[k] *= DbToAmplitude(g);
    }
    return Synthesize(mag, n, length, d.ramp_rate, sample_rate);
  };
  auto band_energy = [&](const std::vector<double>& h) {
    const std::vector<Complex> spec = Rfft(h, n);
    std::array<double, kNumStimulusBands> e{};
    for (std::size_t k = 1; k < bins; ++k) e[band_of[k]] += std::norm(spec[k]);
    return e;
  };

  const bool flat = std::all_of(levels.begin(), levels.end(),
                                [](double v) { return v == 0.0; });
  if (flat) {
    Stimulus s = PinkPulse(sample_rate, duration);
    s.kind = StimulusKind::kPinkPulseVariant;
    return s;
  }
  BandLevels gains = levels;
  std::vector<double> h = shaped(gains);
  // Pull each band's energy ratio against the base pulse onto its offset.
  // The 31 Hz band sits mostly below the rolloff and keeps its nominal
  // offset.
  const auto base = band_energy(shaped(BandLevels{}));
  for (int it = 0; it < kVariantIterations; ++it) {
    const auto e = band_energy(h);
    for (std::size_t b = 1; b < kNumStimulusBands; ++b) {
      if (base[b] > 0.0 && e[b] > 0.0) {
        const double err = 10.0 * std::log10(e[b] / base[b]) - levels[b];
        gains[b] = std::clamp(gains[b] - kVariantStep * err, levels[b] - 6.0, levels[b] + 6.0);
      }
    }
    h = shaped(gains);
  }
  Stimulus s = Finish(std::move(h), sample_rate,
                      StimulusKind::kPinkPulseVariant, d.ramp_rate);
  s.levels = levels;
  return s;
}

std::vector<double> EnvelopeDb(std::span<const double> x, double sample_rate,
                               double smoothing) {
  const std::vector<double> env = HilbertEnvelope(x);
  const std::size_t n = env.size();
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(smoothing * sample_rate)));
  std::vector<double> cs(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cs[i + 1] = cs[i] + env[i] * env[i];
  std::vector<double> out(n);
  // Centred window of k samples, zero outside the signal.
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(i) - half + static_cast<std::ptrdiff_t>(k));
    const double e = (cs[hi] - cs[lo]) / static_cast<double>(k);
    out[i] = PowerToDb(e + 1e-30);
  }
  return out;
}

ImpulseResponse ConvolveStimulus(const Stimulus& stimulus,
                                 const ImpulseResponse& ir) {
  if (stimulus.sample_rate != ir.sample_rate) {
    throw Error(ErrorKind::kRateMismatch, "stimulus and impulse response sample rates differ");
  }
  ValidateImpulseResponse(ir);
  ImpulseResponse out;
  out.sample_rate = ir.sample_rate;
  out.semantics = ir.semantics;
  for (const auto& ch : ir.channels) {
    out.channels.push_back(Convolve(stimulus.samples, ch));
  }
  return out;
}

namespace {

void ValidateEss(const EssParams& p) {
  if (!(p.f1 > 0.0) || !(p.f1 < p.f2) || p.f2 > p.sample_rate / 2.0 + 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "sweep requires 0 < f1 < f2 <= fs/2");
  }
  if (!(p.duration > 2.0 * p.fade) || p.fade < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "sweep duration too short for its fades");
  }
}

}  // namespace

double EssPhase(const EssParams& p, double t) {
  const double r = std::log(p.f2 / p.f1);
  return 2.0 * kPi * p.f1 * p.duration / r *
         (std::exp(t * r / p.duration) - 1.0);
}

Stimulus EssGenerate(const EssParams& p) {
  ValidateEss(p);
  const auto n = static_cast<std::size_t>(std::lround(p.duration * p.sample_rate));
  const auto nf = static_cast<std::size_t>(std::lround(p.fade * p.sample_rate));
  Stimulus s;
  s.sample_rate = p.sample_rate;
  s.kind = StimulusKind::kEss;
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::sin(EssPhase(p, static_cast<double>(i) / p.sample_rate));
    if (nf > 0) {
      if (i < nf) v *= 0.5 * (1.0 - std::cos(kPi * i / nf));
      if (n - 1 - i < nf) v *= 0.5 * (1.0 - std::cos(kPi * (n - 1 - i) / nf));
    }
    s.samples[i] = v;
  }
  return s;
}

std::vector<double> EssInverseFilter(const Stimulus& sweep, const EssParams& p) {
  ValidateEss(p);
  const std::size_t n = sweep.samples.size();
  const double r = std::log(p.f2 / p.f1);
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / p.sample_rate;
    inv[i] = sweep.samples[n - 1 - i] * std::exp(-t * r / p.duration);
  }
  double centre = 0.0;
  for (std::size_t i = 0; i < n; ++i) centre += sweep.samples[i] * inv[n - 1 - i];
  if (centre != 0.0) {
    for (double& v : inv) v /= centre;
  }
  return inv;
}

std::vector<double> EssDeconvolveFull(std::span<const double> recording,
                                      const Stimulus& sweep,
                                      const EssParams& p) {
  if (sweep.sample_rate != p.sample_rate) {
    throw Error(ErrorKind::kRateMismatch, "sweep sample rate differs from parameters");
  }
  const std::vector<double> inv = EssInverseFilter(sweep, p);
  return Convolve(recording, inv);
}

ImpulseResponse EssDeconvolve(const ImpulseResponse& recording,
                              const Stimulus& sweep, const EssParams& p) {
  if (recording.sample_rate != sweep.sample_rate) {
    throw Error(ErrorKind::kRateMismatch, "recording and sweep sample rates differ");
  }
  ValidateImpulseResponse(recording);
  ImpulseResponse out;
  out.sample_rate = recording.sample_rate;
  out.semantics = recording.semantics;
  const std::size_t start = sweep.samples.size() - 1;
  for (const auto& ch : recording.channels) {
    std::vector<double> full = EssDeconvolveFull(ch, sweep, p);
    std::vector<double> causal;
    if (full.size() > start) causal.assign(full.begin() + start, full.end());
    causal.resize(ch.size(), 0.0);
    out.channels.push_back(std::move(causal));
  }
  return out;
}

double PeakToArtifactDb(std::span<const double> h, double sample_rate,
                        double guard) {
  if (h.empty()) throw Error(ErrorKind::kInvalidArgument, "empty response");
  std::size_t ip = 0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (std::abs(h[i]) > std::abs(h[ip])) ip = i;
  }
  const auto g = static_cast<std::size_t>(std::lround(guard * sample_rate));
  double side = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::size_t dist = i > ip ? i - ip : ip - i;
    if (dist > g) side = std::max(side, std::abs(h[i]));
  }
  if (side == 0.0) return 300.0;
  return AmplitudeToDb(std::abs(h[ip]) / side);
}

}  // namespace alodsim
