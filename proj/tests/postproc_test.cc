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

#include <gtest/gtest.h>

#include "alodsim/dsp.h"
#include "alodsim/pipeline.h"
#include "alodsim/rng.h"

namespace alodsim {
namespace {

constexpr double kFs = 44100.0;

// Oracle: brute-force +-1/6 octave energy mean at frequency f.
double OracleSmoothAt(const std::vector<double>& power, double f, double df) {
  const double lo = f * std::pow(2.0, -1.0 / 6.0);
  const double hi = f * std::pow(2.0, 1.0 / 6.0);
  double sum = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double fk = k * df;
    if (fk >= lo && fk <= hi) sum += power[k], ++count;
  }
  return sum / count;
}

std::vector<double> Power(const std::vector<double>& x, std::size_t n) {
  const std::vector<Complex> s = Rfft(x, n);
  std::vector<double> p(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) p[k] = std::norm(s[k]);
  return p;
}

// Oracle: mean |dB| between third-octave smoothed spectra of a and b at 24
// log-spaced points per octave over [lo, hi].
double OracleDeviationDb(const std::vector<double>& a, const std::vector<double>& b,
                         double lo, double hi) {
  const std::size_t n = NextPow2(std::max({a.size(), b.size(), std::size_t{65536}}));
  const std::vector<double> pa = Power(a, n);
  const std::vector<double> pb = Power(b, n);
  const double df = kFs / n;
  double sum = 0.0;
  int count = 0;
  for (double f = lo; f <= hi * 1.0000001; f *= std::pow(2.0, 1.0 / 24.0)) {
    sum += std::abs(10.0 * std::log10(OracleSmoothAt(pa, f, df) / OracleSmoothAt(pb, f, df)));
    ++count;
  }
  return sum / count;
}

// Minimum-phase FIR with a per-octave dB profile interpolated in log f.
std::vector<double> Coloration(const std::vector<double>& octave_db, double f0) {
  const std::size_t n = 8192;
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    const double f = std::max(k * kFs / n, 1.0);
    const double x = std::clamp(std::log2(f / f0), 0.0, double(octave_db.size() - 1));
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), octave_db.size() - 2);
    const double t = x - i;
    mag[k] = DbToAmplitude((1.0 - t) * octave_db[i] + t * octave_db[i + 1]);
  }
  return MinimumPhase(mag, n);
}

ImpulseResponse Colored(const ImpulseResponse& ir, const std::vector<double>& h) {
  ImpulseResponse out = ir;
  for (auto& ch : out.channels) ch = Convolve(ch, h);
  return out;
}

ImpulseResponse PubIr(OutputMode mode = OutputMode::kBinaural) {
  SimulationOptions opt;
  opt.output_mode = mode;
  opt.duration = 0.6;
  return Simulate(Preset("pub"), ProfilePreset("razr-full"), 7, opt);
}

TEST(SmoothTest, FlatStaysFlat) {
  const std::vector<double> flat(4097, 2.5);
  for (double v : SmoothPower(flat)) ASSERT_NEAR(v, 2.5, 1e-12);
  std::vector<double> mag(4097, 0.3);
  for (double v : ThirdOctaveSmooth(mag, kFs)) ASSERT_NEAR(v, 0.3, 1e-12);
}

TEST(SmoothTest, SpikeSpreadsOverSixthOctaveWindow) {
  // 44100 / 4410 = 10 Hz bins; spike at 1 kHz (bin 100).
  const std::size_t n = 4410;
  std::vector<double> p(n / 2 + 1, 0.0);
  p[100] = 1.0;
  const std::vector<double> s = SmoothPower(p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double f = k * 10.0;
    // Bin k sees the spike iff 1 kHz lies in [f 2^-1/6, f 2^1/6].
    const bool inside = f >= 1000.0 * std::pow(2.0, -1.0 / 6.0) - 1e-9 &&
                        f <= 1000.0 * std::pow(2.0, 1.0 / 6.0) + 1e-9;
    if (!inside) {
      ASSERT_EQ(s[k], 0.0) << f;
    } else {
      ASSERT_GT(s[k], 0.0) << f;
    }
  }
  EXPECT_GT(s[90], 0.0);   // 900 Hz
  EXPECT_GT(s[112], 0.0);  // 1120 Hz
  EXPECT_EQ(s[88], 0.0);   // 880 Hz
  EXPECT_EQ(s[113], 0.0);  // 1130 Hz
}

TEST(SmoothTest, MatchesBruteForceOracle) {
  CounterRng rng(3);
  std::vector<double> p(8193);
  for (double& v : p) v = rng.Uniform() + 0.01;
  const std::vector<double> s = SmoothPower(p);
  const double df = kFs / 16384.0;
  for (double f : {120.0, 500.0, 1000.0, 3333.0, 12000.0}) {
    const auto k = static_cast<std::size_t>(std::lround(f / df));
    EXPECT_NEAR(s[k], OracleSmoothAt(p, k * df, df), 1e-9 * s[k]) << f;
  }
}

TEST(SmoothTest, IdempotentOnSmoothSpectra) {
  std::vector<double> p(8193);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double f = std::max(k * kFs / 16384.0, 20.0);
    p[k] = std::pow(10.0, 0.3 * std::sin(std::log2(f / 125.0)));  // +-3 dB, octave scale
  }
  const std::vector<double> once = SmoothPower(p);
  const std::vector<double> twice = SmoothPower(once);
  for (std::size_t k = 16; k < p.size(); ++k) {
    ASSERT_NEAR(PowerToDb(twice[k]), PowerToDb(once[k]), 0.1) << k;
  }
}

TEST(MatchTest, IdentityGivesUnity) {
  const ImpulseResponse ir = PubIr();
  const SpectralMatchResult r = MatchSpectrum(ir, ir);
  EXPECT_LT(r.report.residual_mean_db, 0.01);
  EXPECT_FALSE(r.report.clamped);
  EXPECT_EQ(r.filter.size(), 2048u);
  EXPECT_NEAR(r.filter[0], 1.0, 1e-3);
  double rest = 0.0;
  for (std::size_t i = 1; i < r.filter.size(); ++i) rest += r.filter[i] * r.filter[i];
  EXPECT_LT(rest, 1e-6);
}

TEST(MatchTest, ShelvingColorationRecovered) {
  const ImpulseResponse sim = PubIr();
  // +3 dB low shelf below 500 Hz, -3 dB above 4 kHz.
  const std::vector<double> h = Coloration({3, 3, 3, 0, 0, -3, -3, -3, -3}, 125.0);
  const ImpulseResponse ref = Colored(sim, h);
  const SpectralMatchResult r = MatchSpectrum(sim, ref);
  EXPECT_FALSE(r.report.clamped);
  EXPECT_LT(r.report.residual_mean_db, 0.5);
  EXPECT_LE(r.report.residual_mean_db, r.report.residual_before_db);
  EXPECT_GT(r.report.residual_before_db, 1.0);
  for (int ch = 0; ch < 2; ++ch) {
    EXPECT_LT(OracleDeviationDb(r.corrected.channels[ch], ref.channels[ch], 100, 16000), 0.5);
  }
}

TEST(MatchTest, RandomOctaveColorationWithinHalfDb) {
  const ImpulseResponse sim = PubIr(OutputMode::kMono);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CounterRng rng(seed, 77);
    std::vector<double> db(10);
    for (double& v : db) v = -6.0 + 12.0 * rng.Uniform();
    const ImpulseResponse ref = Colored(sim, Coloration(db, 62.5));
    const SpectralMatchResult r = MatchSpectrum(sim, ref);
    EXPECT_LT(r.report.residual_mean_db, 0.5) << seed;
    EXPECT_LT(OracleDeviationDb(r.corrected.channels[0], ref.channels[0], 100, 16000), 0.5)
        << seed;
  }
}

TEST(MatchTest, LargeColorationClamps) {
  const ImpulseResponse sim = PubIr(OutputMode::kMono);
  const std::vector<double> h = Coloration({20, 20, 20, 0, 0, -20, -20, -20, -20}, 125.0);
  const SpectralMatchResult r = MatchSpectrum(sim, Colored(sim, h));
  EXPECT_TRUE(r.report.clamped);
  EXPECT_GT(r.report.residual_mean_db, 0.5);
}

TEST(MatchTest, SameFilterOnAllChannels) {
  const ImpulseResponse sim = PubIr();
  const std::vector<double> h = Coloration({-2, 0, 2, 4, 2, 0, -2, -4, -4}, 125.0);
  const SpectralMatchResult r = MatchSpectrum(sim, Colored(sim, h));
  for (int ch = 0; ch < 2; ++ch) {
    const std::vector<double> expect = Convolve(sim.channels[ch], r.filter);
    ASSERT_EQ(expect.size(), r.corrected.channels[ch].size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      ASSERT_EQ(expect[i], r.corrected.channels[ch][i]);
    }
  }
  EXPECT_EQ(r.report.filter_taps, r.filter);
}

TEST(MatchTest, FilterIsMinimumPhase) {
  const ImpulseResponse sim = PubIr(OutputMode::kMono);
  const std::vector<double> h = Coloration({-2, 0, 2, 4, 2, 0, -2, -4, -4}, 125.0);
  const SpectralMatchResult r = MatchSpectrum(sim, Colored(sim, h));
  // Oracle: the minimum-phase sequence with the filter's own magnitude.
  const std::size_t n = 16384;
  const std::vector<Complex> spec = Rfft(r.filter, n);
  std::vector<double> mag(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) mag[k] = std::abs(spec[k]);
  const std::vector<double> mp = MinimumPhase(mag, n);
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = i < r.filter.size() ? r.filter[i] : 0.0;
    diff += (f - mp[i]) * (f - mp[i]);
    norm += f * f;
  }
  EXPECT_LT(std::sqrt(diff / norm), 0.02);
  // Energy front-loaded: partial energy dominates a time-reversed copy.
  double acc = 0.0;
  double acc_rev = 0.0;
  const std::size_t m = r.filter.size();
  for (std::size_t i = 0; i < m / 4; ++i) {
    acc += r.filter[i] * r.filter[i];
    acc_rev += r.filter[m - 1 - i] * r.filter[m - 1 - i];
  }
  EXPECT_GT(acc, acc_rev);
}

TEST(MatchTest, ErrorsReported) {
  ImpulseResponse sim = PubIr(OutputMode::kMono);
  ImpulseResponse zero = sim;
  std::fill(zero.channels[0].begin(), zero.channels[0].end(), 0.0);
  try {
    MatchSpectrum(zero, sim);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
  ImpulseResponse other = sim;
  other.sample_rate = 48000.0;
  EXPECT_THROW(MatchSpectrum(sim, other), Error);
}

}  // namespace
}  // namespace alodsim
