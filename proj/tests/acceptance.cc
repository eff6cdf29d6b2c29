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


// Acceptance checks 1-12. One PASS/FAIL line per criterion; exit status is
// the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstring>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "alodsim/analysis.h"
#include "alodsim/coupled.h"
#include "alodsim/dsp.h"
#include "alodsim/ism.h"
#include "alodsim/pipeline.h"
#include "alodsim/postproc.h"
#include "alodsim/rng.h"
#include "alodsim/spatializer.h"
#include "alodsim/stimuli.h"

namespace alodsim {
namespace {

constexpr double kFs = 44100.0;

int failures = 0;

void Report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void Info(const std::string& what) { std::printf("  info: %s\n", what.c_str()); }

__attribute__((format(printf, 1, 2))) std::string Fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double Seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs one criterion; any exception counts as a failure.
void Check(int id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    Report(id, false, std::string("exception: ") + e.what());
  }
}

// ---- 1 ----------------------------------------------------------------------

struct OracleImage {
  Vec3 p;
  int order;
};

// Mirror lattice: x = o + 2nL + (1 - 2u)(s - o), |2n - u| reflections per axis.
std::vector<OracleImage> BruteForceImages(const RoomSpec& room, const Vec3& s, int max_order) {
  std::vector<OracleImage> out;
  const int r = max_order;
  for (int nx = -r; nx <= r; ++nx)
    for (int ny = -r; ny <= r; ++ny)
      for (int nz = -r; nz <= r; ++nz)
        for (int u = 0; u < 8; ++u) {
          const int n[3] = {nx, ny, nz};
          const int bit[3] = {u & 1, (u >> 1) & 1, (u >> 2) & 1};
          int order = 0;
          Vec3 p;
          for (int a = 0; a < 3; ++a) {
            order += std::abs(2 * n[a] - bit[a]);
            p[a] = room.origin[a] + 2.0 * n[a] * room.dims[a] +
                   (1 - 2 * bit[a]) * (s[a] - room.origin[a]);
          }
          if (order <= max_order) out.push_back({p, order});
        }
  return out;
}

void Criterion1() {
  CounterRng rng(101);
  double worst = 0.0;
  bool counts_ok = true;
  const double t = Seconds([&] {
    for (int trial = 0; trial < 50; ++trial) {
      RoomSpec room = Preset("pub").rooms.front();
      room.origin = {rng.Uniform() * 10 - 5, rng.Uniform() * 10 - 5, rng.Uniform() * 2};
      room.dims = {1.0 + 20.0 * rng.Uniform(), 1.0 + 20.0 * rng.Uniform(), 1.0 + 10.0 * rng.Uniform()};
      room.volume_override.reset();
      const Vec3 s = {room.origin[0] + room.dims[0] * (0.05 + 0.9 * rng.Uniform()),
                      room.origin[1] + room.dims[1] * (0.05 + 0.9 * rng.Uniform()),
                      room.origin[2] + room.dims[2] * (0.05 + 0.9 * rng.Uniform())};
      const int order = 1 + static_cast<int>(rng.Below(4));
      const std::vector<ImageSource> got = EnumerateImages(room, s, order);
      const std::vector<OracleImage> want = BruteForceImages(room, s, order);
      if (got.size() != want.size()) counts_ok = false;
      std::vector<bool> used(got.size(), false);
      for (const OracleImage& w : want) {
        double best = 1e300;
        std::size_t bi = 0;
        for (std::size_t i = 0; i < got.size(); ++i) {
          if (used[i] || got[i].order != w.order) continue;
          const double d = Norm(got[i].position - w.p);
          if (d < best) best = d, bi = i;
        }
        if (best < 1e300) used[bi] = true;
        worst = std::max(worst, best);
      }
    }
    const RoomSpec room = Preset("pub").rooms.front();
    const Vec3 s = room.origin + room.dims * 0.37;
    const std::size_t c1 = EnumerateImages(room, s, 1).size();
    const std::size_t c3 = EnumerateImages(room, s, 3).size();
    const std::size_t c15 = EnumerateImages(room, s, 15).size();
    Info(Fmt("counts %zu %zu %zu (want 7 63 4991)", c1, c3, c15));
    counts_ok = counts_ok && c1 == 7 && c3 == 63 && c15 == 4991;
    for (int n = 1; n <= 15; ++n) counts_ok = counts_ok && ImageCountOfOrder(n) == 4u * n * n + 2u;
  });
  Report(1, worst <= 1e-9 && counts_ok && t < 1.0,
         Fmt("image positions max error %.3g m (<= 1e-9), counts %s, runtime %.3f s (< 1 s)",
             worst, counts_ok ? "ok" : "BAD", t));
}

// ---- 2 ----------------------------------------------------------------------

double BroadbandT30(const ImpulseResponse& ir) {
  return T30(SchroederEdcFromEnergy(ChannelEnergy(ir), ir.sample_rate));
}

void Criterion2() {
  struct Case {
    const char* scene;
    const char* source;
    double target;
  };
  const Case cases[] = {{"living-room", "masker", 0.54}, {"pub", "", 0.7}, {"underground", "", 1.6}};
  bool ok = true;
  std::string msg;
  for (const Case& c : cases) {
    const SceneSpec s = Preset(c.scene);
    SimulationOptions o;
    o.source_id = c.source;
    ImpulseResponse ir;
    const double t = Seconds([&] { ir = Simulate(s, ProfilePreset("razr-full"), 0, o); });
    const double t30 = BroadbandT30(ir);
    const bool pass = std::abs(t30 / c.target - 1.0) <= 0.15 && t < 30.0;
    ok = ok && pass;
    msg += Fmt("%s T30 %.3f s vs %.2f (%+.1f%%, %.1f s); ", c.scene, t30, c.target,
               100.0 * (t30 / c.target - 1.0), t);
  }
  Report(2, ok, msg + "tolerance 15%, < 30 s per scene");
  SimulationOptions o;
  o.source_id = "target";
  const double coupled = BroadbandT30(Simulate(Preset("living-room"), ProfilePreset("razr-full"), 0, o));
  Info(Fmt("living-room T30 from the kitchen (coupled) source: %.3f s", coupled));
}

// ---- 3 ----------------------------------------------------------------------

double SmoothedAt(const std::vector<double>& p, double f, double df) {
  const double lo = f * std::pow(2.0, -1.0 / 6.0);
  const double hi = f * std::pow(2.0, 1.0 / 6.0);
  double sum = 0.0;
  int n = 0;
  for (auto k = static_cast<std::size_t>(std::ceil(lo / df)); k * df <= hi && k < p.size(); ++k) {
    sum += p[k];
    ++n;
  }
  return sum / n;
}

// Mean |dB| of third-octave smoothed power spectra, summed over channels,
// 24 log points per octave over 100 Hz - 16 kHz.
double DeviationDb(const ImpulseResponse& a, const ImpulseResponse& b) {
  const std::size_t n = NextPow2(std::max({a.length(), b.length(), std::size_t{65536}}));
  auto power = [n](const ImpulseResponse& ir) {
    std::vector<double> p(n / 2 + 1, 0.0);
    for (const auto& ch : ir.channels) {
      const std::vector<Complex> s = Rfft(ch, n);
      for (std::size_t k = 0; k < p.size(); ++k) p[k] += std::norm(s[k]);
    }
    return p;
  };
  const std::vector<double> pa = power(a);
  const std::vector<double> pb = power(b);
  const double df = kFs / n;
  double sum = 0.0;
  int count = 0;
  for (double f = 100.0; f <= 16000.0 * 1.0000001; f *= std::pow(2.0, 1.0 / 24.0)) {
    sum += std::abs(10.0 * std::log10(SmoothedAt(pa, f, df) / SmoothedAt(pb, f, df)));
    ++count;
  }
  return sum / count;
}

std::vector<double> OctaveColoration(const std::vector<double>& octave_db, double f0) {
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

void Criterion3() {
  SimulationOptions o;
  o.duration = 0.8;
  const ImpulseResponse sim = Simulate(Preset("pub"), ProfilePreset("razr-full"), 7, o);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CounterRng rng(seed, 3);
    std::vector<double> db(10);
    for (double& v : db) v = -6.0 + 12.0 * rng.Uniform();
    const std::vector<double> h = OctaveColoration(db, 62.5);
    ImpulseResponse ref = sim;
    for (auto& ch : ref.channels) ch = Convolve(ch, h);
    const SpectralMatchResult m = MatchSpectrum(sim, ref);
    worst = std::max(worst, DeviationDb(m.corrected, ref));
  }
  Report(3, worst < 0.5, Fmt("worst mean third-octave deviation %.3f dB over 5 random +-6 dB colorations (< 0.5)", worst));
}

// ---- 4 ----------------------------------------------------------------------

void Criterion4() {
  const SceneSpec s = Preset("underground");
  SimulationOptions o;
  o.output_mode = OutputMode::kMono;
  o.duration = 0.5;
  const ImpulseResponse razr = Simulate(s, ProfilePreset("razr-full"), 0, o);
  const ImpulseResponse ism = Simulate(s, ProfilePreset("ism-15"), 0, o);
  const NedProfile a = Ned(razr.channels[0], kFs);
  const NedProfile b = Ned(ism.channels[0], kFs);
  std::size_t total = 0;
  std::size_t ahead = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (a.times[i] < 0.020 - 1e-12 || a.times[i] > 0.080 + 1e-12) continue;
    ++total;
    ahead += a.values[i] >= b.values[i];
  }
  const double frac = total ? static_cast<double>(ahead) / total : 0.0;
  Report(4, total > 0 && frac >= 0.9,
         Fmt("NED razr-full >= ism-15 at %.1f%% of %zu windows in [20, 80] ms (>= 90%%)", 100.0 * frac, total));
}

// ---- 5 ----------------------------------------------------------------------

void Criterion5() {
  const SceneSpec s = Preset("underground");
  SimulationOptions o;
  o.output_mode = OutputMode::kMono;
  const DualSlopeFit full = FitDualSlope(
      SchroederEdc(Simulate(s, ProfilePreset("razr-full"), 0, o).channels[0], kFs));
  const DualSlopeFit simple = FitDualSlope(
      SchroederEdc(Simulate(s, ProfilePreset("razr-simple"), 0, o).channels[0], kFs));
  const double r_full = std::abs(full.slope1 - full.slope2) / std::abs(full.slope1);
  const double r_simple = std::abs(simple.slope1 - simple.slope2) / std::abs(simple.slope1);
  Report(5, std::abs(full.knee_level + 40.0) <= 5.0 && r_simple < 0.15,
         Fmt("razr-full knee %.1f dB (-40 +- 5), slope ratio %.2f; razr-simple slope ratio %.3f (< 0.15)",
             full.knee_level, r_full, r_simple));
}

// ---- 6 ----------------------------------------------------------------------

void Criterion6() {
  const SceneSpec scene = Preset("living-room");
  const RenderingProfile p = ProfilePreset("razr-simple");
  SimulationOptions o;
  o.output_mode = OutputMode::kMono;
  o.source_id = "target";
  const ImpulseResponse ir = Simulate(scene, p, 1, o);
  const double expected = 5.7 / scene.speed_of_sound * kFs;
  const double arrival = static_cast<double>(FirstArrival(ir.channels[0]));

  const SourceSpec& src = scene.Source("target");
  const ReceiverSpec& rcv = scene.receivers.front();
  const CoupledPlan plan = MakeCoupledPlan(scene, p, src, rcv);
  const RoomSpec& room = scene.Room(rcv.room);
  const CounterRng rng(7);
  const std::size_t n = 30000;
  const std::vector<double> unit = {1.0};
  const std::vector<double> a =
      RenderMono(TwoStageWithSignature(scene, p, src, rcv, unit, n, rng)).channels[0];
  const std::vector<double> b =
      RenderMono(SimulateRoom(room, DoorSource(plan, room), rcv.position, rcv.orientation,
                              PanelsInRoom(scene, room), p, kFs, scene.speed_of_sound, n, rng))
          .channels[0];
  double diff = a.size() == b.size() ? 0.0 : 1e300;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  Report(6, std::abs(arrival - expected) <= 1.0 && diff <= 1e-10,
         Fmt("first arrival sample %.0f vs %.2f (+-1); unit-signature max difference %.2g (<= 1e-10)",
             arrival, expected, diff));
}

// ---- 7 ----------------------------------------------------------------------

void Criterion7() {
  const LoudspeakerLayout l = ArrayPreset86();
  CounterRng rng(77);
  double worst_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 d = Normalized(Vec3{rng.Gaussian(), rng.Gaussian(), rng.Gaussian()});
    double s = 0.0;
    for (const auto& [ch, g] : VbapGains(d, l).gains) s += g * g;
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  bool single = true;
  for (std::size_t k = 0; k < l.positions.size(); ++k) {
    std::size_t active = 0;
    for (const auto& [ch, g] : VbapGains(l.Direction(k), l).gains) {
      if (std::abs(g) > 1e-9) {
        ++active;
        single = single && ch == k && std::abs(g - 1.0) < 1e-9;
      }
    }
    single = single && active == 1;
  }
  // Midpoints of triangle edges, where only the two edge speakers take part.
  double worst_mid = 0.0;
  for (const auto& t : l.triangles) {
    const Vec3 m = Normalized(l.Direction(t[0]) + l.Direction(t[1]));
    for (const auto& [ch, g] : VbapGains(m, l).gains) {
      if (ch == t[0] || ch == t[1]) {
        worst_mid = std::max(worst_mid, std::abs(g - 1.0 / std::sqrt(2.0)));
      } else {
        worst_mid = std::max(worst_mid, std::abs(g));
      }
    }
  }
  Report(7, worst_sum <= 1e-9 && single && worst_mid <= 1e-6,
         Fmt("max |sum g^2 - 1| %.2g (<= 1e-9); coincident single channel %s; midpoint max error %.2g (<= 1e-6)",
             worst_sum, single ? "yes" : "NO", worst_mid));
}

// ---- 8 ----------------------------------------------------------------------

void Criterion8() {
  const SceneSpec s = Preset("pub");
  SimulationOptions o;
  o.duration = 0.5;
  const ImpulseResponse head = Simulate(s, ProfilePreset("diotic"), 0, o);
  const bool identical = head.channels.size() == 2 && head.channels[0] == head.channels[1];
  o.layout = std::make_shared<const LoudspeakerLayout>(ArrayPreset86());
  const ImpulseResponse arr = Simulate(s, ProfilePreset("diotic"), 0, o);
  const std::size_t front = o.layout->FrontalIndex();
  std::size_t active = 0;
  bool front_active = false;
  for (std::size_t c = 0; c < arr.channels.size(); ++c) {
    const bool any = std::any_of(arr.channels[c].begin(), arr.channels[c].end(),
                                 [](double v) { return v != 0.0; });
    active += any;
    if (any && c == front) front_active = true;
  }
  Report(8, identical && active == 1 && front_active,
         Fmt("headphone channels bit-identical: %s; array active channels %zu (frontal index %zu)",
             identical ? "yes" : "NO", active, front));
}

// ---- 9 ----------------------------------------------------------------------

double BandEnergyDb(const std::vector<double>& x, double fc) {
  const std::size_t n = NextPow2(std::max<std::size_t>(2 * x.size(), 65536));
  const std::vector<Complex> s = Rfft(x, n);
  double e = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double f = k * kFs / n;
    if (f >= fc / std::sqrt(2.0) && f < fc * std::sqrt(2.0)) e += std::norm(s[k]);
  }
  return 10.0 * std::log10(e);
}

void Criterion9() {
  const Stimulus s = PinkPulse(kFs, 0.5);
  std::vector<double> e;
  for (double fc = 62.5; fc <= 8000.0; fc *= 2.0) e.push_back(BandEnergyDb(s.samples, fc));
  double mean = 0.0;
  for (double v : e) mean += v / e.size();
  double spread = 0.0;
  for (double v : e) spread = std::max(spread, std::abs(v - mean));
  const double env = EnvelopeDb(s.samples, kFs)[static_cast<std::size_t>(std::lround(0.036 * kFs))];
  Report(9, s.samples.size() == 22050 && spread <= 0.5 && env <= -60.0,
         Fmt("length %zu samples (22050); octaves 62.5 Hz-8 kHz max deviation %.3f dB (<= 0.5); envelope at 36 ms %.1f dBFS (<= -60)",
             s.samples.size(), spread, env));
}

// ---- 10 ---------------------------------------------------------------------

void Criterion10() {
  EssParams p;
  p.f1 = 100.0;
  p.f2 = 22050.0;
  p.duration = 3.2;
  p.sample_rate = kFs;
  const Stimulus sweep = EssGenerate(p);
  const std::vector<double> h = EssDeconvolveFull(sweep.samples, sweep, p);
  const double pta = PeakToArtifactDb(h, kFs);
  Report(10, pta >= 60.0, Fmt("self-deconvolution peak-to-artifact %.1f dB (>= 60)", pta));
}

// ---- 11 ---------------------------------------------------------------------

void Criterion11() {
  CounterRng pick(2024);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double t60 = 0.3 + 2.7 * pick.Uniform();
    CounterRng rng(seed, 5);
    const auto n = static_cast<std::size_t>(1.5 * t60 * kFs);
    const double rate = 3.0 * std::log(10.0) / t60;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.Gaussian() * std::exp(-rate * i / kFs);
    worst = std::max(worst, std::abs(T30(SchroederEdc(x, kFs)) / t60 - 1.0));
  }
  CounterRng rng(99);
  std::vector<double> noise(2 * static_cast<std::size_t>(kFs));
  for (double& v : noise) v = rng.Gaussian();
  const NedProfile p = Ned(noise, kFs);
  double mean = 0.0;
  std::size_t inside = 0;
  for (double v : p.values) {
    mean += v / p.values.size();
    inside += std::abs(v - 1.0) <= 0.1;
  }
  const double frac = static_cast<double>(inside) / p.values.size();
  Report(11, worst <= 0.04 && mean >= 0.9 && mean <= 1.1 && frac >= 0.95,
         Fmt("T30 worst relative error %.2f%% (<= 4%%); noise NED mean %.3f in [0.9, 1.1], %.1f%% of windows inside",
             100.0 * worst, mean, 100.0 * frac));
}

// ---- 12 ---------------------------------------------------------------------

void Criterion12() {
  const SceneSpec s = Preset("living-room");
  SimulationOptions o;
  o.duration = 2.0;
  o.output_mode = OutputMode::kBinaural;
  ImpulseResponse a;
  const double t = Seconds([&] { a = Simulate(s, ProfilePreset("razr-full"), 11, o); });
  const ImpulseResponse b = Simulate(s, ProfilePreset("razr-full"), 11, o);
  bool same = a.channels.size() == b.channels.size();
  for (std::size_t c = 0; same && c < a.channels.size(); ++c) {
    same = a.channels[c].size() == b.channels[c].size() &&
           std::equal(a.channels[c].begin(), a.channels[c].end(), b.channels[c].begin(),
                      [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; });
  }
  Report(12, same && t < 10.0,
         Fmt("repeat run byte-identical: %s; razr-full living-room 2 s binaural in %.2f s (< 10)",
             same ? "yes" : "NO", t));
}

}  // namespace
}  // namespace alodsim

int main() {
  using namespace alodsim;
  Check(1, Criterion1);
  Check(2, Criterion2);
  Check(3, Criterion3);
  Check(4, Criterion4);
  Check(5, Criterion5);
  Check(6, Criterion6);
  Check(7, Criterion7);
  Check(8, Criterion8);
  Check(9, Criterion9);
  Check(10, Criterion10);
  Check(11, Criterion11);
  Check(12, Criterion12);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
