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


#include "alodsim/analysis.h"

#include <array>
#include <cmath>
#include <limits>

#include "alodsim/dsp.h"
#include "alodsim/postproc.h"

namespace alodsim {
namespace {

// erfc(1 / sqrt(2)): fraction of Gaussian samples beyond one sigma.
constexpr double kGaussianOutside = 0.31731050786291415;

// Running sums for least-squares lines over index ranges.
class PrefixFit {
 public:
  PrefixFit(std::span<const double> y, std::size_t first, std::size_t last,
            double dt)
      : first_(first), dt_(dt) {
    const std::size_t n = last - first + 1;
    s_.assign(n + 1, {0, 0, 0, 0, 0});
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i);
      const double v = y[first + i];
      s_[i + 1] = {s_[i][0] + 1.0, s_[i][1] + t, s_[i][2] + t * t,
                   s_[i][3] + v, s_[i][4] + t * v};
      yy_.push_back((yy_.empty() ? 0.0 : yy_.back()) + v * v);
    }
  }

  // Fit over local indices [a, b); returns the line and its sum of squares.
  LineFit Fit(std::size_t a, std::size_t b, double* sse) const {
    const double n = s_[b][0] - s_[a][0];
    const double st = s_[b][1] - s_[a][1];
    const double stt = s_[b][2] - s_[a][2];
    const double sy = s_[b][3] - s_[a][3];
    const double sty = s_[b][4] - s_[a][4];
    const double syy = yy_[b - 1] - (a > 0 ? yy_[a - 1] : 0.0);
    const double vt = stt - st * st / n;
    const double cty = sty - st * sy / n;
    const double slope = vt > 0.0 ? cty / vt : 0.0;
    const double icpt = (sy - slope * st) / n;
    double e = syy - sy * sy / n - (vt > 0.0 ? cty * cty / vt : 0.0);
    e = std::max(e, 0.0);
    if (sse) *sse = e;
    LineFit f;
    f.slope = slope / dt_;
    // Intercept referred to t = 0 of the full curve.
    f.intercept = icpt - slope * static_cast<double>(first_);
    f.mse = e / n;
    return f;
  }

 private:
  std::size_t first_;
  double dt_;
  std::vector<std::array<double, 5>> s_;
  std::vector<double> yy_;
};

// [first index at or below top, last index at or above bottom].
std::pair<std::size_t, std::size_t> Span(const EdcCurve& edc, double top_db,
                                         double bottom_db) {
  const auto& v = edc.values;
  std::size_t a = 0;
  while (a < v.size() && v[a] > top_db) ++a;
  std::size_t b = a;
  while (b < v.size() && v[b] >= bottom_db) ++b;
  if (a >= v.size() || b >= v.size() || b < a + 3) {
    throw Error(ErrorKind::kInsufficientDecay,
                "decay curve does not span the evaluation range");
  }
  return {a, b - 1};
}

}  // namespace

EdcCurve SchroederEdcFromEnergy(std::span<const double> energy,
                                double sample_rate) {
  EdcCurve out;
  out.sample_rate = sample_rate;
  out.values.assign(energy.size(), kEdcFloorDb);
  long double acc = 0.0L;
  std::vector<long double> tail(energy.size());
  for (std::size_t i = energy.size(); i-- > 0;) {
    acc += static_cast<long double>(energy[i]);
    tail[i] = acc;
  }
  if (!(acc > 0.0L)) {
    throw Error(ErrorKind::kInvalidArgument, "EDC of an all-zero response");
  }
  for (std::size_t i = 0; i < energy.size(); ++i) {
    const double r = static_cast<double>(tail[i] / acc);
    out.values[i] = r > 0.0 ? std::max(kEdcFloorDb, PowerToDb(r)) : kEdcFloorDb;
  }
  return out;
}

EdcCurve SchroederEdc(std::span<const double> ir, double sample_rate) {
  std::vector<double> e(ir.size());
  for (std::size_t i = 0; i < ir.size(); ++i) e[i] = ir[i] * ir[i];
  return SchroederEdcFromEnergy(e, sample_rate);
}

std::vector<double> ChannelEnergy(const ImpulseResponse& ir) {
  std::vector<double> e(ir.length(), 0.0);
  for (const auto& ch : ir.channels) {
    for (std::size_t i = 0; i < ch.size() && i < e.size(); ++i) e[i] += ch[i] * ch[i];
  }
  return e;
}

LineFit FitDecayLine(const EdcCurve& edc, double top_db, double bottom_db) {
  const auto [a, b] = Span(edc, top_db, bottom_db);
  PrefixFit fit(edc.values, a, b, 1.0 / edc.sample_rate);
  return fit.Fit(0, b - a + 1, nullptr);
}

double T30(const EdcCurve& edc) {
  const LineFit f = FitDecayLine(edc, -5.0, -35.0);
  if (!(f.slope < 0.0)) {
    throw Error(ErrorKind::kInsufficientDecay, "decay curve is not decreasing");
  }
  return -60.0 / f.slope;
}

BandArray T30Bands(std::span<const double> ir, double sample_rate) {
  BandArray out{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    if (kBandCenters[b] >= sample_rate / 2.0) {
      out[b] = std::nan("");
      continue;
    }
    out[b] = T30(SchroederEdc(OctaveBandFilter(ir, b, sample_rate), sample_rate));
  }
  return out;
}

NedProfile Ned(std::span<const double> ir, double sample_rate, double window,
               double hop) {
  if (!(window > 0.0) || !(hop > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "window and hop must be positive");
  }
  NedProfile out;
  out.window = window;
  const auto w = static_cast<std::size_t>(std::lround(window * sample_rate));
  const auto h = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hop * sample_rate)));
  if (w < 2 || ir.size() < w) {
    throw Error(ErrorKind::kInvalidArgument, "NED window longer than the response");
  }
  for (std::size_t start = 0; start + w <= ir.size(); start += h) {
    double sq = 0.0;
    for (std::size_t i = start; i < start + w; ++i) sq += ir[i] * ir[i];
    const double sigma = std::sqrt(sq / static_cast<double>(w));
    std::size_t outside = 0;
    for (std::size_t i = start; i < start + w; ++i) {
      if (std::abs(ir[i]) > sigma) ++outside;
    }
    out.times.push_back((static_cast<double>(start) + 0.5 * static_cast<double>(w)) / sample_rate);
    out.values.push_back(sigma > 0.0 ? static_cast<double>(outside) /
                                           static_cast<double>(w) / kGaussianOutside
                                     : 0.0);
  }
  return out;
}

DualSlopeFit FitDualSlope(const EdcCurve& edc, double top_db,
                          double bottom_db) {
  double min_db = 0.0;
  for (double v : edc.values) min_db = std::min(min_db, v);
  if (min_db > -50.0) {
    throw Error(ErrorKind::kInsufficientDecay, "decay curve covers less than 50 dB");
  }
  bottom_db = std::max(bottom_db, min_db + 1.0);
  const auto [a, b] = Span(edc, top_db, bottom_db);
  const std::size_t n = b - a + 1;
  PrefixFit fit(edc.values, a, b, 1.0 / edc.sample_rate);
  DualSlopeFit best;
  double sse_single = 0.0;
  fit.Fit(0, n, &sse_single);
  best.single_residual = sse_single / static_cast<double>(n);
  best.residual = std::numeric_limits<double>::infinity();
  const std::size_t min_seg = std::max<std::size_t>(8, n / 50);
  for (double knee = top_db - 0.5; knee > bottom_db; knee -= 0.5) {
    std::size_t split = 0;
    while (split < n && edc.values[a + split] > knee) ++split;
    if (split < min_seg || n - split < min_seg) continue;
    double e1 = 0.0;
    double e2 = 0.0;
    const LineFit f1 = fit.Fit(0, split, &e1);
    const LineFit f2 = fit.Fit(split, n, &e2);
    const double r = (e1 + e2) / static_cast<double>(n);
    if (r < best.residual) {
      best.residual = r;
      best.slope1 = f1.slope;
      best.slope2 = f2.slope;
      best.knee_level = knee;
      best.knee_time = static_cast<double>(a + split) / edc.sample_rate;
    }
  }
  if (!std::isfinite(best.residual)) {
    throw Error(ErrorKind::kInsufficientDecay, "decay curve too short for a two-slope fit");
  }
  return best;
}

double SpectralDeviation(std::span<const double> a, std::span<const double> b,
                         double sample_rate, double lo_hz, double hi_hz) {
  ImpulseResponse ia;
  ia.channels.emplace_back(a.begin(), a.end());
  ia.sample_rate = sample_rate;
  ImpulseResponse ib;
  ib.channels.emplace_back(b.begin(), b.end());
  ib.sample_rate = sample_rate;
  return SpectralDeviation(ia, ib, lo_hz, hi_hz);
}

double SpectralDeviation(const ImpulseResponse& a, const ImpulseResponse& b,
                         double lo_hz, double hi_hz) {
  if (a.sample_rate != b.sample_rate) {
    throw Error(ErrorKind::kRateMismatch, "sample rates differ");
  }
  const std::size_t n = NextPow2(std::max({a.length(), b.length(), std::size_t{16384}}));
  const std::vector<double> d = LogGridDifferenceDb(
      SmoothPower(AveragePowerSpectrum(a, n)), SmoothPower(AveragePowerSpectrum(b, n)),
      a.sample_rate, lo_hz, hi_hz);
  double sum = 0.0;
  for (double v : d) sum += std::abs(v);
  return sum / static_cast<double>(d.size());
}

double MeanFreePath(const RoomSpec& room) {
  return 4.0 * Volume(room) / SurfaceArea(room);
}

std::size_t FirstArrival(std::span<const double> ir) {
  double peak = 0.0;
  for (double v : ir) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw Error(ErrorKind::kInvalidArgument, "silent response");
  for (std::size_t i = 0; i < ir.size(); ++i) {
    if (std::abs(ir[i]) >= 0.1 * peak) return i;
  }
  return 0;
}

double Drr(std::span<const double> ir, double sample_rate, double direct_window) {
  const std::size_t fa = FirstArrival(ir);
  const auto half = static_cast<std::size_t>(std::lround(0.5 * direct_window * sample_rate));
  const std::size_t lo = fa > half ? fa - half : 0;
  const std::size_t hi = std::min(ir.size(), fa + half + 1);
  double direct = 0.0;
  double rest = 0.0;
  for (std::size_t i = 0; i < ir.size(); ++i) {
    const double e = ir[i] * ir[i];
    if (i >= lo && i < hi) {
      direct += e;
    } else {
      rest += e;
    }
  }
  if (rest <= 0.0) return 120.0;
  return std::min(120.0, PowerToDb(direct / rest));
}

double JunctionJumpDb(std::span<const double> energy, double sample_rate,
                      double junction, double window, double t60) {
  const auto j = static_cast<std::size_t>(std::lround(junction * sample_rate));
  const auto w = static_cast<std::size_t>(std::lround(window * sample_rate));
  if (w == 0 || j < w || j + w > energy.size()) {
    throw Error(ErrorKind::kInvalidArgument, "junction window outside the response");
  }
  double before = 0.0;
  double after = 0.0;
  for (std::size_t i = j - w; i < j; ++i) before += energy[i];
  for (std::size_t i = j; i < j + w; ++i) after += energy[i];
  if (!(before > 0.0) || !(after > 0.0)) {
    throw Error(ErrorKind::kInsufficientDecay, "no energy around the junction");
  }
  return PowerToDb(after / before) + 60.0 * window / t60;
}

double EdcKinkDb(const EdcCurve& edc, double junction, double window) {
  const auto j = static_cast<std::size_t>(std::lround(junction * edc.sample_rate));
  const auto w = static_cast<std::size_t>(std::lround(window * edc.sample_rate));
  if (w == 0 || j < w || j + w >= edc.values.size()) {
    throw Error(ErrorKind::kInvalidArgument, "junction window outside the curve");
  }
  return edc.values[j] - 0.5 * (edc.values[j - w] + edc.values[j + w]);
}

}  // namespace alodsim
