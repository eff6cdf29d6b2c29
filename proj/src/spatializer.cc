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


#include "alodsim/spatializer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <cstdlib>
#include <sstream>

#include "alodsim/dsp.h"
#include "alodsim/wav.h"

namespace alodsim {
namespace {

bool UniformBandsEqual(const BandArray& a) {
  for (std::size_t b = 1; b < kNumBands; ++b) {
    if (a[b] != a[0]) return false;
  }
  return true;
}

// Accumulates components for one output channel. Components whose band
// amplitudes are all equal bypass the filterbank.
class ChannelBuilder {
 public:
  ChannelBuilder(std::size_t length, std::size_t band_length)
      : length_(length), band_length_(band_length), broadband_(length, 0.0) {}

  void Add(std::size_t pos, const BandArray& amp,
           std::span<const double> signal) {
    if (pos >= length_) return;
    if (UniformBandsEqual(amp)) {
      AddTo(broadband_, pos, amp[0], signal);
      return;
    }
    if (bands_.empty()) {
      bands_.assign(kNumBands, std::vector<double>(band_length_, 0.0));
    }
    for (std::size_t b = 0; b < kNumBands; ++b) AddTo(bands_[b], pos, amp[b], signal);
  }

  void AddBroadband(std::size_t pos, double gain, std::span<const double> signal) {
    AddTo(broadband_, pos, gain, signal);
  }

  std::vector<double> Finish(double sample_rate) {
    if (!bands_.empty()) {
      const std::vector<double> filtered = SumBandFiltered(bands_, sample_rate);
      for (std::size_t i = 0; i < filtered.size() && i < length_; ++i) {
        broadband_[i] += filtered[i];
      }
    }
    return std::move(broadband_);
  }

 private:
  static void AddTo(std::vector<double>& dst, std::size_t pos, double gain,
                    std::span<const double> signal) {
    if (gain == 0.0 || pos >= dst.size()) return;
    const std::size_t n = std::min(signal.size(), dst.size() - pos);
    for (std::size_t i = 0; i < n; ++i) dst[pos + i] += gain * signal[i];
  }

  std::size_t length_;
  std::size_t band_length_;
  std::vector<double> broadband_;
  std::vector<std::vector<double>> bands_;
};

std::size_t TapSample(const ReflectionTap& tap, double fs) {
  return static_cast<std::size_t>(std::max(0L, std::lround(tap.delay * fs)));
}

// Samples needed to hold every tap (with bursts) convolved with a kernel of
// `kernel_len` samples.
std::size_t EarlySpan(const SpatialIR& ir, std::size_t kernel_len) {
  std::size_t n = 0;
  for (const ReflectionTap& tap : ir.taps) {
    std::size_t end = TapSample(tap, ir.sample_rate) + kernel_len;
    if (tap.diffuse_burst) {
      end += static_cast<std::size_t>(
          std::lround(tap.diffuse_burst->duration * ir.sample_rate));
    }
    n = std::max(n, end);
  }
  return n;
}

std::size_t NominalLength(const SpatialIR& ir, std::size_t kernel_len) {
  if (ir.length > 0) return ir.length;
  std::size_t n = EarlySpan(ir, kernel_len);
  for (const TailStream& s : ir.tail) n = std::max(n, s.start + s.samples.size());
  return std::max<std::size_t>(n, 1);
}

// Where one component goes: a channel plus either an FIR kernel or, when
// the kernel is empty, a scalar gain.
struct Route {
  std::size_t channel;
  std::span<const double> kernel;
  double gain = 1.0;
};

template <typename RouteFn>
std::vector<std::vector<double>> RenderChannels(const SpatialIR& ir,
                                                std::size_t num_channels,
                                                std::size_t kernel_len,
                                                RouteFn route) {
  const double fs = ir.sample_rate;
  const std::size_t length = NominalLength(ir, kernel_len);
  const std::size_t band_len = std::min(length, EarlySpan(ir, kernel_len));
  const bool has_signature = !ir.signature.empty();
  const std::size_t out_len =
      has_signature ? length + ir.signature.size() - 1 : length;

  std::map<std::size_t, ChannelBuilder> flagged;
  std::map<std::size_t, std::vector<double>> direct;
  auto builder = [&](std::size_t ch) -> ChannelBuilder& {
    auto it = flagged.find(ch);
    if (it == flagged.end()) {
      it = flagged.emplace(ch, ChannelBuilder(length, band_len)).first;
    }
    return it->second;
  };
  auto direct_buffer = [&](std::size_t ch) -> std::vector<double>& {
    auto& buf = direct[ch];
    buf.resize(out_len, 0.0);
    return buf;
  };

  for (const ReflectionTap& tap : ir.taps) {
    const std::size_t pos = TapSample(tap, fs);
    if (pos >= length) continue;
    std::vector<double> burst;
    if (tap.diffuse_burst) burst = BurstSignal(*tap.diffuse_burst, fs);
    for (const Route& r : route(ir.listener.ToLocal(tap.doa))) {
      ChannelBuilder& b = builder(r.channel);
      const double unit = r.gain;
      b.Add(pos, tap.amplitude,
            r.kernel.empty() ? std::span<const double>(&unit, 1) : r.kernel);
      if (burst.empty()) continue;
      std::vector<double> shaped;
      if (r.kernel.empty()) {
        shaped = burst;
        for (double& v : shaped) v *= r.gain;
      } else {
        shaped = Convolve(burst, r.kernel);
      }
      b.Add(pos, tap.diffuse_burst->amplitude, shaped);
    }
  }

  // Tail streams sharing a kernel are summed before one convolution.
  struct Group {
    std::span<const double> kernel;
    std::vector<double> sum;
  };
  std::map<std::tuple<std::size_t, bool, const double*>, Group> groups;
  for (const TailStream& s : ir.tail) {
    const bool flag = s.apply_signature || !has_signature;
    for (const Route& r : route(ir.listener.ToLocal(s.direction))) {
      if (r.kernel.empty()) {
        if (flag) {
          builder(r.channel).AddBroadband(s.start, r.gain, s.samples);
        } else {
          auto& dst = direct_buffer(r.channel);
          for (std::size_t i = 0; i < s.samples.size() && s.start + i < dst.size(); ++i) {
            dst[s.start + i] += r.gain * s.samples[i];
          }
        }
        continue;
      }
      Group& g = groups[{r.channel, flag, r.kernel.data()}];
      g.kernel = r.kernel;
      const std::size_t cap = flag ? length : out_len;
      g.sum.resize(cap, 0.0);
      for (std::size_t i = 0; i < s.samples.size() && s.start + i < cap; ++i) {
        g.sum[s.start + i] += s.samples[i];
      }
    }
  }
  for (auto& [key, g] : groups) {
    const auto [ch, flag, ptr] = key;
    const std::vector<double> conv = Convolve(g.sum, g.kernel);
    if (flag) {
      builder(ch).AddBroadband(0, 1.0, conv);
    } else {
      auto& dst = direct_buffer(ch);
      for (std::size_t i = 0; i < conv.size() && i < dst.size(); ++i) dst[i] += conv[i];
    }
  }

  std::vector<std::vector<double>> out(num_channels,
                                       std::vector<double>(out_len, 0.0));
  for (auto& [ch, b] : flagged) {
    std::vector<double> x = b.Finish(fs);
    if (has_signature) x = Convolve(x, ir.signature);
    std::copy_n(x.begin(), std::min(x.size(), out_len), out[ch].begin());
  }
  for (auto& [ch, x] : direct) {
    for (std::size_t i = 0; i < out_len; ++i) out[ch][i] += x[i];
  }
  return out;
}

std::array<double, 9> Inverse3(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Columns a, b, c; inverse rows are the reciprocal basis.
  const Vec3 r0 = Cross(b, c);
  const Vec3 r1 = Cross(c, a);
  const Vec3 r2 = Cross(a, b);
  const double det = Dot(a, r0);
  return {r0.x / det, r0.y / det, r0.z / det, r1.x / det, r1.y / det,
          r1.z / det, r2.x / det, r2.y / det, r2.z / det};
}

}  // namespace

void ValidateImpulseResponse(const ImpulseResponse& ir) {
  if (ir.channels.empty()) throw Error(ErrorKind::kValidation, "impulse response has no channels");
  for (const auto& ch : ir.channels) {
    if (ch.size() != ir.channels.front().size()) {
      throw Error(ErrorKind::kValidation, "impulse response channel lengths differ");
    }
    for (double v : ch) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kValidation, "impulse response has non-finite samples");
      }
    }
  }
}

std::size_t HrtfSet::Nearest(const Vec3& local_direction) const {
  if (directions.empty()) throw Error(ErrorKind::kInvalidArgument, "empty HRTF set");
  const Vec3 u = Normalized(local_direction);
  std::size_t best = 0;
  double best_dot = -2.0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const double d = Dot(u, directions[i]);
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return best;
}

void ValidateHrtfSet(const HrtfSet& set) {
  if (set.directions.size() < 4 || set.filters.size() != set.directions.size()) {
    throw Error(ErrorKind::kValidation, "HRTF set needs >= 4 directions with filters");
  }
  const std::size_t len = set.filter_length();
  if (len == 0) throw Error(ErrorKind::kValidation, "HRTF filters are empty");
  for (const auto& pair : set.filters) {
    if (pair[0].size() != len || pair[1].size() != len) {
      throw Error(ErrorKind::kValidation, "HRTF filter lengths differ");
    }
  }
  // Non-coplanar: some tetrahedron spanned by the directions has volume.
  const Vec3& d0 = set.directions[0];
  std::size_t i1 = 0;
  double far = 0.0;
  for (std::size_t i = 1; i < set.directions.size(); ++i) {
    const double d = Distance(set.directions[i], d0);
    if (d > far) far = d, i1 = i;
  }
  const Vec3 e1 = set.directions[i1] - d0;
  std::size_t i2 = 0;
  double area = 0.0;
  for (std::size_t i = 1; i < set.directions.size(); ++i) {
    const double a = Norm(Cross(e1, set.directions[i] - d0));
    if (a > area) area = a, i2 = i;
  }
  const Vec3 nrm = Cross(e1, set.directions[i2] - d0);
  double vol = 0.0;
  for (const Vec3& d : set.directions) vol = std::max(vol, std::abs(Dot(nrm, d - d0)));
  if (!(vol > 1e-9)) throw Error(ErrorKind::kValidation, "HRTF directions are coplanar");
}

HrtfSet SphericalHeadHrtf(double sample_rate, double head_radius,
                          std::size_t length) {
  constexpr double kC = 343.0;
  constexpr double kAlphaMin = 0.1;
  constexpr double kThetaMin = 150.0 * kPi / 180.0;
  const double bulk = 32.0 / sample_rate;
  const double w0 = kC / head_radius;
  const std::size_t nfft = 2 * NextPow2(length);

  HrtfSet set;
  set.sample_rate = sample_rate;
  std::vector<Direction> grid;
  for (int el = -80; el <= 80; el += 10) {
    for (int az = -180; az < 180; az += 5) grid.push_back({double(az), double(el)});
  }
  grid.push_back({0.0, 90.0});
  grid.push_back({0.0, -90.0});

  std::vector<Complex> spec(nfft / 2 + 1);
  for (const Direction& d : grid) {
    const Vec3 u = DirectionToLocal(d);
    set.directions.push_back(u);
    std::array<std::vector<double>, 2> pair;
    for (int ear = 0; ear < 2; ++ear) {
      const Vec3 axis{0.0, ear == 0 ? 1.0 : -1.0, 0.0};
      const double theta = std::acos(std::clamp(Dot(u, axis), -1.0, 1.0));
      const double alpha = (1.0 + kAlphaMin / 2.0) +
                           (1.0 - kAlphaMin / 2.0) * std::cos(theta / kThetaMin * kPi);
      const double tau = theta < kPi / 2.0
                             ? -head_radius / kC * std::cos(theta)
                             : head_radius / kC * (theta - kPi / 2.0);
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const double w = 2.0 * kPi * sample_rate * k / nfft;
        const Complex shadow = Complex(1.0, alpha * w / (2.0 * w0)) /
                               Complex(1.0, w / (2.0 * w0));
        spec[k] = shadow * std::polar(1.0, -w * (tau + bulk));
      }
      std::vector<double> h = Irfft(spec, nfft);
      h.resize(length);
      const std::size_t fade = length / 8;
      for (std::size_t i = 0; i < fade; ++i) {
        h[length - fade + i] *= 0.5 * (1.0 + std::cos(kPi * (i + 0.5) / fade));
      }
      pair[ear] = std::move(h);
    }
    set.filters.push_back(std::move(pair));
  }
  return set;
}

HrtfSet LoadHrtfDirectory(const std::string& directory,
                          double expected_sample_rate) {
  const std::string index_path = directory + "/index.txt";
  std::ifstream in(index_path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + index_path);
  HrtfSet set;
  set.sample_rate = expected_sample_rate;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double az = 0.0;
    double el = 0.0;
    std::string file;
    if (!(ss >> az >> el >> file)) {
      throw Error(ErrorKind::kParse,
                  index_path + ":" + std::to_string(line_no) + ": expected 'az el file'");
    }
    const WavData wav = ReadWav(directory + "/" + file);
    if (wav.channels.size() != 2) {
      throw Error(ErrorKind::kValidation, file + ": HRIR must be stereo");
    }
    if (wav.sample_rate != expected_sample_rate) {
      throw Error(ErrorKind::kRateMismatch,
                  file + ": sample rate " + std::to_string(wav.sample_rate) +
                      " != " + std::to_string(expected_sample_rate));
    }
    set.directions.push_back(DirectionToLocal({az, el}));
    set.filters.push_back({wav.channels[0], wav.channels[1]});
  }
  ValidateHrtfSet(set);
  return set;
}

std::shared_ptr<const HrtfSet> DefaultHrtf(double sample_rate) {
  if (const char* dir = std::getenv("ALODSIM_HRTF_DIR"); dir && *dir) {
    return std::make_shared<const HrtfSet>(LoadHrtfDirectory(dir, sample_rate));
  }
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const HrtfSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& entry = cache[sample_rate];
  if (!entry) entry = std::make_shared<const HrtfSet>(SphericalHeadHrtf(sample_rate));
  return entry;
}

std::size_t LoudspeakerLayout::FrontalIndex() const {
  std::size_t best = 0;
  double best_dot = -2.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double d = Direction(i).x;
    if (d > best_dot + 1e-12) best_dot = d, best = i;
  }
  return best;
}

std::vector<std::array<std::size_t, 3>> TriangulateLayout(
    const std::vector<Vec3>& directions) {
  constexpr double kEps = 1e-9;
  const std::size_t n = directions.size();
  std::set<std::vector<std::size_t>> faces;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec3 normal = Cross(directions[j] - directions[i], directions[k] - directions[i]);
        const double len = Norm(normal);
        if (len < 1e-12) continue;
        normal = (1.0 / len) * normal;
        double d = Dot(normal, directions[i]);
        if (d < 0.0) normal = -normal, d = -d;
        if (d < 1e-6) continue;  // plane through the listener
        bool hull = true;
        std::vector<std::size_t> on_plane;
        for (std::size_t m = 0; m < n && hull; ++m) {
          const double h = Dot(normal, directions[m]) - d;
          if (h > kEps) hull = false;
          if (std::abs(h) <= kEps) on_plane.push_back(m);
        }
        if (hull) faces.insert(on_plane);
      }
    }
  }
  std::vector<std::array<std::size_t, 3>> tris;
  for (const auto& face : faces) {
    if (face.size() == 3) {
      tris.push_back({face[0], face[1], face[2]});
      continue;
    }
    // Convex polygon: order by angle around the centroid, fan from the
    // lowest index.
    Vec3 centroid;
    for (std::size_t v : face) centroid = centroid + directions[v];
    centroid = (1.0 / face.size()) * centroid;
    const Vec3 normal = Normalized(centroid);
    const Vec3 e1 = Normalized(directions[face[0]] - centroid);
    const Vec3 e2 = Cross(normal, e1);
    std::vector<std::pair<double, std::size_t>> ring;
    for (std::size_t v : face) {
      const Vec3 p = directions[v] - centroid;
      ring.push_back({std::atan2(Dot(p, e2), Dot(p, e1)), v});
    }
    std::sort(ring.begin(), ring.end());
    auto first = std::min_element(ring.begin(), ring.end(),
                                  [](auto& a, auto& b) { return a.second < b.second; });
    std::rotate(ring.begin(), first, ring.end());
    for (std::size_t t = 1; t + 1 < ring.size(); ++t) {
      tris.push_back({ring[0].second, ring[t].second, ring[t + 1].second});
    }
  }
  return tris;
}

LoudspeakerLayout MakeLayout(std::string name, std::vector<Vec3> positions,
                             const Vec3& center) {
  LoudspeakerLayout layout;
  layout.name = std::move(name);
  layout.positions = std::move(positions);
  layout.center = center;
  std::vector<Vec3> dirs;
  for (std::size_t i = 0; i < layout.positions.size(); ++i) {
    const Vec3 d = layout.positions[i] - center;
    if (!(Norm(d) > 0.0)) {
      throw Error(ErrorKind::kValidation, "speaker at the listening position");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (Distance(layout.positions[i], layout.positions[j]) < 1e-9) {
        throw Error(ErrorKind::kValidation,
                    "duplicate speaker position " + std::to_string(i));
      }
    }
    dirs.push_back(Normalized(d));
  }
  if (dirs.size() < 3) throw Error(ErrorKind::kValidation, "layout needs >= 3 speakers");
  layout.triangles = TriangulateLayout(dirs);
  for (const auto& t : layout.triangles) {
    layout.inverse_bases.push_back(Inverse3(dirs[t[0]], dirs[t[1]], dirs[t[2]]));
  }
  layout.channel_gain.assign(layout.positions.size(), 1.0);
  layout.channel_delay.assign(layout.positions.size(), 0);
  return layout;
}

LoudspeakerLayout ArrayPreset86() {
  static const LoudspeakerLayout kLayout = [] {
    const Vec3 center{0.0, 0.0, 1.8};
    constexpr double kRadius = 2.4;
    const std::vector<std::pair<double, int>> rings = {
        {0.0, 48}, {30.0, 12}, {-30.0, 12}, {60.0, 6}, {-60.0, 6}, {90.0, 1}, {-90.0, 1}};
    std::vector<Vec3> pos;
    for (const auto& [el, count] : rings) {
      for (int i = 0; i < count; ++i) {
        const double az = 360.0 * i / count;
        pos.push_back(center + kRadius * DirectionToLocal({az, el}));
      }
    }
    return MakeLayout("86-preset", std::move(pos), center);
  }();
  return kLayout;
}

LoudspeakerLayout LoadLayout(const std::string& path_or_name) {
  if (path_or_name == "86-preset") return ArrayPreset86();
  std::ifstream in(path_or_name);
  if (!in) throw Error(ErrorKind::kIo, "cannot open layout " + path_or_name);
  std::vector<Vec3> pos;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double az = 0.0;
    double el = 0.0;
    if (!(ss >> az)) continue;
    if (!(ss >> el)) {
      throw Error(ErrorKind::kParse, path_or_name + ":" + std::to_string(line_no) +
                                         ": expected 'azimuth elevation [radius]'");
    }
    double radius = 1.0;
    ss >> radius;
    pos.push_back(radius * DirectionToLocal({az, el}));
  }
  return MakeLayout(path_or_name, std::move(pos), Vec3{});
}

VbapResult VbapGains(const Vec3& direction, const LoudspeakerLayout& layout) {
  const Vec3 u = Normalized(direction);
  VbapResult out;
  std::size_t best = layout.triangles.size();
  double best_min = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best_g{};
  for (std::size_t t = 0; t < layout.triangles.size(); ++t) {
    const auto& m = layout.inverse_bases[t];
    const std::array<double, 3> g = {m[0] * u.x + m[1] * u.y + m[2] * u.z,
                                     m[3] * u.x + m[4] * u.y + m[5] * u.z,
                                     m[6] * u.x + m[7] * u.y + m[8] * u.z};
    const double gmin = std::min({g[0], g[1], g[2]});
    if (gmin >= -1e-10) {
      best = t;
      best_g = g;
      best_min = gmin;
      break;
    }
    if (gmin > best_min) best_min = gmin, best = t, best_g = g;
  }
  if (best == layout.triangles.size()) {
    throw Error(ErrorKind::kInvalidArgument, "layout has no triangles");
  }
  out.fallback = best_min < -1e-10;
  double norm = 0.0;
  for (double& g : best_g) {
    if (g < 1e-9) g = 0.0;
    norm += g * g;
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) {
    // Degenerate fallback: nearest single speaker.
    std::size_t k = layout.triangles[best][0];
    double kd = -2.0;
    for (std::size_t i : layout.triangles[best]) {
      const double d = Dot(layout.Direction(i), u);
      if (d > kd) kd = d, k = i;
    }
    out.gains.push_back({k, 1.0});
    out.fallback = true;
    return out;
  }
  std::array<std::pair<std::size_t, double>, 3> entries;
  for (int i = 0; i < 3; ++i) entries[i] = {layout.triangles[best][i], best_g[i] / norm};
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) {
    if (e.second > 0.0) out.gains.push_back(e);
  }
  return out;
}

ImpulseResponse Binauralize(const SpatialIR& ir, const HrtfSet& hrtf) {
  if (hrtf.directions.empty()) throw Error(ErrorKind::kInvalidArgument, "empty HRTF set");
  if (hrtf.sample_rate != ir.sample_rate) {
    throw Error(ErrorKind::kRateMismatch, "HRTF sample rate differs from the scene");
  }
  ImpulseResponse out;
  out.sample_rate = ir.sample_rate;
  out.semantics = ChannelSemantics::kBinauralLR;
  out.channels = RenderChannels(
      ir, 2, hrtf.filter_length(), [&](const Vec3& local) {
        const std::size_t k = hrtf.Nearest(local);
        return std::array<Route, 2>{Route{0, hrtf.filters[k][0], 1.0},
                                    Route{1, hrtf.filters[k][1], 1.0}};
      });
  return out;
}

ImpulseResponse RenderArray(const SpatialIR& ir, const LoudspeakerLayout& layout) {
  const std::size_t n = layout.positions.size();
  ImpulseResponse out;
  out.sample_rate = ir.sample_rate;
  out.semantics = ChannelSemantics::kArrayIndexed;
  out.channels = RenderChannels(ir, n, 1, [&](const Vec3& local) {
    std::vector<Route> routes;
    for (const auto& [ch, g] : VbapGains(local, layout).gains) {
      routes.push_back({ch, {}, g});
    }
    return routes;
  });
  // Calibration: per-channel level and delay.
  for (std::size_t ch = 0; ch < n; ++ch) {
    const double g = ch < layout.channel_gain.size() ? layout.channel_gain[ch] : 1.0;
    const std::size_t d = ch < layout.channel_delay.size() ? layout.channel_delay[ch] : 0;
    auto& x = out.channels[ch];
    if (d > 0) {
      x.insert(x.begin(), std::min(d, x.size()), 0.0);
      x.resize(x.size() - std::min(d, x.size()));
    }
    if (g != 1.0) {
      for (double& v : x) v *= g;
    }
  }
  return out;
}

ImpulseResponse RenderMono(const SpatialIR& ir) {
  ImpulseResponse out;
  out.sample_rate = ir.sample_rate;
  out.semantics = ChannelSemantics::kMono;
  out.channels = RenderChannels(ir, 1, 1, [](const Vec3&) {
    return std::array<Route, 1>{Route{0, {}, 1.0}};
  });
  return out;
}

ImpulseResponse Diotic(const ImpulseResponse& ir) {
  if (ir.channels.size() != 2) {
    throw Error(ErrorKind::kInvalidArgument, "diotic needs a two-channel input");
  }
  ImpulseResponse out = ir;
  out.channels[1] = out.channels[0];
  return out;
}

ImpulseResponse DioticArray(const ImpulseResponse& ir,
                            const LoudspeakerLayout& layout) {
  if (ir.channels.empty()) throw Error(ErrorKind::kInvalidArgument, "empty impulse response");
  std::vector<double> mono;
  if (ir.semantics == ChannelSemantics::kBinauralLR) {
    mono = ir.channels[0];
  } else {
    mono.assign(ir.length(), 0.0);
    for (const auto& ch : ir.channels) {
      for (std::size_t i = 0; i < mono.size(); ++i) mono[i] += ch[i];
    }
  }
  ImpulseResponse out;
  out.sample_rate = ir.sample_rate;
  out.semantics = ChannelSemantics::kArrayIndexed;
  out.channels.assign(layout.positions.size(), std::vector<double>(mono.size(), 0.0));
  out.channels[layout.FrontalIndex()] = std::move(mono);
  return out;
}

}  // namespace alodsim
