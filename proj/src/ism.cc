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


#include "alodsim/ism.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "alodsim/coupled.h"

namespace alodsim {
namespace {

// One axis of the lattice: image coordinate 2nL + (1 - 2q)x hits the lower
// wall |n - q| times and the upper wall |n| times.
struct AxisImage {
  int lattice;  // 2n - q
  int lower;
  int upper;
  double offset;  // image coordinate relative to the room origin
  bool mirrored;  // odd number of reflections on this axis
};

std::vector<AxisImage> AxisImages(double length, double x, int max_order) {
  std::vector<AxisImage> out;
  for (int n = -max_order; n <= max_order; ++n) {
    for (int q = 0; q <= 1; ++q) {
      const int lower = std::abs(n - q);
      const int upper = std::abs(n);
      if (lower + upper > max_order) continue;
      out.push_back({2 * n - q, lower, upper,
                     2.0 * n * length + (1 - 2 * q) * x, q == 1});
    }
  }
  return out;
}

std::uint64_t LatticeKey(const std::array<int, 3>& m) {
  std::uint64_t key = 0;
  for (int v : m) key = (key << 21) | static_cast<std::uint64_t>(v + (1 << 20));
  return key;
}

BandArray DirectivityGain(const SourceSpec& source, const Vec3& emission) {
  if (!source.directivity) return UniformBands(1.0);
  const Frame frame = Frame::FromForward(source.orientation);
  return source.directivity->Evaluate(LocalToDirection(frame.ToLocal(emission)));
}

ReflectionTap MakeTap(double distance, const Vec3& doa, const BandArray& gain,
                      double c, int order) {
  ReflectionTap tap;
  tap.delay = distance / c;
  tap.doa = doa;
  tap.order = order;
  for (std::size_t b = 0; b < kNumBands; ++b) tap.amplitude[b] = gain[b] / distance;
  return tap;
}

void SortByDelay(std::vector<ReflectionTap>& taps) {
  std::stable_sort(taps.begin(), taps.end(),
                   [](const ReflectionTap& a, const ReflectionTap& b) {
                     return a.delay < b.delay;
                   });
}

}  // namespace

std::size_t ImageCountOfOrder(int n) {
  if (n < 0) return 0;
  if (n == 0) return 1;
  return 4 * static_cast<std::size_t>(n) * n + 2;
}

std::vector<ImageSource> EnumerateImages(const RoomSpec& room,
                                         const Vec3& source_pos,
                                         int max_order) {
  if (max_order < 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_order must be >= 0");
  }
  if (!room.Contains(source_pos)) {
    throw Error(ErrorKind::kValidation, "source outside room " + room.id);
  }
  const Vec3 local = source_pos - room.origin;
  std::array<std::vector<AxisImage>, 3> axes;
  for (int a = 0; a < 3; ++a) axes[a] = AxisImages(room.dims[a], local[a], max_order);

  std::array<BandArray, kNumWalls> wall_amp;
  for (std::size_t w = 0; w < kNumWalls; ++w) {
    for (std::size_t b = 0; b < kNumBands; ++b) {
      wall_amp[w][b] = std::sqrt(1.0 - room.absorption[w][b]);
    }
  }

  std::vector<ImageSource> images;
  images.reserve(1 + (max_order <= 20 ? 4 * max_order * max_order * max_order : 0));
  for (const AxisImage& ix : axes[0]) {
    const int ox = ix.lower + ix.upper;
    for (const AxisImage& iy : axes[1]) {
      const int oy = iy.lower + iy.upper;
      if (ox + oy > max_order) continue;
      for (const AxisImage& iz : axes[2]) {
        const int order = ox + oy + iz.lower + iz.upper;
        if (order > max_order) continue;
        ImageSource img;
        img.position = room.origin + Vec3{ix.offset, iy.offset, iz.offset};
        img.order = order;
        img.wall_hits = {ix.lower, ix.upper, iy.lower, iy.upper, iz.lower, iz.upper};
        img.lattice = {ix.lattice, iy.lattice, iz.lattice};
        img.band_gain = UniformBands(1.0);
        for (std::size_t w = 0; w < kNumWalls; ++w) {
          for (int h = 0; h < img.wall_hits[w]; ++h) {
            for (std::size_t b = 0; b < kNumBands; ++b) {
              img.band_gain[b] *= wall_amp[w][b];
            }
          }
        }
        images.push_back(img);
      }
    }
  }
  std::sort(images.begin(), images.end(),
            [](const ImageSource& a, const ImageSource& b) {
              return std::tie(a.order, a.wall_hits, a.lattice) <
                     std::tie(b.order, b.wall_hits, b.lattice);
            });
  return images;
}

std::vector<ImageSource> ApplyJitter(std::vector<ImageSource> images,
                                     const JitterSettings& jitter,
                                     const CounterRng& rng) {
  if (!jitter.enabled || jitter.sigma_per_order == 0.0) return images;
  for (ImageSource& img : images) {
    if (img.order < 2) continue;
    CounterRng r = rng.Substream(LatticeKey(img.lattice));
    const double sigma = jitter.sigma_per_order * img.order;
    const double dx = r.Gaussian();
    const double dy = r.Gaussian();
    const double dz = r.Gaussian();
    img.position = img.position + sigma * Vec3{dx, dy, dz};
    img.jittered = true;
  }
  return images;
}

std::vector<ReflectionTap> TapsFromImages(std::span<const ImageSource> images,
                                          const Vec3& receiver_pos,
                                          double speed_of_sound,
                                          const SourceSpec& source,
                                          bool air_absorption) {
  const double level = DbToAmplitude(source.level_db);
  std::vector<ReflectionTap> taps;
  taps.reserve(images.size());
  for (const ImageSource& img : images) {
    const Vec3 path = img.position - receiver_pos;
    const double r = Norm(path);
    if (!(r > 1e-9)) {
      throw Error(ErrorKind::kDegenerateGeometry,
                  "image source coincides with receiver");
    }
    // Emission direction at the real source: mirror the outgoing ray back
    // through each axis reflected an odd number of times.
    Vec3 emission = -1.0 * path;
    for (int a = 0; a < 3; ++a) {
      if ((img.wall_hits[2 * a] + img.wall_hits[2 * a + 1]) % 2 == 1) {
        emission[a] = -emission[a];
      }
    }
    const BandArray dir = DirectivityGain(source, emission);
    BandArray gain;
    for (std::size_t b = 0; b < kNumBands; ++b) {
      gain[b] = img.band_gain[b] * dir[b] * level;
      if (air_absorption) gain[b] *= std::exp(-0.5 * AirAttenuation()[b] * r);
    }
    ReflectionTap tap = MakeTap(r, (1.0 / r) * path, gain, speed_of_sound, img.order);
    tap.jittered = img.jittered;
    taps.push_back(tap);
  }
  SortByDelay(taps);
  return taps;
}

std::vector<ReflectionTap> SmearTaps(std::vector<ReflectionTap> taps,
                                     const BandArray& scattering,
                                     double burst_seconds_per_order,
                                     const CounterRng& rng) {
  bool any = false;
  for (double s : scattering) any = any || s > 0.0;
  if (!any) return taps;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    ReflectionTap& tap = taps[i];
    if (tap.order < 1) continue;
    DiffuseBurst burst;
    burst.duration = burst_seconds_per_order * tap.order;
    burst.seed = rng.Substream(i).NextU64();
    for (std::size_t b = 0; b < kNumBands; ++b) {
      const double s = std::clamp(scattering[b], 0.0, 1.0);
      burst.amplitude[b] = std::sqrt(s) * tap.amplitude[b];
      tap.amplitude[b] *= std::sqrt(1.0 - s);
    }
    tap.diffuse_burst = burst;
  }
  return taps;
}

std::vector<double> BurstSignal(const DiffuseBurst& burst, double sample_rate) {
  const std::size_t n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(burst.duration * sample_rate)));
  // Envelope reaches -60 dB (ln 1000 ~ 6.9 time constants) at the end.
  const double tau = std::max(burst.duration, 1.0 / sample_rate) / 6.9;
  CounterRng rng(burst.seed);
  std::vector<double> out(n);
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = rng.Gaussian() * std::exp(-static_cast<double>(i) / (sample_rate * tau));
    energy += out[i] * out[i];
  }
  const double norm = energy > 0.0 ? 1.0 / std::sqrt(energy) : 0.0;
  for (double& v : out) v *= norm;
  return out;
}

std::optional<ReflectionTap> ReflectFinitePanel(const PanelSpec& panel,
                                                const Vec3& source_pos,
                                                const Vec3& receiver_pos,
                                                double speed_of_sound) {
  const Vec3& c0 = panel.corners[0];
  const Vec3 e1 = panel.corners[1] - c0;
  const Vec3 e2 = panel.corners[3] - c0;
  const Vec3 n = Normalized(Cross(e1, e2));
  const double ds = Dot(source_pos - c0, n);
  const double dr = Dot(receiver_pos - c0, n);
  if (ds * dr <= 0.0) return std::nullopt;

  const Vec3 mirror = source_pos - 2.0 * ds * n;
  const Vec3 seg = receiver_pos - mirror;
  const double denom = Dot(seg, n);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = Dot(c0 - mirror, n) / denom;
  if (!(t > 0.0 && t < 1.0)) return std::nullopt;
  const Vec3 hit = mirror + t * seg;
  const double l1 = Norm(e1);
  const double l2 = Norm(e2);
  const double u = Dot(hit - c0, e1) / l1;
  const double v = Dot(hit - c0, e2) / l2;
  if (!(u > 0.0 && u < l1 && v > 0.0 && v < l2)) return std::nullopt;

  const double r = Norm(seg);
  BandArray gain;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    gain[b] = std::sqrt(1.0 - panel.absorption[b]);
  }
  return MakeTap(r, (-1.0 / r) * seg, gain, speed_of_sound, 1);
}

std::vector<PanelSpec> PanelsInRoom(const SceneSpec& scene,
                                    const RoomSpec& room) {
  std::vector<PanelSpec> out;
  for (const PanelSpec& p : scene.panels) {
    bool inside = true;
    for (const Vec3& c : p.corners) inside = inside && room.Contains(c, 1e-6);
    if (inside) out.push_back(p);
  }
  return out;
}

double FirstArrivalOfOrder(const RoomSpec& room, const Vec3& source_pos,
                           const Vec3& receiver_pos, int order,
                           double speed_of_sound) {
  const Vec3 local = source_pos - room.origin;
  double best = std::numeric_limits<double>::infinity();
  std::array<std::vector<AxisImage>, 3> axes;
  for (int a = 0; a < 3; ++a) axes[a] = AxisImages(room.dims[a], local[a], order);
  for (const AxisImage& ix : axes[0]) {
    for (const AxisImage& iy : axes[1]) {
      for (const AxisImage& iz : axes[2]) {
        if (ix.lower + ix.upper + iy.lower + iy.upper + iz.lower + iz.upper !=
            order) {
          continue;
        }
        const Vec3 p = room.origin + Vec3{ix.offset, iy.offset, iz.offset};
        best = std::min(best, Distance(p, receiver_pos));
      }
    }
  }
  return best / speed_of_sound;
}

SpatialIR RoomEarlySpatialIR(const RoomSpec& room, const SourceSpec& source,
                             const Vec3& receiver_pos,
                             const Vec3& receiver_orientation,
                             std::span<const PanelSpec> panels,
                             const RenderingProfile& profile,
                             double sample_rate, double speed_of_sound,
                             const CounterRng& rng) {
  if (!room.Contains(receiver_pos)) {
    throw Error(ErrorKind::kValidation, "receiver outside room " + room.id);
  }
  SpatialIR out;
  out.sample_rate = sample_rate;
  out.listener = Frame::FromForward(receiver_orientation);

  const int order = profile.anechoic ? 0 : profile.ism_order;
  std::vector<ImageSource> images = EnumerateImages(room, source.position, order);
  if (profile.jitter.enabled) {
    images = ApplyJitter(std::move(images), profile.jitter, rng.Substream(1));
  }
  out.taps = TapsFromImages(images, receiver_pos, speed_of_sound, source,
                            profile.air_absorption);

  if (profile.panels_enabled && !profile.anechoic) {
    const double level = DbToAmplitude(source.level_db);
    for (const PanelSpec& panel : panels) {
      auto tap = ReflectFinitePanel(panel, source.position, receiver_pos,
                                    speed_of_sound);
      if (!tap) continue;
      // Emission direction: the incoming ray mirrored back across the panel.
      const Vec3 n = Normalized(Cross(panel.corners[1] - panel.corners[0],
                                      panel.corners[3] - panel.corners[0]));
      const Vec3 out_dir = -1.0 * tap->doa;
      const Vec3 emission = out_dir - 2.0 * Dot(out_dir, n) * n;
      const BandArray dir = DirectivityGain(source, -1.0 * emission);
      for (std::size_t b = 0; b < kNumBands; ++b) {
        tap->amplitude[b] *= dir[b] * level;
      }
      out.taps.push_back(*tap);
    }
    SortByDelay(out.taps);
  }

  if (profile.smearing.enabled && !profile.anechoic) {
    const BandArray s = profile.smearing.scattering.value_or(room.scattering);
    out.taps = SmearTaps(std::move(out.taps), s,
                         profile.smearing.burst_ms_per_order * 1e-3,
                         rng.Substream(2));
  }
  return out;
}

SpatialIR EarlySpatialIR(const SceneSpec& scene,
                         const RenderingProfile& profile,
                         std::string_view source_id,
                         std::string_view receiver_id) {
  const SourceSpec& source =
      source_id.empty() ? scene.sources.at(0) : scene.Source(source_id);
  const ReceiverSpec& receiver =
      receiver_id.empty() ? scene.receivers.at(0) : scene.Receiver(receiver_id);
  const double fs = scene.sample_rate;
  const double c = scene.speed_of_sound;
  if (source.room != receiver.room) {
    if (profile.anechoic) {
      const CoupledPlan plan = MakeCoupledPlan(scene, profile, source, receiver);
      SpatialIR out;
      out.sample_rate = fs;
      out.listener = Frame::FromForward(receiver.orientation);
      out.taps.push_back(OccludedDirect(plan, source, receiver, c));
      return out;
    }
    RenderingProfile early_only = profile;
    early_only.fdn_enabled = false;
    return CoupleTwoStage(scene, early_only, source, receiver,
                          CounterRng(scene.rng_seed));
  }
  const RoomSpec& room = scene.Room(source.room);
  const std::vector<PanelSpec> panels = PanelsInRoom(scene, room);
  return RoomEarlySpatialIR(room, source, receiver.position, receiver.orientation,
                            panels, profile, fs, c,
                            CounterRng(scene.rng_seed).Substream(0x10));
}

}  // namespace alodsim
