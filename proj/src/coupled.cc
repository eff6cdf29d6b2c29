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


#include "alodsim/coupled.h"

#include <algorithm>
#include <cmath>

#include "alodsim/fdn.h"
#include "alodsim/pipeline.h"
#include "alodsim/spatializer.h"

namespace alodsim {
namespace {

bool OnFace(const RoomSpec& room, int axis, double coord) {
  return std::abs(coord - room.origin[axis]) < 1e-6 ||
         std::abs(coord - room.MaxCorner()[axis]) < 1e-6;
}

struct StageInfo {
  RoomRunInfo source_room;
  RoomRunInfo receiver_room;
};

SpatialIR TwoStage(const SceneSpec& scene, const RenderingProfile& profile,
                   const SourceSpec& source, const ReceiverSpec& receiver,
                   const CounterRng& rng, std::size_t num_samples,
                   StageInfo* info) {
  const CoupledPlan plan = MakeCoupledPlan(scene, profile, source, receiver);
  const RoomSpec& src_room = scene.Room(source.room);
  const RoomSpec& rcv_room = scene.Room(receiver.room);
  const Vec3 door_in_src = ApertureAnchor(plan, src_room);

  SpatialIR stage1 = SimulateRoom(
      src_room, source, door_in_src, DoorSource(plan, rcv_room).orientation,
      PanelsInRoom(scene, src_room), profile, scene.sample_rate,
      scene.speed_of_sound, num_samples, rng.Substream(1),
      info ? &info->source_room : nullptr);
  std::vector<double> h1 = RenderMono(stage1).channels.front();
  if (num_samples > 0) h1.resize(num_samples, 0.0);

  const SourceSpec door = DoorSource(plan, rcv_room);
  SpatialIR out = SimulateRoom(
      rcv_room, door, receiver.position, receiver.orientation,
      PanelsInRoom(scene, rcv_room), profile, scene.sample_rate,
      scene.speed_of_sound, num_samples, rng.Substream(2),
      info ? &info->receiver_room : nullptr);
  if (num_samples > 0) out.length = num_samples;
  out.signature = std::move(h1);
  return out;
}

}  // namespace

double SharedWallArea(const SceneSpec& scene, const ApertureSpec& aperture) {
  const RoomSpec& a = scene.Room(aperture.connects[0]);
  const RoomSpec& b = scene.Room(aperture.connects[1]);
  for (int axis = 0; axis < 3; ++axis) {
    if (!OnFace(a, axis, aperture.center[axis]) ||
        !OnFace(b, axis, aperture.center[axis])) {
      continue;
    }
    double area = 1.0;
    for (int other = 0; other < 3; ++other) {
      if (other == axis) continue;
      const double lo = std::max(a.origin[other], b.origin[other]);
      const double hi = std::min(a.MaxCorner()[other], b.MaxCorner()[other]);
      area *= std::max(0.0, hi - lo);
    }
    return area;
  }
  throw Error(ErrorKind::kValidation,
              "apertures[" + aperture.id + "]: not on a shared wall");
}

CoupledPlan MakeCoupledPlan(const SceneSpec& scene,
                            const RenderingProfile& profile,
                            const SourceSpec& source,
                            const ReceiverSpec& receiver) {
  const ApertureSpec* ap = scene.ApertureBetween(source.room, receiver.room);
  if (ap == nullptr) {
    throw Error(ErrorKind::kValidation, "rooms " + source.room + " and " +
                                            receiver.room +
                                            " are not joined by an aperture");
  }
  CoupledPlan plan;
  plan.mode = profile.coupled_mode;
  plan.aperture = *ap;
  plan.occlusion_filter = ap->occlusion;
  plan.path_length_direct =
      ap->direct_path_length.value_or(Distance(source.position, ap->center) +
                                      Distance(ap->center, receiver.position));
  plan.coupling = ap->Area() / SharedWallArea(scene, *ap);
  const RoomSpec& a = scene.Room(ap->connects[0]);
  for (int axis = 0; axis < 3; ++axis) {
    if (OnFace(a, axis, ap->center[axis])) plan.wall_axis = axis;
  }
  return plan;
}

ReflectionTap OccludedDirect(const CoupledPlan& plan, const SourceSpec& source,
                             const ReceiverSpec& receiver,
                             double speed_of_sound) {
  ReflectionTap tap;
  const double r = plan.path_length_direct;
  tap.delay = r / speed_of_sound;
  tap.order = 0;
  tap.doa = Normalized(plan.aperture.center - receiver.position);
  const BandArray g = plan.occlusion_filter.BandGains();
  const double level = DbToAmplitude(source.level_db);
  for (std::size_t b = 0; b < kNumBands; ++b) tap.amplitude[b] = g[b] * level / r;
  return tap;
}

Vec3 ApertureAnchor(const CoupledPlan& plan, const RoomSpec& room,
                    double offset) {
  Vec3 p = plan.aperture.center;
  const int axis = plan.wall_axis;
  const bool at_min = std::abs(p[axis] - room.origin[axis]) < 1e-6;
  p[axis] += at_min ? offset : -offset;
  return p;
}

SourceSpec DoorSource(const CoupledPlan& plan, const RoomSpec& room) {
  SourceSpec s;
  s.id = plan.aperture.id;
  s.room = room.id;
  s.position = ApertureAnchor(plan, room);
  Vec3 normal;
  normal[plan.wall_axis] =
      std::abs(plan.aperture.center[plan.wall_axis] - room.origin[plan.wall_axis]) <
              1e-6
          ? 1.0
          : -1.0;
  s.orientation = normal;
  return s;
}

std::vector<double> DoorSignature(const SceneSpec& scene,
                                  const RenderingProfile& profile,
                                  const SourceSpec& source,
                                  const ReceiverSpec& receiver,
                                  std::size_t num_samples,
                                  const CounterRng& rng) {
  const CoupledPlan plan = MakeCoupledPlan(scene, profile, source, receiver);
  const RoomSpec& src_room = scene.Room(source.room);
  const RoomSpec& rcv_room = scene.Room(receiver.room);
  SpatialIR stage1 = SimulateRoom(
      src_room, source, ApertureAnchor(plan, src_room),
      DoorSource(plan, rcv_room).orientation, PanelsInRoom(scene, src_room),
      profile, scene.sample_rate, scene.speed_of_sound, num_samples, rng);
  std::vector<double> h1 = RenderMono(stage1).channels.front();
  if (num_samples > 0) h1.resize(num_samples, 0.0);
  return h1;
}

SpatialIR TwoStageWithSignature(const SceneSpec& scene,
                                const RenderingProfile& profile,
                                const SourceSpec& source,
                                const ReceiverSpec& receiver,
                                std::span<const double> signature,
                                std::size_t num_samples,
                                const CounterRng& rng) {
  const CoupledPlan plan = MakeCoupledPlan(scene, profile, source, receiver);
  const RoomSpec& rcv_room = scene.Room(receiver.room);
  SpatialIR out = SimulateRoom(
      rcv_room, DoorSource(plan, rcv_room), receiver.position,
      receiver.orientation, PanelsInRoom(scene, rcv_room), profile,
      scene.sample_rate, scene.speed_of_sound, num_samples, rng);
  if (num_samples > 0) out.length = num_samples;
  out.signature.assign(signature.begin(), signature.end());
  return out;
}

SpatialIR CoupleTwoStage(const SceneSpec& scene,
                         const RenderingProfile& profile,
                         const SourceSpec& source,
                         const ReceiverSpec& receiver, const CounterRng& rng,
                         std::size_t num_samples) {
  return TwoStage(scene, profile, source, receiver, rng, num_samples, nullptr);
}

SpatialIR CoupleFull(const SceneSpec& scene, const RenderingProfile& profile,
                     const SourceSpec& source, const ReceiverSpec& receiver,
                     const CounterRng& rng, std::size_t num_samples,
                     std::optional<double> coupling) {
  StageInfo info;
  SpatialIR out =
      TwoStage(scene, profile, source, receiver, rng, num_samples, &info);
  const CoupledPlan plan = MakeCoupledPlan(scene, profile, source, receiver);
  const double k = coupling.value_or(plan.coupling);
  if (k == 0.0 || !info.source_room.fdn || !info.receiver_room.fdn) return out;
  if (!(k > 0.0 && k < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "coupling must lie in [0, 1)");
  }

  const FdnConfig& src = *info.source_room.fdn;
  const FdnConfig& rcv = *info.receiver_room.fdn;
  const std::size_t ns = src.n_lines();
  const std::size_t nr = rcv.n_lines();
  const std::size_t n = ns + nr;
  const double fs = scene.sample_rate;

  // Receiver-room lines come first and keep their delays, so they draw the
  // same prefill noise as the stand-alone receiver-room tail.
  FdnConfig cfg;
  cfg.sample_rate = fs;
  cfg.t60 = rcv.t60;
  cfg.band_level = rcv.band_level;
  cfg.delays = rcv.delays;
  for (std::size_t d : src.delays) {
    while (std::find(cfg.delays.begin(), cfg.delays.end(), d) != cfg.delays.end()) ++d;
    cfg.delays.push_back(d);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const BandArray& t60 = i < nr ? rcv.t60 : src.t60;
    BandArray g;
    for (std::size_t b = 0; b < kNumBands; ++b) {
      g[b] = LineGain(static_cast<double>(cfg.delays[i]), fs, t60[b]);
    }
    cfg.line_gains.push_back(g);
    cfg.line_t60.push_back(t60);
    cfg.prefill_scale.push_back(i < nr ? 1.0 : 0.0);
  }
  // [[c A_r, s A_s], [-s A_r, c A_s]]: a block rotation after the two
  // rooms' own feedback matrices, orthogonal for any s. k is the energy
  // fraction crossing per pass.
  const double s = std::sqrt(k);
  const double c = std::sqrt(1.0 - k);
  cfg.feedback_matrix.assign(n * n, 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nr; ++j) {
      const double a = rcv.feedback_matrix[i * nr + j];
      cfg.feedback_matrix[i * n + j] = c * a;
      cfg.feedback_matrix[(nr + i) * n + j] = -s * a;
    }
  }
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      const double a = src.feedback_matrix[i * ns + j];
      cfg.feedback_matrix[i * n + nr + j] = s * a;
      cfg.feedback_matrix[(nr + i) * n + nr + j] = c * a;
    }
  }
  cfg.output_directions = rcv.output_directions;
  cfg.output_directions.insert(cfg.output_directions.end(),
                               src.output_directions.begin(),
                               src.output_directions.end());
  // Prefilled at the calibrated level of the stand-alone receiver-room
  // tail; energy leaks into the source room and returns later.
  cfg.input_gain = rcv.input_gain * std::sqrt(static_cast<double>(n) / nr);
  cfg.onset = rcv.onset;

  std::vector<TailStream> streams =
      RunFdn(cfg, out.length, rng.Substream(2).Substream(0x21));
  // The stand-alone receiver-room tail occupies the first nr streams; any
  // dual-slope streams follow and are kept.
  for (std::size_t i = 0; i < nr; ++i) out.tail[i] = std::move(streams[i]);
  return out;
}

}  // namespace alodsim
