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


#include "alodsim/pipeline.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "alodsim/coupled.h"

namespace alodsim {
namespace {

double TapEnergyMean(const ReflectionTap& tap) {
  double e = 0.0;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    e += tap.amplitude[b] * tap.amplitude[b];
    if (tap.diffuse_burst) {
      e += tap.diffuse_burst->amplitude[b] * tap.diffuse_burst->amplitude[b];
    }
  }
  return e / kNumBands;
}

double LongestDecay(const RoomSpec& room) {
  const DecayTarget d = EffectiveDecay(room);
  double t = *std::max_element(d.t30.begin(), d.t30.end());
  if (d.second_slope) t = std::max(t, d.second_slope->t30);
  return t;
}

}  // namespace

double DefaultDuration(const SceneSpec& scene) {
  double t = 0.0;
  for (const RoomSpec& room : scene.rooms) t = std::max(t, LongestDecay(room));
  return std::max(0.5, 1.5 * t);
}

SpatialIR SimulateRoom(const RoomSpec& room, const SourceSpec& source,
                       const Vec3& receiver_pos,
                       const Vec3& receiver_orientation,
                       std::span<const PanelSpec> panels,
                       const RenderingProfile& profile, double sample_rate,
                       double speed_of_sound, std::size_t num_samples,
                       const CounterRng& rng, RoomRunInfo* info) {
  SpatialIR ir = RoomEarlySpatialIR(room, source, receiver_pos,
                                    receiver_orientation, panels, profile,
                                    sample_rate, speed_of_sound,
                                    rng.Substream(0x10));
  ir.length = num_samples;
  if (!profile.fdn_enabled || profile.anechoic) return ir;

  if (num_samples == 0) {
    num_samples = static_cast<std::size_t>(
        std::lround(std::max(0.5, 1.5 * LongestDecay(room)) * sample_rate));
  }
  const DecayTarget decay = EffectiveDecay(room);
  FdnConfig cfg = DesignFdn(room, decay, sample_rate, speed_of_sound,
                            rng.Substream(0x20).NextU64());
  const double onset =
      ir.taps.empty()
          ? Distance(source.position, receiver_pos) / speed_of_sound
          : TailOnset(room, source.position, receiver_pos, profile, speed_of_sound);
  const SpliceReport report = CalibrateSplice(ir, onset, room, speed_of_sound, cfg);
  std::vector<TailStream> tail = RunFdn(cfg, num_samples, rng.Substream(0x21));

  std::optional<DualSlopeConfig> dual;
  if (profile.dual_slope_enabled && decay.second_slope) {
    double early = 0.0;
    for (const ReflectionTap& tap : ir.taps) early += TapEnergyMean(tap);
    const double a1 = 13.815510557964274 / BandMean(cfg.t60);
    double level2 = 0.0;
    for (double l : cfg.band_level) level2 += l * l;
    const double tail_energy = cfg.input_gain * cfg.input_gain * sample_rate *
                        (level2 / kNumBands) / a1;
    const double share_db = 10.0 * std::log10(tail_energy / (tail_energy + early));
    dual = DesignDualSlope(room, decay, sample_rate, speed_of_sound, cfg,
                           share_db, rng.Substream(0x22).NextU64());
    std::vector<TailStream> second =
        RunFdn(dual->secondary, num_samples, rng.Substream(0x23));
    for (TailStream& s : second) tail.push_back(std::move(s));
  }
  ir = Splice(std::move(ir), std::move(tail), onset);
  ir.length = num_samples;
  if (info) {
    info->fdn = cfg;
    info->dual = dual;
    info->splice = report;
  }
  return ir;
}

SpatialIR SimulateSpatial(const SceneSpec& scene,
                          const RenderingProfile& profile, std::uint64_t seed,
                          const SimulationOptions& options) {
  ValidateProfile(profile);
  const SourceSpec& source = options.source_id.empty()
                                 ? scene.sources.at(0)
                                 : scene.Source(options.source_id);
  const ReceiverSpec& receiver = options.receiver_id.empty()
                                     ? scene.receivers.at(0)
                                     : scene.Receiver(options.receiver_id);
  const double fs = scene.sample_rate;
  const double c = scene.speed_of_sound;
  const double duration =
      options.duration > 0.0 ? options.duration : DefaultDuration(scene);
  const auto n = static_cast<std::size_t>(std::lround(duration * fs));
  const CounterRng rng(seed);

  if (source.room == receiver.room) {
    const RoomSpec& room = scene.Room(source.room);
    return SimulateRoom(room, source, receiver.position, receiver.orientation,
                        PanelsInRoom(scene, room), profile, fs, c, n, rng);
  }
  if (profile.anechoic || profile.coupled_mode == CoupledMode::kOff) {
    SpatialIR ir;
    ir.sample_rate = fs;
    ir.listener = Frame::FromForward(receiver.orientation);
    ir.taps.push_back(OccludedDirect(
        MakeCoupledPlan(scene, profile, source, receiver), source, receiver, c));
    ir.length = n;
    return ir;
  }
  if (profile.coupled_mode == CoupledMode::kTwoStage) {
    return CoupleTwoStage(scene, profile, source, receiver, rng, n);
  }
  return CoupleFull(scene, profile, source, receiver, rng, n);
}

ImpulseResponse Simulate(const SceneSpec& scene, const RenderingProfile& profile,
                         std::uint64_t seed, const SimulationOptions& options) {
  const SpatialIR spatial = SimulateSpatial(scene, profile, seed, options);
  const ReceiverSpec& receiver = options.receiver_id.empty()
                                     ? scene.receivers.at(0)
                                     : scene.Receiver(options.receiver_id);
  const OutputMode mode = options.output_mode.value_or(profile.output_mode);

  auto hrtf = [&]() -> std::shared_ptr<const HrtfSet> {
    if (options.hrtf) return options.hrtf;
    if (receiver.kind == ReceiverKind::kBinaural && !receiver.reference.empty()) {
      return std::make_shared<const HrtfSet>(
          LoadHrtfDirectory(receiver.reference, scene.sample_rate));
    }
    return DefaultHrtf(scene.sample_rate);
  };
  auto layout = [&]() -> std::shared_ptr<const LoudspeakerLayout> {
    if (options.layout) return options.layout;
    if (receiver.kind == ReceiverKind::kArray && !receiver.reference.empty()) {
      return std::make_shared<const LoudspeakerLayout>(LoadLayout(receiver.reference));
    }
    return std::make_shared<const LoudspeakerLayout>(ArrayPreset86());
  };

  switch (mode) {
    case OutputMode::kBinaural:
      return Binauralize(spatial, *hrtf());
    case OutputMode::kArray:
      return RenderArray(spatial, *layout());
    case OutputMode::kDiotic: {
      const ImpulseResponse bin = Binauralize(spatial, *hrtf());
      if (receiver.kind == ReceiverKind::kArray || options.layout) {
        return DioticArray(bin, *layout());
      }
      return Diotic(bin);
    }
    case OutputMode::kMono:
      return RenderMono(spatial);
  }
  return RenderMono(spatial);
}

}  // namespace alodsim
