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


#ifndef ALODSIM_ISM_H_
#define ALODSIM_ISM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "alodsim/common.h"
#include "alodsim/rng.h"
#include "alodsim/scene.h"

namespace alodsim {

struct ImageSource {
  Vec3 position;
  int order = 0;
  // Reflection count per wall, in the -x, +x, -y, +y, -z, +z order.
  std::array<int, kNumWalls> wall_hits{};
  // Signed lattice cell per axis; identifies the image independently of
  // its position (which jitter may change).
  std::array<int, 3> lattice{};
  BandArray band_gain{};
  bool jittered = false;
};

struct DiffuseBurst {
  double duration = 0.0;  // seconds
  std::uint64_t seed = 0;
  BandArray amplitude{};  // per band, scales a unit-energy noise burst
};

struct ReflectionTap {
  double delay = 0.0;     // seconds
  BandArray amplitude{};  // linear, per band
  Vec3 doa;               // world frame, unit, pointing from receiver to image
  int order = 0;
  bool jittered = false;
  std::optional<DiffuseBurst> diffuse_burst;
};

// One diffuse tail channel labelled with its arrival direction.
struct TailStream {
  Vec3 direction;           // world frame, unit
  std::size_t start = 0;    // sample index of samples[0]
  std::vector<double> samples;
  // Whether SpatialIR::signature is applied to this stream.
  bool apply_signature = true;
};

struct SpatialIR {
  double sample_rate = kDefaultSampleRate;
  std::vector<ReflectionTap> taps;  // sorted by delay
  std::vector<TailStream> tail;
  Frame listener = Frame::FromForward({1.0, 0.0, 0.0});
  // Mono FIR convolved with every tap and with flagged tail streams.
  std::vector<double> signature;
  std::size_t length = 0;  // samples, before signature convolution
  double tail_onset = 0.0;  // seconds; zero when there is no tail
};

// All shoebox images with reflection order <= max_order, ordered by order,
// then wall_hits, then lattice cell.
std::vector<ImageSource> EnumerateImages(const RoomSpec& room,
                                         const Vec3& source_pos,
                                         int max_order);

// Number of images of exactly order n in a shoebox.
std::size_t ImageCountOfOrder(int n);

std::vector<ImageSource> ApplyJitter(std::vector<ImageSource> images,
                                     const JitterSettings& jitter,
                                     const CounterRng& rng);

// Delay, 1/r spreading, wall gains and source directivity per image.
std::vector<ReflectionTap> TapsFromImages(std::span<const ImageSource> images,
                                          const Vec3& receiver_pos,
                                          double speed_of_sound,
                                          const SourceSpec& source,
                                          bool air_absorption = false);

// Splits taps of order >= 1 into a specular part and a diffuse burst.
// `scattering` is the diffuse energy fraction per band.
std::vector<ReflectionTap> SmearTaps(std::vector<ReflectionTap> taps,
                                     const BandArray& scattering,
                                     double burst_seconds_per_order,
                                     const CounterRng& rng);

// Unit-energy exponentially decaying noise (-60 dB at the end).
std::vector<double> BurstSignal(const DiffuseBurst& burst, double sample_rate);

// Specular reflection off a finite rectangle, if the reflection point lies
// strictly inside it.
std::optional<ReflectionTap> ReflectFinitePanel(const PanelSpec& panel,
                                                const Vec3& source_pos,
                                                const Vec3& receiver_pos,
                                                double speed_of_sound);

// Early part for one source and receiver inside one room.
SpatialIR RoomEarlySpatialIR(const RoomSpec& room, const SourceSpec& source,
                             const Vec3& receiver_pos,
                             const Vec3& receiver_orientation,
                             std::span<const PanelSpec> panels,
                             const RenderingProfile& profile,
                             double sample_rate, double speed_of_sound,
                             const CounterRng& rng);

// Early part for a scene. Empty ids select the first source / receiver.
SpatialIR EarlySpatialIR(const SceneSpec& scene,
                         const RenderingProfile& profile,
                         std::string_view source_id = {},
                         std::string_view receiver_id = {});

// Panels lying inside `room`.
std::vector<PanelSpec> PanelsInRoom(const SceneSpec& scene,
                                    const RoomSpec& room);

// Delay (s) of the earliest image of order exactly `order`.
double FirstArrivalOfOrder(const RoomSpec& room, const Vec3& source_pos,
                           const Vec3& receiver_pos, int order,
                           double speed_of_sound);

}  // namespace alodsim

#endif  // ALODSIM_ISM_H_
