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


#ifndef ALODSIM_SPATIALIZER_H_
#define ALODSIM_SPATIALIZER_H_

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "alodsim/common.h"
#include "alodsim/ism.h"

namespace alodsim {

enum class ChannelSemantics { kBinauralLR, kArrayIndexed, kMono };

struct ImpulseResponse {
  std::vector<std::vector<double>> channels;
  double sample_rate = kDefaultSampleRate;
  ChannelSemantics semantics = ChannelSemantics::kMono;

  std::size_t length() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  std::size_t num_channels() const { return channels.size(); }
};

// Throws kValidation when channel lengths differ or samples are non-finite.
void ValidateImpulseResponse(const ImpulseResponse& ir);

struct HrtfSet {
  std::vector<Vec3> directions;  // unit, listener frame (front, left, up)
  std::vector<std::array<std::vector<double>, 2>> filters;  // left, right
  double sample_rate = kDefaultSampleRate;

  // Angular nearest neighbour; ties resolve to the lowest index.
  std::size_t Nearest(const Vec3& local_direction) const;
  std::size_t filter_length() const {
    return filters.empty() ? 0 : filters.front()[0].size();
  }
};

void ValidateHrtfSet(const HrtfSet& set);

// Rigid spherical head: first-order head-shadow filter per ear and a
// Woodworth interaural delay, on a 5 deg azimuth / 10 deg elevation grid.
HrtfSet SphericalHeadHrtf(double sample_rate = kDefaultSampleRate,
                          double head_radius = 0.0875,
                          std::size_t length = 256);

// Directory with `index.txt` ("azimuth elevation filename" per row) and one
// stereo WAV per direction.
HrtfSet LoadHrtfDirectory(const std::string& directory,
                          double expected_sample_rate);

struct LoudspeakerLayout {
  std::string name;
  std::vector<Vec3> positions;   // meters
  Vec3 center;                   // listening position
  std::vector<std::array<std::size_t, 3>> triangles;
  // Row-major inverse of each triangle's direction basis.
  std::vector<std::array<double, 9>> inverse_bases;
  // Optional per-channel calibration applied at render time.
  std::vector<double> channel_gain;
  std::vector<std::size_t> channel_delay;  // samples

  Vec3 Direction(std::size_t i) const { return Normalized(positions[i] - center); }
  // Speaker closest to straight ahead (azimuth 0, elevation 0).
  std::size_t FrontalIndex() const;
};

// Triangulates the convex hull of the speaker directions. Coplanar hull
// facets are split into a fan.
std::vector<std::array<std::size_t, 3>> TriangulateLayout(
    const std::vector<Vec3>& directions);

LoudspeakerLayout MakeLayout(std::string name, std::vector<Vec3> positions,
                             const Vec3& center);

// 48 + 2 x 12 + 2 x 6 + 2 speakers on a 2.4 m sphere centred 1.8 m high.
LoudspeakerLayout ArrayPreset86();

// Text layout: "azimuth elevation [radius]" per row, '#' comments.
// "86-preset" selects ArrayPreset86().
LoudspeakerLayout LoadLayout(const std::string& path_or_name);

struct VbapResult {
  std::vector<std::pair<std::size_t, double>> gains;  // channel, gain
  bool fallback = false;  // no enclosing triangle was found
};

VbapResult VbapGains(const Vec3& direction, const LoudspeakerLayout& layout);

ImpulseResponse Binauralize(const SpatialIR& ir, const HrtfSet& hrtf);
ImpulseResponse RenderArray(const SpatialIR& ir, const LoudspeakerLayout& layout);
ImpulseResponse RenderMono(const SpatialIR& ir);

// Both channels become the left input channel.
ImpulseResponse Diotic(const ImpulseResponse& ir);
// Mono collapse (left channel of binaural input, channel sum otherwise) on
// the frontal speaker only.
ImpulseResponse DioticArray(const ImpulseResponse& ir,
                            const LoudspeakerLayout& layout);

// Default HRTF: ALODSIM_HRTF_DIR if set, else the spherical-head model.
std::shared_ptr<const HrtfSet> DefaultHrtf(double sample_rate);

}  // namespace alodsim

#endif  // ALODSIM_SPATIALIZER_H_
