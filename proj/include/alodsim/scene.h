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


#ifndef ALODSIM_SCENE_H_
#define ALODSIM_SCENE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alodsim/common.h"

namespace alodsim {

// Wall order used everywhere: -x, +x, -y, +y, -z (floor), +z (ceiling).
inline constexpr std::size_t kNumWalls = 6;
using WallBands = std::array<BandArray, kNumWalls>;

struct SecondSlope {
  double t30 = 0.0;               // seconds
  double onset_level_db = -40.0;  // below the normalized EDC start

  friend bool operator==(const SecondSlope&, const SecondSlope&) = default;
};

struct DecayTarget {
  BandArray t30{};  // seconds per octave band
  std::optional<SecondSlope> second_slope;

  static DecayTarget Broadband(double t30_s) {
    return DecayTarget{UniformBands(t30_s), std::nullopt};
  }

  friend bool operator==(const DecayTarget&, const DecayTarget&) = default;
};

struct RoomSpec {
  std::string id;
  Vec3 origin;  // world position of the (min x, min y, min z) corner
  Vec3 dims;    // Lx, Ly, Lz
  WallBands absorption{};
  BandArray scattering{};
  std::optional<double> volume_override;
  std::optional<DecayTarget> decay;

  Vec3 MaxCorner() const { return origin + dims; }
  bool Contains(const Vec3& p, double tolerance = 1e-9) const;

  friend bool operator==(const RoomSpec&, const RoomSpec&) = default;
};

// Stand-in for edge diffraction around an occluder: broadband attenuation and
// a first-order low-pass, evaluated per octave band.
struct OcclusionFilter {
  double attenuation_db = -6.0;
  double lowpass_hz = 2000.0;  // <= 0 or inf disables the low-pass

  BandArray BandGains() const;

  friend bool operator==(const OcclusionFilter&, const OcclusionFilter&) = default;
};

struct ApertureSpec {
  std::string id;
  std::array<std::string, 2> connects;
  Vec3 center;
  double width = 0.0;
  double height = 0.0;
  // Length of the occluded direct route through the aperture. Stored rather
  // than derived from diffraction geometry.
  std::optional<double> direct_path_length;
  OcclusionFilter occlusion;

  double Area() const { return width * height; }

  friend bool operator==(const ApertureSpec&, const ApertureSpec&) = default;
};

struct PanelSpec {
  std::string id;
  std::array<Vec3, 4> corners;  // rectangle, consecutive corners
  BandArray absorption{};

  friend bool operator==(const PanelSpec&, const PanelSpec&) = default;
};

// Source directivity sampled on a regular azimuth/elevation grid in the
// source frame (azimuth clockwise from the source's forward axis).
struct DirectivityGrid {
  std::vector<double> azimuths_deg;    // ascending, within [0, 360)
  std::vector<double> elevations_deg;  // ascending, first -90, last +90
  std::vector<BandArray> gains;        // elevation-major: [el][az]

  BandArray Evaluate(const Direction& d) const;
  // Mean of gain^2 over the sphere per band (solid-angle weighted).
  BandArray MeanSquareGain() const;

  friend bool operator==(const DirectivityGrid&, const DirectivityGrid&) = default;
};

struct SourceSpec {
  std::string id;
  std::string room;
  Vec3 position;
  Vec3 orientation{1.0, 0.0, 0.0};
  std::optional<DirectivityGrid> directivity;
  double level_db = 0.0;

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

enum class ReceiverKind { kBinaural, kOmni, kArray };

struct ReceiverSpec {
  std::string id;
  std::string room;
  Vec3 position;
  Vec3 orientation{1.0, 0.0, 0.0};
  ReceiverKind kind = ReceiverKind::kBinaural;
  std::string reference;  // HRTF directory or layout name/file

  friend bool operator==(const ReceiverSpec&, const ReceiverSpec&) = default;
};

enum class CoupledMode { kFull, kTwoStage, kOff };
enum class OutputMode { kBinaural, kArray, kDiotic, kMono };

struct JitterSettings {
  bool enabled = false;
  double sigma_per_order = 0.1;  // meters per reflection order, per axis

  friend bool operator==(const JitterSettings&, const JitterSettings&) = default;
};

struct SmearingSettings {
  bool enabled = false;
  double burst_ms_per_order = 2.0;
  // Scattered (diffuse) energy fraction per band; the room's scattering
  // coefficients are used when unset.
  std::optional<BandArray> scattering;

  friend bool operator==(const SmearingSettings&, const SmearingSettings&) = default;
};

struct RenderingProfile {
  std::string name = "custom";
  int ism_order = 3;
  JitterSettings jitter;
  SmearingSettings smearing;
  bool fdn_enabled = true;
  CoupledMode coupled_mode = CoupledMode::kFull;
  bool panels_enabled = true;
  bool dual_slope_enabled = true;
  bool anechoic = false;
  OutputMode output_mode = OutputMode::kBinaural;
  bool air_absorption = false;

  friend bool operator==(const RenderingProfile&,
                         const RenderingProfile&) = default;
};

struct SceneSpec {
  std::string name;
  std::vector<RoomSpec> rooms;
  std::vector<ApertureSpec> apertures;
  std::vector<PanelSpec> panels;
  std::vector<SourceSpec> sources;
  std::vector<ReceiverSpec> receivers;
  double sample_rate = kDefaultSampleRate;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::uint64_t rng_seed = 0;
  std::optional<RenderingProfile> profile;

  const RoomSpec& Room(std::string_view id) const;
  const SourceSpec& Source(std::string_view id) const;
  const ReceiverSpec& Receiver(std::string_view id) const;
  // Aperture joining rooms a and b, if any.
  const ApertureSpec* ApertureBetween(std::string_view a,
                                      std::string_view b) const;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

// Throws Error(kValidation) naming the offending field.
void ValidateRoom(const RoomSpec& room);
void ValidateProfile(const RenderingProfile& profile);
void ValidateScene(const SceneSpec& scene);

double SurfaceArea(const RoomSpec& room);
// volume_override when present, else the box volume.
double Volume(const RoomSpec& room);
double BoxVolume(const RoomSpec& room);

// Surface-weighted mean absorption per band.
BandArray MeanAbsorption(const RoomSpec& room);

// Uniform absorption reaching the target decay per band (Eyring):
// alpha = 1 - exp(-0.161 V / (S T60)). Throws kInfeasible if alpha >= 1.
BandArray FitAbsorption(const RoomSpec& room, const DecayTarget& target);

// Sabine counterpart, alpha = 0.161 V / (S T60). Used as a cross-check.
BandArray SabineAbsorption(const RoomSpec& room, const DecayTarget& target);

// Predicted T60 per band from the room's absorption (Eyring).
BandArray EyringT60(const RoomSpec& room);

// Decay target of the room: explicit target, else Eyring prediction.
DecayTarget EffectiveDecay(const RoomSpec& room);

// Shipped scenes: "living-room", "pub", "underground".
SceneSpec Preset(std::string_view name);
std::vector<std::string> PresetNames();

// Rendering conditions: "razr-full", "razr-1st", "razr-simple", "ism-15",
// "anechoic", "diotic".
RenderingProfile ProfilePreset(std::string_view name);
std::vector<std::string> ProfileNames();

std::string_view CoupledModeName(CoupledMode mode);
std::string_view OutputModeName(OutputMode mode);
CoupledMode ParseCoupledMode(std::string_view name);
OutputMode ParseOutputMode(std::string_view name);

// Energy attenuation coefficient of air (1/m) per band, 20 C / 50 % RH.
const BandArray& AirAttenuation();

}  // namespace alodsim

#endif  // ALODSIM_SCENE_H_
