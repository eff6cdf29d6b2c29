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


#include "alodsim/scene.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <limits>
#include <sstream>

namespace alodsim {
namespace {

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::kValidation, field + ": " + what);
}

void CheckFinite(const std::string& field, const Vec3& v) {
  if (!IsFinite(v)) Invalid(field, "non-finite coordinate");
}

void CheckUnit(const std::string& field, const Vec3& v) {
  CheckFinite(field, v);
  if (std::abs(Norm(v) - 1.0) > 1e-9) Invalid(field, "not unit-norm");
}

// Axis along which two boxes share a face, and the plane coordinate.
std::optional<std::pair<int, double>> SharedWall(const RoomSpec& a,
                                                 const RoomSpec& b) {
  constexpr double kTol = 1e-6;
  for (int axis = 0; axis < 3; ++axis) {
    double plane = 0.0;
    if (std::abs(a.MaxCorner()[axis] - b.origin[axis]) < kTol) {
      plane = a.MaxCorner()[axis];
    } else if (std::abs(b.MaxCorner()[axis] - a.origin[axis]) < kTol) {
      plane = a.origin[axis];
    } else {
      continue;
    }
    // The faces must overlap on the other two axes.
    bool overlap = true;
    for (int other = 0; other < 3; ++other) {
      if (other == axis) continue;
      const double lo = std::max(a.origin[other], b.origin[other]);
      const double hi = std::min(a.MaxCorner()[other], b.MaxCorner()[other]);
      if (hi <= lo) overlap = false;
    }
    if (overlap) return std::make_pair(axis, plane);
  }
  return std::nullopt;
}

void ValidateAperture(const SceneSpec& scene, const ApertureSpec& ap) {
  const std::string field = "apertures[" + ap.id + "]";
  if (!(ap.width > 0.0) || !(ap.height > 0.0)) {
    Invalid(field, "width and height must be positive");
  }
  CheckFinite(field + ".center", ap.center);
  if (ap.direct_path_length && !(*ap.direct_path_length > 0.0)) {
    Invalid(field + ".direct_path_length", "must be positive");
  }
  const RoomSpec& a = scene.Room(ap.connects[0]);
  const RoomSpec& b = scene.Room(ap.connects[1]);
  const auto wall = SharedWall(a, b);
  if (!wall) Invalid(field, "rooms do not share a wall");
  const auto [axis, plane] = *wall;
  if (std::abs(ap.center[axis] - plane) > 1e-6) {
    Invalid(field + ".center", "not on the shared wall plane");
  }
  // Width runs along the first in-plane axis, height along the second.
  const int u = axis == 0 ? 1 : 0;
  const int v = axis == 2 ? 1 : 2;
  const double half[2] = {ap.width / 2.0, ap.height / 2.0};
  const int in_plane[2] = {u, v};
  for (int i = 0; i < 2; ++i) {
    const int ax = in_plane[i];
    const double lo = std::max(a.origin[ax], b.origin[ax]);
    const double hi = std::min(a.MaxCorner()[ax], b.MaxCorner()[ax]);
    if (ap.center[ax] - half[i] < lo - 1e-9 ||
        ap.center[ax] + half[i] > hi + 1e-9) {
      Invalid(field, "rectangle extends beyond the shared wall");
    }
  }
}

void ValidatePanel(const PanelSpec& panel) {
  const std::string field = "panels[" + panel.id + "]";
  for (const Vec3& c : panel.corners) CheckFinite(field + ".corners", c);
  const Vec3 e1 = panel.corners[1] - panel.corners[0];
  const Vec3 e2 = panel.corners[3] - panel.corners[0];
  const Vec3 n = Cross(e1, e2);
  if (Norm(n) < 1e-9) Invalid(field, "degenerate rectangle");
  const Vec3 unit_n = Normalized(n);
  for (const Vec3& c : panel.corners) {
    if (std::abs(Dot(c - panel.corners[0], unit_n)) > 1e-3) {
      Invalid(field, "corners not coplanar within 1 mm");
    }
  }
  // Rectangle: opposite corner consistent and edges perpendicular.
  const Vec3 c2 = panel.corners[0] + e1 + e2;
  if (Distance(c2, panel.corners[2]) > 1e-3 ||
      std::abs(Dot(e1, e2)) > 1e-3 * Norm(e1) * Norm(e2)) {
    Invalid(field, "corners do not form a rectangle");
  }
  for (double a : panel.absorption) {
    if (!(a >= 0.0 && a < 1.0)) Invalid(field + ".absorption", "outside [0,1)");
  }
}

void ValidateDirectivity(const std::string& field, const DirectivityGrid& g) {
  if (g.azimuths_deg.empty() || g.elevations_deg.size() < 2) {
    Invalid(field, "grid needs azimuths and at least two elevations");
  }
  if (std::abs(g.elevations_deg.front() + 90.0) > 1e-9 ||
      std::abs(g.elevations_deg.back() - 90.0) > 1e-9) {
    Invalid(field, "elevations must span -90..90 to cover the sphere");
  }
  if (!std::is_sorted(g.azimuths_deg.begin(), g.azimuths_deg.end()) ||
      !std::is_sorted(g.elevations_deg.begin(), g.elevations_deg.end())) {
    Invalid(field, "grid axes must be ascending");
  }
  if (g.azimuths_deg.front() < 0.0 || g.azimuths_deg.back() >= 360.0) {
    Invalid(field, "azimuths must lie in [0, 360)");
  }
  if (g.gains.size() != g.azimuths_deg.size() * g.elevations_deg.size()) {
    Invalid(field, "gain count does not match grid");
  }
  for (const BandArray& b : g.gains) {
    for (double v : b) {
      if (!std::isfinite(v) || v < 0.0) Invalid(field, "gain negative or non-finite");
    }
  }
}

SourceSpec MakeSource(std::string id, std::string room, Vec3 pos,
                      Vec3 facing_point) {
  SourceSpec s;
  s.id = std::move(id);
  s.room = std::move(room);
  s.position = pos;
  s.orientation = Normalized(facing_point - pos);
  return s;
}

RoomSpec MakeRoom(std::string id, Vec3 origin, Vec3 dims, DecayTarget decay,
                  std::optional<double> volume_override = std::nullopt) {
  RoomSpec room;
  room.id = std::move(id);
  room.origin = origin;
  room.dims = dims;
  room.volume_override = volume_override;
  room.scattering = UniformBands(0.4);
  room.decay = decay;
  const BandArray alpha = FitAbsorption(room, decay);
  room.absorption.fill(alpha);
  return room;
}

SceneSpec LivingRoom() {
  SceneSpec scene;
  scene.name = "living-room";
  scene.rooms.push_back(MakeRoom("living", {0.0, 0.0, 0.0},
                                 {4.97, 3.78, 2.71},
                                 DecayTarget::Broadband(0.54)));
  scene.rooms.push_back(MakeRoom("kitchen", {0.0, 3.78, 0.0},
                                 {4.97, 2.00, 2.71},
                                 DecayTarget::Broadband(0.66)));
  ApertureSpec door;
  door.id = "door";
  door.connects = {"kitchen", "living"};
  door.center = {4.0, 3.78, 1.0};
  door.width = 0.8;  // not given in the source data; assumed
  door.height = 2.0;
  door.direct_path_length = 5.7;
  scene.apertures.push_back(door);

  ReceiverSpec listener;
  listener.id = "listener";
  listener.room = "living";
  listener.position = {1.0, 1.2, 1.2};
  listener.orientation = {0.0, 1.0, 0.0};
  scene.receivers.push_back(listener);
  // Source x chosen so that source -> door centre -> listener is 5.7 m and
  // the straight line hits the wall outside the door.
  scene.sources.push_back(
      MakeSource("target", "kitchen", {2.868, 5.0, 1.5}, door.center));
  // Masker 1 m to the listener's right (azimuth +90 deg).
  scene.sources.push_back(
      MakeSource("masker", "living", {2.0, 1.2, 1.2}, listener.position));
  return scene;
}

SceneSpec Pub() {
  SceneSpec scene;
  scene.name = "pub";
  scene.rooms.push_back(MakeRoom("pub", {0.0, 0.0, 0.0}, {17.76, 10.2, 2.9},
                                 DecayTarget::Broadband(0.7), 442.0));
  ReceiverSpec listener;
  listener.id = "listener";
  listener.room = "pub";
  listener.position = {8.0, 5.0, 1.2};
  listener.orientation = {1.0, 0.0, 0.0};
  scene.receivers.push_back(listener);
  scene.sources.push_back(
      MakeSource("target", "pub", {8.97, 5.0, 1.2}, listener.position));
  scene.sources.push_back(
      MakeSource("masker", "pub", {8.0, 4.0, 1.2}, listener.position));

  PanelSpec table;
  table.id = "table";
  table.corners = {Vec3{7.7, 4.6, 0.75}, Vec3{9.27, 4.6, 0.75},
                   Vec3{9.27, 5.4, 0.75}, Vec3{7.7, 5.4, 0.75}};
  table.absorption = UniformBands(0.1);
  scene.panels.push_back(table);

  PanelSpec board;
  board.id = "chalkboard";
  board.corners = {Vec3{7.8, 6.0, 0.9}, Vec3{9.2, 6.0, 0.9},
                   Vec3{9.2, 6.0, 2.1}, Vec3{7.8, 6.0, 2.1}};
  board.absorption = UniformBands(0.05);
  scene.panels.push_back(board);
  return scene;
}

SceneSpec Underground() {
  SceneSpec scene;
  scene.name = "underground";
  DecayTarget decay = DecayTarget::Broadband(1.6);
  decay.second_slope = SecondSlope{3.2, -40.0};
  scene.rooms.push_back(MakeRoom("station", {0.0, 0.0, 0.0},
                                 {120.0, 15.7, 4.16}, decay, 11000.0));
  ReceiverSpec listener;
  listener.id = "listener";
  listener.room = "station";
  listener.position = {60.0, 7.85, 1.7};
  listener.orientation = {1.0, 0.0, 0.0};
  scene.receivers.push_back(listener);
  scene.sources.push_back(
      MakeSource("target", "station", {66.37, 7.85, 1.7}, listener.position));
  scene.sources.push_back(
      MakeSource("masker", "station", {60.0, 6.85, 1.7}, listener.position));
  return scene;
}

}  // namespace

bool RoomSpec::Contains(const Vec3& p, double tolerance) const {
  for (int a = 0; a < 3; ++a) {
    if (p[a] < origin[a] - tolerance || p[a] > origin[a] + dims[a] + tolerance) {
      return false;
    }
  }
  return true;
}

BandArray OcclusionFilter::BandGains() const {
  BandArray g;
  const double broadband = DbToAmplitude(attenuation_db);
  for (std::size_t b = 0; b < kNumBands; ++b) {
    double lp = 1.0;
    if (lowpass_hz > 0.0 && std::isfinite(lowpass_hz)) {
      const double r = kBandCenters[b] / lowpass_hz;
      lp = 1.0 / std::sqrt(1.0 + r * r);
    }
    g[b] = broadband * lp;
  }
  return g;
}

BandArray DirectivityGrid::Evaluate(const Direction& d) const {
  const std::size_t naz = azimuths_deg.size();
  double az = std::fmod(d.azimuth_deg, 360.0);
  if (az < 0.0) az += 360.0;
  const double el = std::clamp(d.elevation_deg, -90.0, 90.0);

  // Elevation bracket.
  std::size_t e1 = static_cast<std::size_t>(
      std::upper_bound(elevations_deg.begin(), elevations_deg.end(), el) -
      elevations_deg.begin());
  e1 = std::clamp<std::size_t>(e1, 1, elevations_deg.size() - 1);
  const std::size_t e0 = e1 - 1;
  const double te = (el - elevations_deg[e0]) /
                    (elevations_deg[e1] - elevations_deg[e0]);

  // Azimuth bracket with wrap-around.
  std::size_t a1 = static_cast<std::size_t>(
      std::upper_bound(azimuths_deg.begin(), azimuths_deg.end(), az) -
      azimuths_deg.begin());
  std::size_t a0;
  double span;
  double offset;
  if (a1 == 0 || a1 == naz) {
    a0 = naz - 1;
    a1 = 0;
    span = azimuths_deg[0] + 360.0 - azimuths_deg[a0];
    offset = az >= azimuths_deg[a0] ? az - azimuths_deg[a0]
                                     : az + 360.0 - azimuths_deg[a0];
  } else {
    a0 = a1 - 1;
    span = azimuths_deg[a1] - azimuths_deg[a0];
    offset = az - azimuths_deg[a0];
  }
  const double ta = span > 0.0 ? offset / span : 0.0;

  auto at = [&](std::size_t e, std::size_t a) -> const BandArray& {
    return gains[e * naz + a];
  };
  BandArray out;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    const double lo = (1.0 - ta) * at(e0, a0)[b] + ta * at(e0, a1)[b];
    const double hi = (1.0 - ta) * at(e1, a0)[b] + ta * at(e1, a1)[b];
    out[b] = (1.0 - te) * lo + te * hi;
  }
  return out;
}

BandArray DirectivityGrid::MeanSquareGain() const {
  BandArray sum{};
  double weight_sum = 0.0;
  const std::size_t naz = azimuths_deg.size();
  for (std::size_t e = 0; e < elevations_deg.size(); ++e) {
    const double w = std::cos(elevations_deg[e] * kPi / 180.0);
    for (std::size_t a = 0; a < naz; ++a) {
      for (std::size_t b = 0; b < kNumBands; ++b) {
        sum[b] += w * gains[e * naz + a][b] * gains[e * naz + a][b];
      }
      weight_sum += w;
    }
  }
  for (double& v : sum) v = weight_sum > 0.0 ? v / weight_sum : 1.0;
  return sum;
}

const RoomSpec& SceneSpec::Room(std::string_view id) const {
  for (const RoomSpec& r : rooms) {
    if (r.id == id) return r;
  }
  throw Error(ErrorKind::kValidation,
              "rooms: unknown room id '" + std::string(id) + "'");
}

const SourceSpec& SceneSpec::Source(std::string_view id) const {
  for (const SourceSpec& s : sources) {
    if (s.id == id) return s;
  }
  throw Error(ErrorKind::kValidation,
              "sources: unknown source id '" + std::string(id) + "'");
}

const ReceiverSpec& SceneSpec::Receiver(std::string_view id) const {
  for (const ReceiverSpec& r : receivers) {
    if (r.id == id) return r;
  }
  throw Error(ErrorKind::kValidation,
              "receivers: unknown receiver id '" + std::string(id) + "'");
}

const ApertureSpec* SceneSpec::ApertureBetween(std::string_view a,
                                               std::string_view b) const {
  for (const ApertureSpec& ap : apertures) {
    if ((ap.connects[0] == a && ap.connects[1] == b) ||
        (ap.connects[0] == b && ap.connects[1] == a)) {
      return &ap;
    }
  }
  return nullptr;
}

void ValidateRoom(const RoomSpec& room) {
  const std::string field = "rooms[" + room.id + "]";
  CheckFinite(field + ".origin", room.origin);
  CheckFinite(field + ".dims", room.dims);
  if (!(room.dims.x > 0.0 && room.dims.y > 0.0 && room.dims.z > 0.0)) {
    Invalid(field + ".dims", "must be strictly positive");
  }
  for (std::size_t w = 0; w < kNumWalls; ++w) {
    for (double a : room.absorption[w]) {
      if (!(a >= 0.0 && a < 1.0)) {
        Invalid(field + ".absorption", "coefficient outside [0,1)");
      }
    }
  }
  for (double s : room.scattering) {
    if (!(s >= 0.0 && s <= 1.0)) Invalid(field + ".scattering", "outside [0,1]");
  }
  if (room.volume_override && !(*room.volume_override > 0.0)) {
    Invalid(field + ".volume_override", "must be positive");
  }
  if (room.decay) {
    for (double t : room.decay->t30) {
      if (!(t > 0.0)) Invalid(field + ".decay.t30", "must be positive");
    }
    if (room.decay->second_slope) {
      if (!(room.decay->second_slope->t30 > 0.0)) {
        Invalid(field + ".decay.second_slope.t30", "must be positive");
      }
      if (!(room.decay->second_slope->onset_level_db < 0.0)) {
        Invalid(field + ".decay.second_slope.onset_level_db", "must be negative");
      }
    }
  }
}

void ValidateProfile(const RenderingProfile& p) {
  if (p.ism_order < 0) Invalid("profile.ism_order", "must be >= 0");
  if (p.ism_order > 60) Invalid("profile.ism_order", "must be <= 60");
  if (!(p.jitter.sigma_per_order >= 0.0)) {
    Invalid("profile.jitter.sigma_per_order", "must be >= 0");
  }
  if (!(p.smearing.burst_ms_per_order > 0.0)) {
    Invalid("profile.smearing.burst_ms_per_order", "must be positive");
  }
  if (p.smearing.scattering) {
    for (double s : *p.smearing.scattering) {
      if (!(s >= 0.0 && s <= 1.0)) {
        Invalid("profile.smearing.scattering", "outside [0,1]");
      }
    }
  }
  if (p.anechoic && (p.fdn_enabled || p.ism_order != 0)) {
    Invalid("profile.anechoic", "requires fdn_enabled=false and ism_order=0");
  }
}

void ValidateScene(const SceneSpec& scene) {
  if (scene.rooms.empty()) Invalid("rooms", "at least one room required");
  if (scene.sources.empty()) Invalid("sources", "at least one source required");
  if (scene.receivers.empty()) {
    Invalid("receivers", "at least one receiver required");
  }
  if (!(scene.sample_rate > 0.0)) Invalid("sample_rate", "must be positive");
  if (!(scene.speed_of_sound > 0.0)) {
    Invalid("speed_of_sound", "must be positive");
  }
  std::set<std::string> ids;
  for (const RoomSpec& r : scene.rooms) {
    if (!ids.insert(r.id).second) Invalid("rooms", "duplicate id " + r.id);
    ValidateRoom(r);
  }
  for (const ApertureSpec& ap : scene.apertures) ValidateAperture(scene, ap);
  for (const PanelSpec& p : scene.panels) ValidatePanel(p);
  for (const SourceSpec& s : scene.sources) {
    const std::string field = "sources[" + s.id + "]";
    CheckFinite(field + ".position", s.position);
    CheckUnit(field + ".orientation", s.orientation);
    if (!scene.Room(s.room).Contains(s.position)) {
      Invalid(field + ".position", "outside room " + s.room);
    }
    if (s.directivity) ValidateDirectivity(field + ".directivity", *s.directivity);
  }
  for (const ReceiverSpec& r : scene.receivers) {
    const std::string field = "receivers[" + r.id + "]";
    CheckFinite(field + ".position", r.position);
    CheckUnit(field + ".orientation", r.orientation);
    if (!scene.Room(r.room).Contains(r.position)) {
      Invalid(field + ".position", "outside room " + r.room);
    }
  }
  if (scene.profile) ValidateProfile(*scene.profile);
}

double SurfaceArea(const RoomSpec& room) {
  const Vec3& d = room.dims;
  return 2.0 * (d.x * d.y + d.x * d.z + d.y * d.z);
}

double BoxVolume(const RoomSpec& room) {
  return room.dims.x * room.dims.y * room.dims.z;
}

double Volume(const RoomSpec& room) {
  return room.volume_override.value_or(BoxVolume(room));
}

BandArray MeanAbsorption(const RoomSpec& room) {
  const Vec3& d = room.dims;
  const double areas[kNumWalls] = {d.y * d.z, d.y * d.z, d.x * d.z,
                                   d.x * d.z, d.x * d.y, d.x * d.y};
  BandArray mean{};
  for (std::size_t w = 0; w < kNumWalls; ++w) {
    for (std::size_t b = 0; b < kNumBands; ++b) {
      mean[b] += areas[w] * room.absorption[w][b];
    }
  }
  const double s = SurfaceArea(room);
  for (double& v : mean) v /= s;
  return mean;
}

BandArray FitAbsorption(const RoomSpec& room, const DecayTarget& target) {
  const double v = Volume(room);
  const double s = SurfaceArea(room);
  BandArray alpha;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    if (!(target.t30[b] > 0.0)) {
      throw Error(ErrorKind::kInfeasible, "decay target must be positive");
    }
    alpha[b] = 1.0 - std::exp(-0.161 * v / (s * target.t30[b]));
    if (!(alpha[b] < 1.0)) {
      std::ostringstream msg;
      msg << "T60 target " << target.t30[b] << " s unreachable for room "
          << room.id;
      throw Error(ErrorKind::kInfeasible, msg.str());
    }
  }
  return alpha;
}

BandArray SabineAbsorption(const RoomSpec& room, const DecayTarget& target) {
  const double v = Volume(room);
  const double s = SurfaceArea(room);
  BandArray alpha;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    alpha[b] = 0.161 * v / (s * target.t30[b]);
  }
  return alpha;
}

BandArray EyringT60(const RoomSpec& room) {
  const BandArray mean = MeanAbsorption(room);
  const double v = Volume(room);
  const double s = SurfaceArea(room);
  BandArray t60;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    const double a = -std::log1p(-mean[b]);
    t60[b] = a > 0.0 ? 0.161 * v / (s * a)
                     : std::numeric_limits<double>::infinity();
  }
  return t60;
}

DecayTarget EffectiveDecay(const RoomSpec& room) {
  if (room.decay) return *room.decay;
  return DecayTarget{EyringT60(room), std::nullopt};
}

SceneSpec Preset(std::string_view name) {
  if (name == "living-room") return LivingRoom();
  if (name == "pub") return Pub();
  if (name == "underground") return Underground();
  throw Error(ErrorKind::kUnknownName,
              "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> PresetNames() {
  return {"living-room", "pub", "underground"};
}

RenderingProfile ProfilePreset(std::string_view name) {
  RenderingProfile full;
  full.name = "razr-full";
  full.ism_order = 3;
  full.jitter = {true, 0.1};
  full.smearing.enabled = true;
  full.fdn_enabled = true;
  full.coupled_mode = CoupledMode::kFull;
  full.panels_enabled = true;
  full.dual_slope_enabled = true;
  full.output_mode = OutputMode::kBinaural;
  if (name == "razr-full") return full;
  if (name == "razr-1st") {
    RenderingProfile p = full;
    p.name = "razr-1st";
    p.ism_order = 1;
    return p;
  }
  if (name == "razr-simple") {
    // Each scene has exactly one of these features, so removing all three
    // is the per-scene simplification.
    RenderingProfile p = full;
    p.name = "razr-simple";
    p.coupled_mode = CoupledMode::kTwoStage;
    p.panels_enabled = false;
    p.dual_slope_enabled = false;
    return p;
  }
  if (name == "ism-15") {
    RenderingProfile p;
    p.name = "ism-15";
    p.ism_order = 15;
    p.jitter.enabled = false;
    p.smearing.enabled = false;
    p.fdn_enabled = false;
    p.coupled_mode = CoupledMode::kTwoStage;
    p.panels_enabled = false;
    p.dual_slope_enabled = false;
    return p;
  }
  if (name == "anechoic") {
    RenderingProfile p;
    p.name = "anechoic";
    p.ism_order = 0;
    p.jitter.enabled = false;
    p.smearing.enabled = false;
    p.fdn_enabled = false;
    p.coupled_mode = CoupledMode::kOff;
    p.panels_enabled = false;
    p.dual_slope_enabled = false;
    p.anechoic = true;
    return p;
  }
  if (name == "diotic") {
    RenderingProfile p = full;
    p.name = "diotic";
    p.output_mode = OutputMode::kDiotic;
    return p;
  }
  throw Error(ErrorKind::kUnknownName,
              "unknown profile '" + std::string(name) + "'");
}

std::vector<std::string> ProfileNames() {
  return {"razr-full", "razr-1st", "razr-simple", "ism-15", "anechoic",
          "diotic"};
}

std::string_view CoupledModeName(CoupledMode mode) {
  switch (mode) {
    case CoupledMode::kFull:
      return "full";
    case CoupledMode::kTwoStage:
      return "two_stage";
    case CoupledMode::kOff:
      return "off";
  }
  return "off";
}

std::string_view OutputModeName(OutputMode mode) {
  switch (mode) {
    case OutputMode::kBinaural:
      return "binaural";
    case OutputMode::kArray:
      return "array";
    case OutputMode::kDiotic:
      return "diotic";
    case OutputMode::kMono:
      return "mono";
  }
  return "mono";
}

CoupledMode ParseCoupledMode(std::string_view name) {
  if (name == "full") return CoupledMode::kFull;
  if (name == "two_stage" || name == "two-stage") return CoupledMode::kTwoStage;
  if (name == "off") return CoupledMode::kOff;
  throw Error(ErrorKind::kUnknownName,
              "unknown coupled mode '" + std::string(name) + "'");
}

OutputMode ParseOutputMode(std::string_view name) {
  if (name == "binaural") return OutputMode::kBinaural;
  if (name == "array") return OutputMode::kArray;
  if (name == "diotic") return OutputMode::kDiotic;
  if (name == "mono") return OutputMode::kMono;
  throw Error(ErrorKind::kUnknownName,
              "unknown output mode '" + std::string(name) + "'");
}

const BandArray& AirAttenuation() {
  static const BandArray kM = {0.0001, 0.0003, 0.0006, 0.0011,
                               0.0024, 0.0079, 0.0285, 0.1000};
  return kM;
}

}  // namespace alodsim
