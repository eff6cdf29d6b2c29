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


#include "alodsim/scene_io.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace alodsim {
namespace {

using nlohmann::json;

[[noreturn]] void ParseFail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::kParse, path + ": " + what);
}

const json& Require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) ParseFail(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) ParseFail(path + "." + key, "missing required field");
  return *it;
}

double Number(const json& v, const std::string& path) {
  if (!v.is_number()) ParseFail(path, "expected number");
  return v.get<double>();
}

std::string String(const json& v, const std::string& path) {
  if (!v.is_string()) ParseFail(path, "expected string");
  return v.get<std::string>();
}

bool Bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) ParseFail(path, "expected boolean");
  return v.get<bool>();
}

Vec3 ReadVec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) ParseFail(path, "expected [x, y, z]");
  return {Number(v[0], path + "[0]"), Number(v[1], path + "[1]"),
          Number(v[2], path + "[2]")};
}

// A scalar applies to every band; an array must list all bands.
BandArray ReadBands(const json& v, const std::string& path) {
  if (v.is_number()) return UniformBands(v.get<double>());
  if (!v.is_array() || v.size() != kNumBands) {
    ParseFail(path, "expected number or array of 8 band values");
  }
  BandArray out;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    out[b] = Number(v[b], path + "[" + std::to_string(b) + "]");
  }
  return out;
}

WallBands ReadWallBands(const json& v, const std::string& path) {
  WallBands out;
  if (v.is_array() && v.size() == kNumWalls &&
      (v[0].is_array() || v[0].is_number()) && !(v.size() == kNumBands)) {
    for (std::size_t w = 0; w < kNumWalls; ++w) {
      out[w] = ReadBands(v[w], path + "[" + std::to_string(w) + "]");
    }
    return out;
  }
  out.fill(ReadBands(v, path));
  return out;
}

std::optional<double> OptionalNumber(const json& obj, const std::string& key,
                                     const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return Number(*it, path + "." + key);
}

DecayTarget ReadDecay(const json& v, const std::string& path) {
  DecayTarget d;
  d.t30 = ReadBands(Require(v, "t30", path), path + ".t30");
  if (auto it = v.find("second_slope"); it != v.end() && !it->is_null()) {
    const std::string sp = path + ".second_slope";
    SecondSlope s;
    s.t30 = Number(Require(*it, "t30", sp), sp + ".t30");
    if (auto o = it->find("onset_level_db"); o != it->end()) {
      s.onset_level_db = Number(*o, sp + ".onset_level_db");
    }
    d.second_slope = s;
  }
  return d;
}

RoomSpec ReadRoom(const json& v, const std::string& path) {
  RoomSpec r;
  r.id = String(Require(v, "id", path), path + ".id");
  if (auto it = v.find("origin"); it != v.end()) {
    r.origin = ReadVec3(*it, path + ".origin");
  }
  r.dims = ReadVec3(Require(v, "dims", path), path + ".dims");
  r.volume_override = OptionalNumber(v, "volume_override", path);
  r.scattering = UniformBands(0.4);
  if (auto it = v.find("scattering"); it != v.end()) {
    r.scattering = ReadBands(*it, path + ".scattering");
  }
  if (auto it = v.find("decay"); it != v.end() && !it->is_null()) {
    r.decay = ReadDecay(*it, path + ".decay");
  }
  if (auto it = v.find("absorption"); it != v.end()) {
    r.absorption = ReadWallBands(*it, path + ".absorption");
  } else if (r.decay) {
    // Validate dims before fitting so a bad box reports the real problem.
    if (!(r.dims.x > 0.0 && r.dims.y > 0.0 && r.dims.z > 0.0)) {
      throw Error(ErrorKind::kValidation,
                  "rooms[" + r.id + "].dims: must be strictly positive");
    }
    r.absorption.fill(FitAbsorption(r, *r.decay));
  } else {
    ParseFail(path, "either absorption or decay is required");
  }
  return r;
}

OcclusionFilter ReadOcclusion(const json& v, const std::string& path) {
  OcclusionFilter f;
  if (auto it = v.find("attenuation_db"); it != v.end()) {
    f.attenuation_db = Number(*it, path + ".attenuation_db");
  }
  if (auto it = v.find("lowpass_hz"); it != v.end()) {
    f.lowpass_hz = it->is_null() ? 0.0 : Number(*it, path + ".lowpass_hz");
  }
  return f;
}

ApertureSpec ReadAperture(const json& v, const std::string& path) {
  ApertureSpec a;
  a.id = v.contains("id") ? String(v["id"], path + ".id") : "aperture";
  const json& c = Require(v, "connects", path);
  if (!c.is_array() || c.size() != 2) {
    ParseFail(path + ".connects", "expected two room ids");
  }
  a.connects = {String(c[0], path + ".connects[0]"),
                String(c[1], path + ".connects[1]")};
  a.center = ReadVec3(Require(v, "center", path), path + ".center");
  a.width = Number(Require(v, "width", path), path + ".width");
  a.height = Number(Require(v, "height", path), path + ".height");
  a.direct_path_length = OptionalNumber(v, "direct_path_length", path);
  if (auto it = v.find("occlusion"); it != v.end()) {
    a.occlusion = ReadOcclusion(*it, path + ".occlusion");
  }
  return a;
}

PanelSpec ReadPanel(const json& v, const std::string& path) {
  PanelSpec p;
  p.id = String(Require(v, "id", path), path + ".id");
  const json& c = Require(v, "corners", path);
  if (!c.is_array() || c.size() != 4) ParseFail(path + ".corners", "expected 4 corners");
  for (std::size_t i = 0; i < 4; ++i) {
    p.corners[i] = ReadVec3(c[i], path + ".corners[" + std::to_string(i) + "]");
  }
  p.absorption = UniformBands(0.1);
  if (auto it = v.find("absorption"); it != v.end()) {
    p.absorption = ReadBands(*it, path + ".absorption");
  }
  return p;
}

DirectivityGrid ReadDirectivity(const json& v, const std::string& path) {
  DirectivityGrid g;
  const json& az = Require(v, "azimuths_deg", path);
  const json& el = Require(v, "elevations_deg", path);
  const json& gains = Require(v, "gains", path);
  if (!az.is_array() || !el.is_array() || !gains.is_array()) {
    ParseFail(path, "azimuths_deg, elevations_deg and gains must be arrays");
  }
  for (std::size_t i = 0; i < az.size(); ++i) {
    g.azimuths_deg.push_back(Number(az[i], path + ".azimuths_deg"));
  }
  for (std::size_t i = 0; i < el.size(); ++i) {
    g.elevations_deg.push_back(Number(el[i], path + ".elevations_deg"));
  }
  for (std::size_t i = 0; i < gains.size(); ++i) {
    g.gains.push_back(
        ReadBands(gains[i], path + ".gains[" + std::to_string(i) + "]"));
  }
  return g;
}

SourceSpec ReadSource(const json& v, const std::string& path) {
  SourceSpec s;
  s.id = String(Require(v, "id", path), path + ".id");
  s.room = String(Require(v, "room", path), path + ".room");
  s.position = ReadVec3(Require(v, "position", path), path + ".position");
  if (auto it = v.find("orientation"); it != v.end()) {
    s.orientation = ReadVec3(*it, path + ".orientation");
  }
  if (auto it = v.find("level_db"); it != v.end()) {
    s.level_db = Number(*it, path + ".level_db");
  }
  if (auto it = v.find("directivity"); it != v.end() && !it->is_null()) {
    s.directivity = ReadDirectivity(*it, path + ".directivity");
  }
  return s;
}

ReceiverKind ParseReceiverKind(const std::string& s, const std::string& path) {
  if (s == "binaural") return ReceiverKind::kBinaural;
  if (s == "omni") return ReceiverKind::kOmni;
  if (s == "array") return ReceiverKind::kArray;
  ParseFail(path, "unknown receiver kind '" + s + "'");
}

std::string_view ReceiverKindName(ReceiverKind k) {
  switch (k) {
    case ReceiverKind::kBinaural:
      return "binaural";
    case ReceiverKind::kOmni:
      return "omni";
    case ReceiverKind::kArray:
      return "array";
  }
  return "omni";
}

ReceiverSpec ReadReceiver(const json& v, const std::string& path) {
  ReceiverSpec r;
  r.id = String(Require(v, "id", path), path + ".id");
  r.room = String(Require(v, "room", path), path + ".room");
  r.position = ReadVec3(Require(v, "position", path), path + ".position");
  if (auto it = v.find("orientation"); it != v.end()) {
    r.orientation = ReadVec3(*it, path + ".orientation");
  }
  if (auto it = v.find("kind"); it != v.end()) {
    r.kind = ParseReceiverKind(String(*it, path + ".kind"), path + ".kind");
  }
  if (auto it = v.find("reference"); it != v.end()) {
    r.reference = String(*it, path + ".reference");
  }
  return r;
}

RenderingProfile ReadProfile(const json& v, const std::string& path) {
  if (v.is_string()) {
    try {
      return ProfilePreset(v.get<std::string>());
    } catch (const Error& e) {
      ParseFail(path, e.what());
    }
  }
  if (!v.is_object()) ParseFail(path, "expected profile name or object");
  // Objects may start from a named base and override fields.
  RenderingProfile p;
  if (auto it = v.find("base"); it != v.end()) {
    p = ProfilePreset(String(*it, path + ".base"));
  }
  if (auto it = v.find("name"); it != v.end()) p.name = String(*it, path + ".name");
  if (auto it = v.find("ism_order"); it != v.end()) {
    if (!it->is_number_integer()) ParseFail(path + ".ism_order", "expected integer");
    p.ism_order = it->get<int>();
  }
  if (auto it = v.find("jitter"); it != v.end()) {
    const std::string jp = path + ".jitter";
    if (auto e = it->find("enabled"); e != it->end()) {
      p.jitter.enabled = Bool(*e, jp + ".enabled");
    }
    if (auto s = it->find("sigma_per_order"); s != it->end()) {
      p.jitter.sigma_per_order = Number(*s, jp + ".sigma_per_order");
    }
  }
  if (auto it = v.find("smearing"); it != v.end()) {
    const std::string sp = path + ".smearing";
    if (auto e = it->find("enabled"); e != it->end()) {
      p.smearing.enabled = Bool(*e, sp + ".enabled");
    }
    if (auto d = it->find("burst_ms_per_order"); d != it->end()) {
      p.smearing.burst_ms_per_order = Number(*d, sp + ".burst_ms_per_order");
    }
    if (auto s = it->find("scattering"); s != it->end() && !s->is_null()) {
      p.smearing.scattering = ReadBands(*s, sp + ".scattering");
    }
  }
  if (auto it = v.find("fdn_enabled"); it != v.end()) {
    p.fdn_enabled = Bool(*it, path + ".fdn_enabled");
  }
  if (auto it = v.find("coupled_mode"); it != v.end()) {
    try {
      p.coupled_mode = ParseCoupledMode(String(*it, path + ".coupled_mode"));
    } catch (const Error& e) {
      ParseFail(path + ".coupled_mode", e.what());
    }
  }
  if (auto it = v.find("panels_enabled"); it != v.end()) {
    p.panels_enabled = Bool(*it, path + ".panels_enabled");
  }
  if (auto it = v.find("dual_slope_enabled"); it != v.end()) {
    p.dual_slope_enabled = Bool(*it, path + ".dual_slope_enabled");
  }
  if (auto it = v.find("anechoic"); it != v.end()) {
    p.anechoic = Bool(*it, path + ".anechoic");
  }
  if (auto it = v.find("output_mode"); it != v.end()) {
    try {
      p.output_mode = ParseOutputMode(String(*it, path + ".output_mode"));
    } catch (const Error& e) {
      ParseFail(path + ".output_mode", e.what());
    }
  }
  if (auto it = v.find("air_absorption"); it != v.end()) {
    p.air_absorption = Bool(*it, path + ".air_absorption");
  }
  return p;
}

json Vec3Json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json BandsJson(const BandArray& b) {
  json out = json::array();
  for (double v : b) out.push_back(v);
  return out;
}

json ProfileJson(const RenderingProfile& p) {
  json j;
  j["name"] = p.name;
  j["ism_order"] = p.ism_order;
  j["jitter"] = {{"enabled", p.jitter.enabled},
                 {"sigma_per_order", p.jitter.sigma_per_order}};
  j["smearing"] = {{"enabled", p.smearing.enabled},
                   {"burst_ms_per_order", p.smearing.burst_ms_per_order}};
  if (p.smearing.scattering) {
    j["smearing"]["scattering"] = BandsJson(*p.smearing.scattering);
  }
  j["fdn_enabled"] = p.fdn_enabled;
  j["coupled_mode"] = std::string(CoupledModeName(p.coupled_mode));
  j["panels_enabled"] = p.panels_enabled;
  j["dual_slope_enabled"] = p.dual_slope_enabled;
  j["anechoic"] = p.anechoic;
  j["output_mode"] = std::string(OutputModeName(p.output_mode));
  j["air_absorption"] = p.air_absorption;
  return j;
}

json ParseJson(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("document: ") + e.what());
  }
}

}  // namespace

SceneSpec ParseScene(std::string_view document) {
  const json doc = ParseJson(document);
  if (!doc.is_object()) ParseFail("document", "expected a JSON object");
  SceneSpec scene;
  if (auto it = doc.find("name"); it != doc.end()) {
    scene.name = String(*it, "name");
  }
  if (auto it = doc.find("sample_rate"); it != doc.end()) {
    scene.sample_rate = Number(*it, "sample_rate");
  }
  if (auto it = doc.find("speed_of_sound"); it != doc.end()) {
    scene.speed_of_sound = Number(*it, "speed_of_sound");
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      ParseFail("seed", "expected non-negative integer");
    }
    scene.rng_seed = it->get<std::uint64_t>();
  }
  auto read_list = [&](const char* key, auto reader, auto& out) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_array()) ParseFail(key, "expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      out.push_back(
          reader((*it)[i], std::string(key) + "[" + std::to_string(i) + "]"));
    }
  };
  read_list("rooms", ReadRoom, scene.rooms);
  read_list("apertures", ReadAperture, scene.apertures);
  read_list("panels", ReadPanel, scene.panels);
  read_list("sources", ReadSource, scene.sources);
  read_list("receivers", ReadReceiver, scene.receivers);
  if (auto it = doc.find("profile"); it != doc.end() && !it->is_null()) {
    scene.profile = ReadProfile(*it, "profile");
  }
  ValidateScene(scene);
  return scene;
}

std::string SerializeScene(const SceneSpec& scene) {
  json doc;
  doc["name"] = scene.name;
  doc["sample_rate"] = scene.sample_rate;
  doc["speed_of_sound"] = scene.speed_of_sound;
  doc["seed"] = scene.rng_seed;
  json rooms = json::array();
  for (const RoomSpec& r : scene.rooms) {
    json j;
    j["id"] = r.id;
    j["origin"] = Vec3Json(r.origin);
    j["dims"] = Vec3Json(r.dims);
    json walls = json::array();
    for (const BandArray& w : r.absorption) walls.push_back(BandsJson(w));
    j["absorption"] = walls;
    j["scattering"] = BandsJson(r.scattering);
    if (r.volume_override) j["volume_override"] = *r.volume_override;
    if (r.decay) {
      json d;
      d["t30"] = BandsJson(r.decay->t30);
      if (r.decay->second_slope) {
        d["second_slope"] = {
            {"t30", r.decay->second_slope->t30},
            {"onset_level_db", r.decay->second_slope->onset_level_db}};
      }
      j["decay"] = d;
    }
    rooms.push_back(j);
  }
  doc["rooms"] = rooms;
  json apertures = json::array();
  for (const ApertureSpec& a : scene.apertures) {
    json j;
    j["id"] = a.id;
    j["connects"] = {a.connects[0], a.connects[1]};
    j["center"] = Vec3Json(a.center);
    j["width"] = a.width;
    j["height"] = a.height;
    if (a.direct_path_length) j["direct_path_length"] = *a.direct_path_length;
    j["occlusion"] = {{"attenuation_db", a.occlusion.attenuation_db},
                      {"lowpass_hz", a.occlusion.lowpass_hz}};
    apertures.push_back(j);
  }
  doc["apertures"] = apertures;
  json panels = json::array();
  for (const PanelSpec& p : scene.panels) {
    json j;
    j["id"] = p.id;
    json corners = json::array();
    for (const Vec3& c : p.corners) corners.push_back(Vec3Json(c));
    j["corners"] = corners;
    j["absorption"] = BandsJson(p.absorption);
    panels.push_back(j);
  }
  doc["panels"] = panels;
  json sources = json::array();
  for (const SourceSpec& s : scene.sources) {
    json j;
    j["id"] = s.id;
    j["room"] = s.room;
    j["position"] = Vec3Json(s.position);
    j["orientation"] = Vec3Json(s.orientation);
    j["level_db"] = s.level_db;
    if (s.directivity) {
      json g;
      g["azimuths_deg"] = s.directivity->azimuths_deg;
      g["elevations_deg"] = s.directivity->elevations_deg;
      json gains = json::array();
      for (const BandArray& b : s.directivity->gains) gains.push_back(BandsJson(b));
      g["gains"] = gains;
      j["directivity"] = g;
    }
    sources.push_back(j);
  }
  doc["sources"] = sources;
  json receivers = json::array();
  for (const ReceiverSpec& r : scene.receivers) {
    json j;
    j["id"] = r.id;
    j["room"] = r.room;
    j["position"] = Vec3Json(r.position);
    j["orientation"] = Vec3Json(r.orientation);
    j["kind"] = std::string(ReceiverKindName(r.kind));
    j["reference"] = r.reference;
    receivers.push_back(j);
  }
  doc["receivers"] = receivers;
  if (scene.profile) doc["profile"] = ProfileJson(*scene.profile);
  return doc.dump(2);
}

RenderingProfile ParseProfileJson(std::string_view document) {
  RenderingProfile p = ReadProfile(ParseJson(document), "profile");
  ValidateProfile(p);
  return p;
}

std::string SerializeProfile(const RenderingProfile& profile) {
  return ProfileJson(profile).dump(2);
}

SceneSpec LoadSceneFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open scene file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScene(buf.str());
}

}  // namespace alodsim
