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

#include <string>

#include <gtest/gtest.h>

namespace alodsim {
namespace {

const char* kMinimal = R"({
  "rooms": [{"id": "r", "dims": [5, 4, 3], "absorption": 0.2}],
  "sources": [{"id": "s", "room": "r", "position": [1, 1, 1]}],
  "receivers": [{"id": "l", "room": "r", "position": [3, 2, 1.5]}]
})";

ErrorKind KindOf(const std::string& doc) {
  try {
    ParseScene(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::kIo;
}

TEST(SceneIoTest, DefaultsFilled) {
  const SceneSpec s = ParseScene(kMinimal);
  EXPECT_DOUBLE_EQ(s.speed_of_sound, 343.0);
  EXPECT_DOUBLE_EQ(s.sample_rate, 44100.0);
  EXPECT_DOUBLE_EQ(s.rooms[0].scattering[0], 0.4);
  EXPECT_EQ(s.receivers[0].kind, ReceiverKind::kBinaural);
  EXPECT_FALSE(s.profile.has_value());
}

TEST(SceneIoTest, ShippedPresetFilesMatchPresets) {
  for (const auto& name : PresetNames()) {
    const SceneSpec f = LoadSceneFile(std::string(ALODSIM_SOURCE_DIR) + "/scenes/" + name + ".json");
    EXPECT_EQ(f, Preset(name)) << name;
  }
  const SceneSpec lr = LoadSceneFile(std::string(ALODSIM_SOURCE_DIR) + "/scenes/living-room.json");
  EXPECT_EQ(lr.Room("living").dims, (Vec3{4.97, 3.78, 2.71}));
}

TEST(SceneIoTest, RoundTrip) {
  for (const auto& name : PresetNames()) {
    SceneSpec s = Preset(name);
    s.profile = ProfilePreset("razr-1st");
    const SceneSpec back = ParseScene(SerializeScene(s));
    EXPECT_EQ(back, s) << name;
    EXPECT_EQ(SerializeScene(back), SerializeScene(s));
  }
}

TEST(SceneIoTest, RoundTripWithDirectivityAndPerWall) {
  SceneSpec s = ParseScene(kMinimal);
  s.rooms[0].absorption[4] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  DirectivityGrid g;
  g.azimuths_deg = {0, 120, 240};
  g.elevations_deg = {-90, 0, 90};
  g.gains.assign(9, UniformBands(0.5));
  g.gains[4][2] = 1.0;
  s.sources[0].directivity = g;
  s.receivers[0].kind = ReceiverKind::kArray;
  s.receivers[0].reference = "86-preset";
  EXPECT_EQ(ParseScene(SerializeScene(s)), s);
}

TEST(SceneIoTest, ParseErrorsNameField) {
  try {
    ParseScene(R"({"rooms": [{"id": "r", "dims": [5, 4], "absorption": 0.2}],
                   "sources": [], "receivers": []})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("dims"), std::string::npos) << e.what();
  }
  EXPECT_EQ(KindOf("{not json"), ErrorKind::kParse);
  EXPECT_EQ(KindOf(R"({"rooms": "x"})"), ErrorKind::kParse);
}

TEST(SceneIoTest, OutOfRangeAbsorptionIsValidationError) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"absorption\": 0.2"), 17,
              "\"absorption\": [0.2, 1.2, 0.2, 0.2, 0.2, 0.2]");
  EXPECT_EQ(KindOf(doc), ErrorKind::kValidation);
}

TEST(SceneIoTest, DecayWithoutAbsorptionFits) {
  const SceneSpec s = ParseScene(R"({
    "rooms": [{"id": "r", "dims": [4.97, 3.78, 2.71], "decay": {"t30": 0.54}}],
    "sources": [{"id": "s", "room": "r", "position": [1, 1, 1]}],
    "receivers": [{"id": "l", "room": "r", "position": [3, 2, 1.5]}],
    "profile": "ism-15"
  })");
  EXPECT_NEAR(s.rooms[0].absorption[0][0], 0.164, 0.001);
  ASSERT_TRUE(s.profile.has_value());
  EXPECT_EQ(s.profile->ism_order, 15);
}

TEST(SceneIoTest, ProfileObjectWithBase) {
  const RenderingProfile p = ParseProfileJson(
      R"({"base": "razr-full", "name": "x", "ism_order": 2,
          "jitter": {"sigma_per_order": 0.05}, "output_mode": "mono"})");
  EXPECT_EQ(p.ism_order, 2);
  EXPECT_TRUE(p.jitter.enabled);
  EXPECT_DOUBLE_EQ(p.jitter.sigma_per_order, 0.05);
  EXPECT_EQ(p.output_mode, OutputMode::kMono);
  EXPECT_EQ(ParseProfileJson(SerializeProfile(p)), p);
  EXPECT_THROW(ParseProfileJson(R"({"coupled_mode": "sideways"})"), Error);
  EXPECT_THROW(ParseProfileJson(R"("razr-max")"), Error);
}

TEST(SceneIoTest, MissingFileIsIoError) {
  try {
    LoadSceneFile("/nonexistent/scene.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

}  // namespace
}  // namespace alodsim
