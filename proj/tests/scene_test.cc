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

#include <cmath>

#include <gtest/gtest.h>

namespace alodsim {
namespace {

RoomSpec Box(Vec3 dims, double alpha = 0.2) {
  RoomSpec r;
  r.id = "box";
  r.dims = dims;
  r.absorption.fill(UniformBands(alpha));
  r.scattering = UniformBands(0.4);
  return r;
}

TEST(SceneTest, LivingRoomGeometry) {
  const SceneSpec s = Preset("living-room");
  const RoomSpec& living = s.Room("living");
  EXPECT_EQ(living.dims, (Vec3{4.97, 3.78, 2.71}));
  EXPECT_NEAR(Volume(living), 50.91, 0.005);
  EXPECT_NEAR(SurfaceArea(living), 85.00, 0.005);
  EXPECT_NEAR(Volume(s.Room("kitchen")), 26.94, 0.005);
  EXPECT_EQ(s.Source("target").room, "kitchen");
  ASSERT_EQ(s.apertures.size(), 1u);
  EXPECT_DOUBLE_EQ(*s.apertures[0].direct_path_length, 5.7);
}

TEST(SceneTest, PubAndUnderground) {
  const SceneSpec pub = Preset("pub");
  EXPECT_NEAR(Distance(pub.Source("target").position,
                       pub.Receiver("listener").position),
              0.97, 1e-12);
  EXPECT_EQ(pub.panels.size(), 2u);
  EXPECT_NEAR(pub.Room("pub").decay->t30[3], 0.7, 1e-12);
  // The stated 442 m^3 is used, not the 525.3 m^3 box.
  EXPECT_NEAR(Volume(pub.Room("pub")), 442.0, 1e-9);

  const SceneSpec ug = Preset("underground");
  const RoomSpec& st = ug.Room("station");
  EXPECT_NEAR(st.decay->t30[0], 1.6, 1e-12);
  EXPECT_NEAR(Volume(st), 11000.0, 1e-9);
  EXPECT_NEAR(BoxVolume(st), 7837.0, 1.0);
  ASSERT_TRUE(st.decay->second_slope.has_value());
  EXPECT_DOUBLE_EQ(st.decay->second_slope->onset_level_db, -40.0);
  const Vec3 d = ug.Source("target").position - ug.Receiver("listener").position;
  EXPECT_NEAR(Norm(d), 6.37, 1e-12);
  // Frontal: along the listener's forward axis.
  EXPECT_NEAR(Dot(Normalized(d), ug.Receiver("listener").orientation), 1.0, 1e-12);
}

TEST(SceneTest, MaskerIsOneMeterRight) {
  for (const auto& name : PresetNames()) {
    const SceneSpec s = Preset(name);
    const ReceiverSpec& r = s.receivers[0];
    const Vec3 d = s.Source("masker").position - r.position;
    EXPECT_NEAR(Norm(d), 1.0, 1e-12) << name;
    const Direction dir = LocalToDirection(Frame::FromForward(r.orientation).ToLocal(d));
    EXPECT_NEAR(dir.azimuth_deg, 90.0, 1e-9) << name;
  }
}

TEST(SceneTest, AllPresetsValidate) {
  for (const auto& name : PresetNames()) EXPECT_NO_THROW(ValidateScene(Preset(name)));
  EXPECT_THROW(Preset("nope"), Error);
}

TEST(SceneTest, SurfaceAndVolume) {
  const RoomSpec cube = Box({1, 1, 1});
  EXPECT_DOUBLE_EQ(SurfaceArea(cube), 6.0);
  EXPECT_DOUBLE_EQ(Volume(cube), 1.0);
  RoomSpec o = cube;
  o.volume_override = 3.0;
  EXPECT_DOUBLE_EQ(Volume(o), 3.0);
  EXPECT_DOUBLE_EQ(BoxVolume(o), 1.0);
}

TEST(SceneTest, FitAbsorptionEyringAndSabine) {
  RoomSpec r = Box({4.97, 3.78, 2.71});
  const DecayTarget t = DecayTarget::Broadband(0.54);
  const double v = 4.97 * 3.78 * 2.71;
  const double s = 2 * (4.97 * 3.78 + 4.97 * 2.71 + 3.78 * 2.71);
  const BandArray a = FitAbsorption(r, t);
  const double expect = 1.0 - std::exp(-0.161 * v / (s * 0.54));
  for (double x : a) EXPECT_NEAR(x, expect, 1e-12);
  EXPECT_NEAR(a[0], 0.164, 0.001);
  EXPECT_NEAR(SabineAbsorption(r, t)[0], 0.179, 0.001);
}

TEST(SceneTest, FitThenEyringRoundTrip) {
  for (double t60 : {0.3, 0.54, 1.0, 2.5}) {
    RoomSpec r = Box({7.0, 5.0, 3.0});
    r.absorption.fill(FitAbsorption(r, DecayTarget::Broadband(t60)));
    for (double x : EyringT60(r)) EXPECT_NEAR(x, t60, 1e-9);
  }
}

TEST(SceneTest, FitAbsorptionLimitsAndInfeasible) {
  RoomSpec r = Box({5, 4, 3});
  EXPECT_LT(FitAbsorption(r, DecayTarget::Broadband(1e9))[0], 1e-8);
  try {
    FitAbsorption(r, DecayTarget::Broadband(1e-4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(SceneTest, RoomValidation) {
  RoomSpec r = Box({5, 4, 3});
  EXPECT_NO_THROW(ValidateRoom(r));
  r.absorption[1][2] = 1.2;
  EXPECT_THROW(ValidateRoom(r), Error);
  r = Box({5, 0, 3});
  EXPECT_THROW(ValidateRoom(r), Error);
  r = Box({5, 4, 3});
  r.scattering[0] = 1.5;
  EXPECT_THROW(ValidateRoom(r), Error);
  r = Box({5, 4, 3});
  r.volume_override = -1.0;
  EXPECT_THROW(ValidateRoom(r), Error);
}

TEST(SceneTest, SceneValidationCatchesBadReferences) {
  SceneSpec s = Preset("pub");
  s.sources[0].room = "attic";
  EXPECT_THROW(ValidateScene(s), Error);
  s = Preset("pub");
  s.sources[0].position = {100, 100, 100};
  EXPECT_THROW(ValidateScene(s), Error);
  s = Preset("pub");
  s.receivers.clear();
  EXPECT_THROW(ValidateScene(s), Error);
  s = Preset("pub");
  s.panels[0].corners[2].z += 0.01;  // not coplanar
  EXPECT_THROW(ValidateScene(s), Error);
}

TEST(SceneTest, ProfilePresetsFrozen) {
  const RenderingProfile full = ProfilePreset("razr-full");
  EXPECT_EQ(full.ism_order, 3);
  EXPECT_TRUE(full.jitter.enabled && full.smearing.enabled && full.fdn_enabled);
  EXPECT_TRUE(full.panels_enabled && full.dual_slope_enabled);
  EXPECT_EQ(full.coupled_mode, CoupledMode::kFull);

  RenderingProfile first = ProfilePreset("razr-1st");
  EXPECT_EQ(first.ism_order, 1);
  first.ism_order = 3;
  first.name = full.name;
  EXPECT_EQ(first, full);

  const RenderingProfile ism = ProfilePreset("ism-15");
  EXPECT_EQ(ism.ism_order, 15);
  EXPECT_FALSE(ism.fdn_enabled || ism.jitter.enabled || ism.smearing.enabled);

  const RenderingProfile an = ProfilePreset("anechoic");
  EXPECT_TRUE(an.anechoic);
  EXPECT_FALSE(an.fdn_enabled);
  EXPECT_EQ(an.ism_order, 0);
  EXPECT_NO_THROW(ValidateProfile(an));

  EXPECT_EQ(ProfilePreset("diotic").output_mode, OutputMode::kDiotic);
  const RenderingProfile simple = ProfilePreset("razr-simple");
  EXPECT_FALSE(simple.dual_slope_enabled || simple.panels_enabled);
  EXPECT_EQ(simple.coupled_mode, CoupledMode::kTwoStage);
}

TEST(SceneTest, AnechoicInvariantEnforced) {
  RenderingProfile p = ProfilePreset("anechoic");
  p.fdn_enabled = true;
  EXPECT_THROW(ValidateProfile(p), Error);
  p = ProfilePreset("anechoic");
  p.ism_order = 2;
  EXPECT_THROW(ValidateProfile(p), Error);
}

TEST(SceneTest, DirectivityOmniAndMeanSquare) {
  DirectivityGrid g;
  g.azimuths_deg = {0, 90, 180, 270};
  g.elevations_deg = {-90, 0, 90};
  g.gains.assign(12, UniformBands(1.0));
  EXPECT_NEAR(g.Evaluate({37.0, 12.0})[4], 1.0, 1e-12);
  EXPECT_NEAR(g.MeanSquareGain()[4], 1.0, 1e-9);
}

TEST(SceneTest, OcclusionBandGains) {
  OcclusionFilter f{0.0, 0.0};
  for (double g : f.BandGains()) EXPECT_DOUBLE_EQ(g, 1.0);
  OcclusionFilter d;
  const BandArray g = d.BandGains();
  EXPECT_NEAR(g[0], DbToAmplitude(-6.0) / std::sqrt(1 + std::pow(125.0 / 2000.0, 2)), 1e-12);
  for (std::size_t b = 1; b < kNumBands; ++b) EXPECT_LT(g[b], g[b - 1]);
}

}  // namespace
}  // namespace alodsim
