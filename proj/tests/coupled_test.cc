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

#include <cmath>

#include <gtest/gtest.h>

#include "alodsim/analysis.h"
#include "alodsim/dsp.h"
#include "alodsim/pipeline.h"
#include "alodsim/spatializer.h"

namespace alodsim {
namespace {

constexpr double kFs = 44100.0;

class CoupledTest : public ::testing::Test {
 protected:
  SceneSpec scene_ = Preset("living-room");
  const SourceSpec& target() const { return scene_.Source("target"); }
  const ReceiverSpec& listener() const { return scene_.receivers[0]; }
};

double RelRms(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    num += (x - y) * (x - y);
    den += y * y;
  }
  return std::sqrt(num / den);
}

TEST_F(CoupledTest, CouplingFromAreaRatio) {
  const CoupledPlan plan =
      MakeCoupledPlan(scene_, ProfilePreset("razr-full"), target(), listener());
  EXPECT_NEAR(plan.aperture.Area(), 1.6, 1e-12);
  EXPECT_NEAR(SharedWallArea(scene_, plan.aperture), 4.97 * 2.71, 1e-9);
  EXPECT_NEAR(plan.coupling, 0.119, 5e-4);
  EXPECT_NEAR(plan.path_length_direct, 5.7, 1e-9);
  EXPECT_EQ(plan.mode, CoupledMode::kFull);
}

TEST_F(CoupledTest, OccludedDirectTap) {
  CoupledPlan plan =
      MakeCoupledPlan(scene_, ProfilePreset("anechoic"), target(), listener());
  ReflectionTap tap = OccludedDirect(plan, target(), listener(), 343.0);
  EXPECT_NEAR(tap.delay, 5.7 / 343.0, 1e-12);
  EXPECT_NEAR(tap.delay * 1000.0, 16.6, 0.05);
  // -6 dB broadband, first-order low-pass at 2 kHz.
  EXPECT_NEAR(AmplitudeToDb(tap.amplitude[0] * 5.7), -6.0, 0.05);
  EXPECT_NEAR(AmplitudeToDb(tap.amplitude[3] * 5.7), -6.0 - 10.0 * std::log10(1.25), 0.01);
  EXPECT_LT(tap.amplitude[7], tap.amplitude[4]);

  plan.occlusion_filter = {0.0, INFINITY};
  tap = OccludedDirect(plan, target(), listener(), 343.0);
  for (double a : tap.amplitude) EXPECT_NEAR(a, 1.0 / 5.7, 1e-12);
}

TEST_F(CoupledTest, AnechoicIsSingleOccludedTap) {
  const SpatialIR ir = SimulateSpatial(scene_, ProfilePreset("anechoic"), 0);
  ASSERT_EQ(ir.taps.size(), 1u);
  EXPECT_TRUE(ir.tail.empty());
  EXPECT_TRUE(ir.signature.empty());
  EXPECT_NEAR(ir.taps[0].delay, 5.7 / 343.0, 1e-12);
}

TEST_F(CoupledTest, TwoStageFirstArrival) {
  SimulationOptions opt;
  opt.output_mode = OutputMode::kMono;
  const ImpulseResponse ir = Simulate(scene_, ProfilePreset("razr-simple"), 1, opt);
  const double expected = 5.7 / 343.0 * kFs;
  EXPECT_NEAR(static_cast<double>(FirstArrival(ir.channels[0])), expected, 1.0);
}

TEST_F(CoupledTest, UnitSignatureEqualsReceiverRoomAlone) {
  const RenderingProfile p = ProfilePreset("razr-simple");
  const CoupledPlan plan = MakeCoupledPlan(scene_, p, target(), listener());
  const RoomSpec& room = scene_.Room(listener().room);
  const CounterRng rng(7);
  const std::size_t n = 20000;
  const std::vector<double> unit = {1.0};
  const SpatialIR coupled =
      TwoStageWithSignature(scene_, p, target(), listener(), unit, n, rng);
  const SpatialIR alone = SimulateRoom(
      room, DoorSource(plan, room), listener().position, listener().orientation,
      PanelsInRoom(scene_, room), p, kFs, 343.0, n, rng);
  const std::vector<double> a = RenderMono(coupled).channels[0];
  const std::vector<double> b = RenderMono(alone).channels[0];
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-10) << i;
}

TEST_F(CoupledTest, TwoStageIsConvolutionOfRoomIrs) {
  const RenderingProfile p = ProfilePreset("razr-simple");
  const CounterRng rng(3);
  const std::size_t n = 30000;
  const SpatialIR two = CoupleTwoStage(scene_, p, target(), listener(), rng, n);
  const std::vector<double> h1 =
      DoorSignature(scene_, p, target(), listener(), n, rng.Substream(1));
  const CoupledPlan plan = MakeCoupledPlan(scene_, p, target(), listener());
  const RoomSpec& room = scene_.Room(listener().room);
  const SpatialIR h2 = SimulateRoom(
      room, DoorSource(plan, room), listener().position, listener().orientation,
      PanelsInRoom(scene_, room), p, kFs, 343.0, n, rng.Substream(2));
  const std::vector<double> expected = Convolve(h1, RenderMono(h2).channels[0]);
  const std::vector<double> got = RenderMono(two).channels[0];
  EXPECT_EQ(got.size(), 2 * n - 1);
  EXPECT_LT(RelRms(got, expected), 1e-6);
}

TEST_F(CoupledTest, OutputLengthIsConvolutionLength) {
  const RenderingProfile p = ProfilePreset("razr-simple");
  const SpatialIR two = CoupleTwoStage(scene_, p, target(), listener(), CounterRng(1), 12345);
  EXPECT_EQ(two.signature.size(), 12345u);
  EXPECT_EQ(RenderMono(two).length(), 12345u + 12345u - 1u);
}

TEST_F(CoupledTest, FullWithZeroCouplingEqualsTwoStage) {
  const RenderingProfile p = ProfilePreset("razr-full");
  const CounterRng rng(11);
  const std::size_t n = 20000;
  const SpatialIR two = CoupleTwoStage(scene_, p, target(), listener(), rng, n);
  const SpatialIR full = CoupleFull(scene_, p, target(), listener(), rng, n, 0.0);
  EXPECT_EQ(RenderMono(two).channels[0], RenderMono(full).channels[0]);
}

TEST_F(CoupledTest, FullCouplingRejectsBadGain) {
  const RenderingProfile p = ProfilePreset("razr-full");
  EXPECT_THROW(CoupleFull(scene_, p, target(), listener(), CounterRng(1), 5000, 1.5), Error);
}

TEST_F(CoupledTest, FullDecaysSlowerThanTwoStage) {
  RenderingProfile full = ProfilePreset("razr-full");
  RenderingProfile two = full;
  two.coupled_mode = CoupledMode::kTwoStage;
  SimulationOptions opt;
  opt.output_mode = OutputMode::kMono;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const ImpulseResponse a = Simulate(scene_, full, seed, opt);
    const ImpulseResponse b = Simulate(scene_, two, seed, opt);
    const EdcCurve ea = SchroederEdc(a.channels[0], kFs);
    const EdcCurve eb = SchroederEdc(b.channels[0], kFs);
    // Leakage steepens the early part; the late part is slower.
    const double late_a = FitDecayLine(ea, -40.0, -80.0).slope;
    const double late_b = FitDecayLine(eb, -40.0, -80.0).slope;
    EXPECT_GT(late_a, late_b) << seed;
  }
}

TEST_F(CoupledTest, SameRoomIgnoresCoupledMode) {
  SimulationOptions opt;
  opt.source_id = "masker";
  RenderingProfile off = ProfilePreset("razr-full");
  off.coupled_mode = CoupledMode::kOff;
  const SpatialIR a = SimulateSpatial(scene_, off, 4, opt);
  const SpatialIR b = SimulateSpatial(scene_, ProfilePreset("razr-full"), 4, opt);
  EXPECT_EQ(RenderMono(a).channels[0], RenderMono(b).channels[0]);
  const RoomSpec& room = scene_.Room("living");
  const SourceSpec& m = scene_.Source("masker");
  const std::size_t n = a.length;
  const SpatialIR c = SimulateRoom(room, m, listener().position, listener().orientation,
                                   PanelsInRoom(scene_, room), off, kFs, 343.0, n,
                                   CounterRng(4));
  EXPECT_EQ(RenderMono(a).channels[0], RenderMono(c).channels[0]);
}

TEST_F(CoupledTest, ModeOffAcrossRoomsIsOccludedOnly) {
  RenderingProfile off = ProfilePreset("razr-full");
  off.coupled_mode = CoupledMode::kOff;
  const SpatialIR ir = SimulateSpatial(scene_, off, 0);
  ASSERT_EQ(ir.taps.size(), 1u);
  EXPECT_TRUE(ir.tail.empty());
}

TEST_F(CoupledTest, NonAdjacentRoomsRejected) {
  SceneSpec s = scene_;
  s.apertures.clear();
  EXPECT_THROW(MakeCoupledPlan(s, ProfilePreset("razr-full"), s.Source("target"),
                               s.receivers[0]),
               Error);
}

}  // namespace
}  // namespace alodsim
