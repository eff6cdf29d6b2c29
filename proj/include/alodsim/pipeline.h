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


#ifndef ALODSIM_PIPELINE_H_
#define ALODSIM_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "alodsim/fdn.h"
#include "alodsim/ism.h"
#include "alodsim/rng.h"
#include "alodsim/scene.h"
#include "alodsim/spatializer.h"

namespace alodsim {

struct RoomRunInfo {
  std::optional<FdnConfig> fdn;
  std::optional<DualSlopeConfig> dual;
  SpliceReport splice;
};

// Early reflections plus (if enabled) the spliced FDN tail for one source and
// receiver in one room.
SpatialIR SimulateRoom(const RoomSpec& room, const SourceSpec& source,
                       const Vec3& receiver_pos,
                       const Vec3& receiver_orientation,
                       std::span<const PanelSpec> panels,
                       const RenderingProfile& profile, double sample_rate,
                       double speed_of_sound, std::size_t num_samples,
                       const CounterRng& rng, RoomRunInfo* info = nullptr);

// Default render length: 1.5 x the longest decay target of the involved
// rooms (second slope included), at least 0.5 s.
double DefaultDuration(const SceneSpec& scene);

struct SimulationOptions {
  std::string source_id;    // empty: first source
  std::string receiver_id;  // empty: first receiver
  double duration = 0.0;    // seconds; <= 0 selects DefaultDuration
  std::optional<OutputMode> output_mode;  // overrides the profile
  std::shared_ptr<const HrtfSet> hrtf;    // null: DefaultHrtf
  std::shared_ptr<const LoudspeakerLayout> layout;  // null: 86-preset
};

SpatialIR SimulateSpatial(const SceneSpec& scene,
                          const RenderingProfile& profile, std::uint64_t seed,
                          const SimulationOptions& options = {});

ImpulseResponse Simulate(const SceneSpec& scene, const RenderingProfile& profile,
                         std::uint64_t seed,
                         const SimulationOptions& options = {});

}  // namespace alodsim

#endif  // ALODSIM_PIPELINE_H_
