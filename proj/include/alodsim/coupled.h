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


#ifndef ALODSIM_COUPLED_H_
#define ALODSIM_COUPLED_H_

#include <optional>
#include <span>

#include "alodsim/ism.h"
#include "alodsim/rng.h"
#include "alodsim/scene.h"

namespace alodsim {

struct CoupledPlan {
  CoupledMode mode = CoupledMode::kTwoStage;
  ApertureSpec aperture;
  double path_length_direct = 0.0;  // meters
  OcclusionFilter occlusion_filter;
  // FDN cross-coupling gain: aperture area over shared wall area.
  double coupling = 0.0;
  int wall_axis = 0;  // axis normal to the shared wall
};

// Throws kValidation when the rooms are not joined by an aperture.
CoupledPlan MakeCoupledPlan(const SceneSpec& scene,
                            const RenderingProfile& profile,
                            const SourceSpec& source,
                            const ReceiverSpec& receiver);

// Area of the wall shared by the two rooms an aperture connects.
double SharedWallArea(const SceneSpec& scene, const ApertureSpec& aperture);

// Occluded line-of-sight stand-in: one tap at path/c with the broadband
// attenuation and first-order low-pass of the plan applied per band.
ReflectionTap OccludedDirect(const CoupledPlan& plan, const SourceSpec& source,
                             const ReceiverSpec& receiver,
                             double speed_of_sound);

// Aperture center moved `offset` meters into `room`.
Vec3 ApertureAnchor(const CoupledPlan& plan, const RoomSpec& room,
                    double offset = 1e-3);

// Omni point source at the aperture, facing into `room`.
SourceSpec DoorSource(const CoupledPlan& plan, const RoomSpec& room);

// Stage 1: source room to an omni receiver at the door, rendered mono.
std::vector<double> DoorSignature(const SceneSpec& scene,
                                  const RenderingProfile& profile,
                                  const SourceSpec& source,
                                  const ReceiverSpec& receiver,
                                  std::size_t num_samples,
                                  const CounterRng& rng);

// Stage 2: receiver room driven by an omni source at the door carrying
// `signature`.
SpatialIR TwoStageWithSignature(const SceneSpec& scene,
                                const RenderingProfile& profile,
                                const SourceSpec& source,
                                const ReceiverSpec& receiver,
                                std::span<const double> signature,
                                std::size_t num_samples,
                                const CounterRng& rng);

SpatialIR CoupleTwoStage(const SceneSpec& scene,
                         const RenderingProfile& profile,
                         const SourceSpec& source,
                         const ReceiverSpec& receiver, const CounterRng& rng,
                         std::size_t num_samples = 0);

// Two-stage plus a cross-coupled FDN pair. `coupling` overrides the plan's
// area ratio when set.
SpatialIR CoupleFull(const SceneSpec& scene, const RenderingProfile& profile,
                     const SourceSpec& source, const ReceiverSpec& receiver,
                     const CounterRng& rng, std::size_t num_samples = 0,
                     std::optional<double> coupling = std::nullopt);

}  // namespace alodsim

#endif  // ALODSIM_COUPLED_H_
