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


#ifndef ALODSIM_SCENE_IO_H_
#define ALODSIM_SCENE_IO_H_

#include <string>
#include <string_view>

#include "alodsim/scene.h"

namespace alodsim {

// Parses a scene document (JSON, schema in docs/scene-format.md), fills
// defaults and validates. Schema problems throw Error(kParse) naming the
// field; invariant violations throw Error(kValidation).
SceneSpec ParseScene(std::string_view document);

// Canonical JSON form; ParseScene(SerializeScene(s)) == s.
std::string SerializeScene(const SceneSpec& scene);

RenderingProfile ParseProfileJson(std::string_view document);
std::string SerializeProfile(const RenderingProfile& profile);

SceneSpec LoadSceneFile(const std::string& path);

}  // namespace alodsim

#endif  // ALODSIM_SCENE_IO_H_
