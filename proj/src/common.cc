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

#include "alodsim/common.h"

namespace alodsim {

Frame Frame::FromForward(const Vec3& forward) {
  Frame f;
  f.front = Normalized(forward);
  Vec3 world_up{0.0, 0.0, 1.0};
  // Looking straight up or down: fall back to world x as the reference.
  if (std::abs(Dot(f.front, world_up)) > 1.0 - 1e-12) world_up = {1.0, 0.0, 0.0};
  f.left = Normalized(Cross(world_up, f.front));
  f.up = Cross(f.front, f.left);
  return f;
}

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return "parse_error";
    case ErrorKind::kValidation:
      return "validation_error";
    case ErrorKind::kInfeasible:
      return "infeasible";
    case ErrorKind::kDegenerateGeometry:
      return "degenerate_geometry";
    case ErrorKind::kInsufficientDecay:
      return "insufficient_decay";
    case ErrorKind::kInvalidArgument:
      return "invalid_argument";
    case ErrorKind::kIo:
      return "io_error";
    case ErrorKind::kRateMismatch:
      return "rate_mismatch";
    case ErrorKind::kUnknownName:
      return "unknown_name";
  }
  return "error";
}

}  // namespace alodsim
