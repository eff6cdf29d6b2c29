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

#ifndef ALODSIM_COMMON_H_
#define ALODSIM_COMMON_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace alodsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultSampleRate = 44100.0;
inline constexpr double kDefaultSpeedOfSound = 343.0;

// Octave bands used for absorption, scattering, decay and tap gains.
inline constexpr std::size_t kNumBands = 8;
inline constexpr std::array<double, kNumBands> kBandCenters = {
    125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0, 16000.0};

using BandArray = std::array<double, kNumBands>;

inline BandArray UniformBands(double value) {
  BandArray out;
  out.fill(value);
  return out;
}

inline double BandMean(const BandArray& bands) {
  double sum = 0.0;
  for (double v : bands) sum += v;
  return sum / static_cast<double>(kNumBands);
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int axis) {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }
  constexpr double operator[](int axis) const {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
  friend constexpr bool operator==(const Vec3& a, const Vec3& b) = default;
};

inline constexpr double Dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr Vec3 Cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}

inline double Norm(const Vec3& a) { return std::sqrt(Dot(a, a)); }

inline double Distance(const Vec3& a, const Vec3& b) { return Norm(a - b); }

inline Vec3 Normalized(const Vec3& a) {
  const double n = Norm(a);
  return n > 0.0 ? (1.0 / n) * a : Vec3{};
}

inline bool IsFinite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Direction relative to a listener (or source) frame. Azimuth is measured
// clockwise seen from above, so +90 deg is to the right; elevation is
// positive upwards.
struct Direction {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
};

// Local frame vectors are (front, left, up).
inline Vec3 DirectionToLocal(const Direction& d) {
  const double az = d.azimuth_deg * kPi / 180.0;
  const double el = d.elevation_deg * kPi / 180.0;
  return {std::cos(el) * std::cos(az), -std::cos(el) * std::sin(az),
          std::sin(el)};
}

inline Direction LocalToDirection(const Vec3& v) {
  const Vec3 u = Normalized(v);
  return {std::atan2(-u.y, u.x) * 180.0 / kPi,
          std::asin(std::clamp(u.z, -1.0, 1.0)) * 180.0 / kPi};
}

// Orthonormal frame built from a forward vector with world z as "up".
struct Frame {
  Vec3 front;
  Vec3 left;
  Vec3 up;

  static Frame FromForward(const Vec3& forward);

  Vec3 ToLocal(const Vec3& world) const {
    return {Dot(world, front), Dot(world, left), Dot(world, up)};
  }
};

enum class ErrorKind {
  kParse,
  kValidation,
  kInfeasible,
  kDegenerateGeometry,
  kInsufficientDecay,
  kInvalidArgument,
  kIo,
  kRateMismatch,
  kUnknownName,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures surface as this exception type; the kind maps to a
// stable machine-readable token in CLI error lines.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline double DbToAmplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double AmplitudeToDb(double a) { return 20.0 * std::log10(a); }
inline double PowerToDb(double p) { return 10.0 * std::log10(p); }

}  // namespace alodsim

#endif  // ALODSIM_COMMON_H_
