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


#ifndef ALODSIM_RNG_H_
#define ALODSIM_RNG_H_

#include <cstdint>

namespace alodsim {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so per-item streams can be derived independently
// of evaluation order. Mixing is SplitMix64.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL))) {}

  // Derives an independent generator for a sub-stream (e.g. one image
  // source, one tap, one FDN line).
  CounterRng Substream(std::uint64_t id) const {
    CounterRng out(0);
    out.key_ = Mix(key_ ^ Mix(id + 0x9e3779b97f4a7c15ULL));
    return out;
  }

  std::uint64_t NextU64() { return Mix(key_ + Mix(counter_++)); }

  // Uniform in the open interval (0, 1).
  double Uniform() {
    return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; deterministic across platforms since it
  // only uses <cmath> on our own uniforms.
  double Gaussian();

  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n) { return NextU64() % n; }

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace alodsim

#endif  // ALODSIM_RNG_H_
