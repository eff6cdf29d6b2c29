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


#ifndef ALODSIM_WAV_H_
#define ALODSIM_WAV_H_

#include <string>
#include <vector>

namespace alodsim {

enum class WavFormat { kPcm16, kPcm24, kFloat32 };

struct WavData {
  std::vector<std::vector<double>> channels;
  double sample_rate = 0.0;
  WavFormat format = WavFormat::kFloat32;
};

// RIFF/WAVE reader for PCM 16/24-bit and IEEE float 32-bit (including
// WAVE_FORMAT_EXTENSIBLE headers). Throws kIo on malformed files.
WavData ReadWav(const std::string& path);

// Samples outside [-1, 1] are clipped for the PCM formats.
void WriteWav(const std::string& path,
              const std::vector<std::vector<double>>& channels,
              double sample_rate, WavFormat format = WavFormat::kFloat32);

WavFormat ParseWavFormat(const std::string& name);

}  // namespace alodsim

#endif  // ALODSIM_WAV_H_
