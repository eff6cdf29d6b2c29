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


#include "alodsim/wav.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "alodsim/common.h"
#include "alodsim/rng.h"

namespace alodsim {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("alodsim_wav_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

std::vector<std::vector<double>> Noise(std::size_t ch, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::vector<double>> x(ch, std::vector<double>(n));
  for (auto& c : x) {
    for (double& v : c) v = 0.9 * (2.0 * rng.Uniform() - 1.0);
  }
  return x;
}

struct FormatCase {
  WavFormat format;
  double tol;
};

class WavRoundTrip : public ::testing::TestWithParam<FormatCase> {};

TEST_P(WavRoundTrip, PreservesSamples) {
  const auto [format, tol] = GetParam();
  const auto x = Noise(3, 1000, 1);
  const std::string path = TempPath("rt.wav");
  WriteWav(path, x, 48000.0, format);
  const WavData d = ReadWav(path);
  EXPECT_EQ(d.sample_rate, 48000.0);
  EXPECT_EQ(d.format, format);
  ASSERT_EQ(d.channels.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    ASSERT_EQ(d.channels[c].size(), 1000u);
    for (std::size_t i = 0; i < 1000; ++i) ASSERT_NEAR(d.channels[c][i], x[c][i], tol);
  }
  std::remove(path.c_str());
}

INSTANTIATE_TEST_SUITE_P(Formats, WavRoundTrip,
                         ::testing::Values(FormatCase{WavFormat::kPcm16, 2.0 / 32767.0},
                                           FormatCase{WavFormat::kPcm24, 2.0 / 8388607.0},
                                           FormatCase{WavFormat::kFloat32, 1e-7}));

TEST(WavTest, FloatRewriteIsByteIdentical) {
  const auto x = Noise(2, 777, 2);
  const std::string a = TempPath("a.wav");
  const std::string b = TempPath("b.wav");
  WriteWav(a, x, 44100.0);
  const WavData d = ReadWav(a);
  WriteWav(b, d.channels, d.sample_rate);
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(fa)), {});
  const std::string sb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_EQ(sa, sb);
  EXPECT_GE(sa.size(), 2u * 777u * 4u);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST(WavTest, PcmClipsOutOfRange) {
  const std::string path = TempPath("clip.wav");
  WriteWav(path, {{2.0, -3.0, 0.5}}, 44100.0, WavFormat::kPcm16);
  const WavData d = ReadWav(path);
  EXPECT_NEAR(d.channels[0][0], 32767.0 / 32768.0, 1e-12);
  EXPECT_NEAR(d.channels[0][1], -32767.0 / 32768.0, 1e-12);
  std::remove(path.c_str());
}

TEST(WavTest, Errors) {
  EXPECT_THROW(ReadWav(TempPath("missing.wav")), Error);
  const std::string junk = TempPath("junk.wav");
  {
    std::ofstream f(junk, std::ios::binary);
    f << "RIFF1234WAVEnot really";
  }
  EXPECT_THROW(ReadWav(junk), Error);
  std::remove(junk.c_str());
  EXPECT_THROW(WriteWav(TempPath("x.wav"), {}, 44100.0), Error);
  EXPECT_THROW(WriteWav(TempPath("x.wav"), {{0.0}, {0.0, 1.0}}, 44100.0), Error);
  EXPECT_THROW(ParseWavFormat("mp3"), Error);
  EXPECT_EQ(ParseWavFormat("pcm24"), WavFormat::kPcm24);
}

}  // namespace
}  // namespace alodsim
