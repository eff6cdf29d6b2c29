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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "alodsim/common.h"

namespace alodsim {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

[[noreturn]] void Bad(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::kIo, path + ": " + what);
}

std::uint32_t U32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t U16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void Put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}
void Put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

WavFormat ParseWavFormat(const std::string& name) {
  if (name == "pcm16") return WavFormat::kPcm16;
  if (name == "pcm24") return WavFormat::kPcm24;
  if (name == "float32") return WavFormat::kFloat32;
  throw Error(ErrorKind::kUnknownName, "unknown wav format '" + name + "'");
}

WavData ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Bad(path, "cannot open");
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    Bad(path, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const unsigned char* chunk = buf.data() + pos;
    const std::uint32_t size = U32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > buf.size()) {
      if (std::memcmp(chunk, "data", 4) == 0) {
        data = buf.data() + body;  // tolerate truncated streaming headers
        data_size = buf.size() - body;
        break;
      }
      Bad(path, "chunk exceeds file size");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) Bad(path, "short fmt chunk");
      format = U16(chunk + 8);
      channels = U16(chunk + 10);
      rate = U32(chunk + 12);
      bits = U16(chunk + 22);
      if (format == kFormatExtensible && size >= 40) format = U16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = buf.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0) Bad(path, "missing fmt chunk");
  if (data == nullptr) Bad(path, "missing data chunk");

  WavData out;
  out.sample_rate = rate;
  std::size_t width = 0;
  if (format == kFormatPcm && bits == 16) {
    out.format = WavFormat::kPcm16;
    width = 2;
  } else if (format == kFormatPcm && bits == 24) {
    out.format = WavFormat::kPcm24;
    width = 3;
  } else if (format == kFormatFloat && bits == 32) {
    out.format = WavFormat::kFloat32;
    width = 4;
  } else {
    Bad(path, "unsupported sample format");
  }
  const std::size_t frames = data_size / (width * channels);
  out.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (f * channels + c) * width;
      double v = 0.0;
      switch (out.format) {
        case WavFormat::kPcm16:
          v = static_cast<std::int16_t>(U16(p)) / 32768.0;
          break;
        case WavFormat::kPcm24: {
          std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
          if (s & 0x800000) s -= 0x1000000;
          v = s / 8388608.0;
          break;
        }
        case WavFormat::kFloat32: {
          const std::uint32_t bitsv = U32(p);
          float fv;
          std::memcpy(&fv, &bitsv, 4);
          v = fv;
          break;
        }
      }
      out.channels[c][f] = v;
    }
  }
  return out;
}

void WriteWav(const std::string& path,
              const std::vector<std::vector<double>>& channels,
              double sample_rate, WavFormat format) {
  if (channels.empty()) throw Error(ErrorKind::kInvalidArgument, "no channels to write");
  const std::size_t frames = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != frames) {
      throw Error(ErrorKind::kInvalidArgument, "channel lengths differ");
    }
  }
  const std::uint16_t nch = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t width =
      format == WavFormat::kPcm16 ? 2 : (format == WavFormat::kPcm24 ? 3 : 4);
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(sample_rate));
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * nch * width);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  Put32(out, 36 + data_size + (data_size & 1));
  out += "WAVEfmt ";
  Put32(out, 16);
  Put16(out, format == WavFormat::kFloat32 ? kFormatFloat : kFormatPcm);
  Put16(out, nch);
  Put32(out, rate);
  Put32(out, rate * nch * width);
  Put16(out, static_cast<std::uint16_t>(nch * width));
  Put16(out, static_cast<std::uint16_t>(8 * width));
  out += "data";
  Put32(out, data_size);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < nch; ++c) {
      const double v = channels[c][f];
      switch (format) {
        case WavFormat::kPcm16: {
          const long s = std::lround(std::clamp(v, -1.0, 1.0) * 32767.0);
          Put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
          break;
        }
        case WavFormat::kPcm24: {
          const long s = std::lround(std::clamp(v, -1.0, 1.0) * 8388607.0);
          const auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(s));
          for (int i = 0; i < 3; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
          break;
        }
        case WavFormat::kFloat32: {
          const float fv = static_cast<float>(v);
          std::uint32_t u;
          std::memcpy(&u, &fv, 4);
          Put32(out, u);
          break;
        }
      }
    }
  }
  if (data_size & 1) out.push_back('\0');
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::kIo, path + ": cannot open for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorKind::kIo, path + ": write failed");
}

}  // namespace alodsim
