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


// alodsim command-line front end.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "alodsim/analysis.h"
#include "alodsim/pipeline.h"
#include "alodsim/postproc.h"
#include "alodsim/scene.h"
#include "alodsim/scene_io.h"
#include "alodsim/stimuli.h"
#include "alodsim/wav.h"

#ifndef ALODSIM_VERSION
#define ALODSIM_VERSION "0.0.0"
#endif

namespace alodsim {
namespace {

using Json = nlohmann::ordered_json;

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

// FNV-1a, 64 bit.
std::string HashHex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// RFC 4180 field quoting.
std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) { Row(header); }
  void Row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text_ += ',';
      text_ += CsvField(fields[i]);
    }
    text_ += "\r\n";
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string Stem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

ImpulseResponse LoadIr(const std::string& path) {
  WavData w = ReadWav(path);
  if (w.channels.empty() || w.channels.front().empty()) {
    throw Error(ErrorKind::kValidation, "'" + path + "' contains no samples");
  }
  ImpulseResponse ir;
  ir.channels = std::move(w.channels);
  ir.sample_rate = w.sample_rate;
  ir.semantics = ir.channels.size() == 2 ? ChannelSemantics::kBinauralLR
                 : ir.channels.size() == 1 ? ChannelSemantics::kMono
                                           : ChannelSemantics::kArrayIndexed;
  return ir;
}

RenderingProfile LoadProfile(const std::string& name_or_path,
                             const SceneSpec& scene) {
  if (name_or_path.empty()) {
    return scene.profile ? *scene.profile : ProfilePreset("razr-full");
  }
  if (name_or_path.size() > 5 &&
      name_or_path.compare(name_or_path.size() - 5, 5, ".json") == 0) {
    return ParseProfileJson(ReadText(name_or_path));
  }
  return ProfilePreset(name_or_path);
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string scene_file;
  std::string preset;
  std::string profile;
  std::uint64_t seed = 0;
  std::string output_mode;
  std::string hrtf;
  std::string layout;
  std::string out = "ir.wav";
  std::string manifest;
  std::string source;
  std::string receiver;
  double duration = 0.0;
  std::string format = "float32";
  std::string match_ref;
};

void RunSimulate(const SimulateArgs& a) {
  if (a.scene_file.empty() == a.preset.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "give exactly one of --scene or --preset");
  }
  const SceneSpec scene = a.preset.empty() ? LoadSceneFile(a.scene_file) : Preset(a.preset);
  const RenderingProfile profile = LoadProfile(a.profile, scene);
  SimulationOptions opt;
  opt.source_id = a.source;
  opt.receiver_id = a.receiver;
  opt.duration = a.duration;
  if (!a.output_mode.empty()) opt.output_mode = ParseOutputMode(a.output_mode);
  if (!a.hrtf.empty()) {
    opt.hrtf = std::make_shared<const HrtfSet>(LoadHrtfDirectory(a.hrtf, scene.sample_rate));
  }
  if (!a.layout.empty()) {
    opt.layout = std::make_shared<const LoudspeakerLayout>(LoadLayout(a.layout));
  }
  ImpulseResponse ir = Simulate(scene, profile, a.seed, opt);

  Json metrics = Json::object();
  if (!a.match_ref.empty()) {
    const SpectralMatchResult m = MatchSpectrum(ir, LoadIr(a.match_ref));
    ir = m.corrected;
    metrics["match_residual_mean_db"] = m.report.residual_mean_db;
    metrics["match_residual_rms_db"] = m.report.residual_rms_db;
  }
  const WavFormat format = ParseWavFormat(a.format);
  WriteWav(a.out, ir.channels, ir.sample_rate, format);

  metrics["channels"] = ir.num_channels();
  metrics["length_samples"] = ir.length();
  try {
    metrics["t30_s"] = T30(SchroederEdcFromEnergy(ChannelEnergy(ir), ir.sample_rate));
  } catch (const Error&) {
    metrics["t30_s"] = nullptr;
  }
  const std::string scene_json = SerializeScene(scene);
  Json manifest;
  manifest["tool"] = "alodsim";
  manifest["version"] = ALODSIM_VERSION;
  manifest["scene"] = scene.name;
  manifest["scene_hash"] = HashHex(scene_json);
  manifest["profile"] = profile.name;
  manifest["profile_hash"] = HashHex(SerializeProfile(profile));
  manifest["seed"] = a.seed;
  manifest["output_mode"] =
      std::string(OutputModeName(opt.output_mode.value_or(profile.output_mode)));
  manifest["source"] = a.source.empty() ? scene.sources.front().id : a.source;
  manifest["receiver"] = a.receiver.empty() ? scene.receivers.front().id : a.receiver;
  manifest["sample_rate"] = ir.sample_rate;
  manifest["format"] = a.format;
  manifest["outputs"] = Json::array({a.out});
  manifest["metrics"] = metrics;
  const std::string path = a.manifest.empty() ? Stem(a.out) + ".manifest.json" : a.manifest;
  WriteText(path, manifest.dump(2) + "\n");
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string in;
  std::string metrics = "t30";
  std::string out;
};

void RunAnalyze(const AnalyzeArgs& a) {
  const ImpulseResponse ir = LoadIr(a.in);
  const double fs = ir.sample_rate;
  const std::vector<std::string> names = SplitList(a.metrics);
  if (names.empty()) throw Error(ErrorKind::kInvalidArgument, "no metrics requested");
  static const std::vector<std::string> kKnown = {
      "t30", "t30_bands", "edc", "ned", "drr", "first_arrival", "dual_slope"};
  for (const auto& n : names) {
    if (std::find(kKnown.begin(), kKnown.end(), n) == kKnown.end()) {
      throw Error(ErrorKind::kUnknownName, "unknown metric '" + n + "'");
    }
  }
  const std::string stem = a.out.empty() ? Stem(a.in) : Stem(a.out);
  CsvWriter scalars({"metric", "channel", "band_hz", "value"});
  bool any_scalar = false;
  auto curve = [&](const std::string& name, const std::vector<double>& times,
                   const std::vector<std::vector<double>>& cols) {
    std::vector<std::string> header = {"time_s"};
    for (std::size_t c = 0; c < cols.size(); ++c) header.push_back("ch" + std::to_string(c));
    CsvWriter w(header);
    for (std::size_t i = 0; i < times.size(); ++i) {
      std::vector<std::string> row = {FormatDouble(times[i])};
      for (const auto& col : cols) row.push_back(FormatDouble(col[i]));
      w.Row(row);
    }
    WriteText(stem + "_" + name + ".csv", w.text());
  };
  for (const auto& name : names) {
    if (name == "edc") {
      std::vector<std::vector<double>> cols;
      for (const auto& ch : ir.channels) cols.push_back(SchroederEdc(ch, fs).values);
      std::vector<double> t(ir.length());
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = i / fs;
      curve("edc", t, cols);
      continue;
    }
    if (name == "ned") {
      std::vector<std::vector<double>> cols;
      std::vector<double> t;
      for (const auto& ch : ir.channels) {
        NedProfile p = Ned(ch, fs);
        t = p.times;
        cols.push_back(std::move(p.values));
      }
      curve("ned", t, cols);
      continue;
    }
    any_scalar = true;
    for (std::size_t c = 0; c < ir.num_channels(); ++c) {
      const auto& ch = ir.channels[c];
      const std::string cs = std::to_string(c);
      if (name == "t30") {
        scalars.Row({name, cs, "", FormatDouble(T30(SchroederEdc(ch, fs)))});
      } else if (name == "t30_bands") {
        const BandArray b = T30Bands(ch, fs);
        for (std::size_t k = 0; k < kNumBands; ++k) {
          scalars.Row({name, cs, FormatDouble(kBandCenters[k]), FormatDouble(b[k])});
        }
      } else if (name == "drr") {
        scalars.Row({name, cs, "", FormatDouble(Drr(ch, fs))});
      } else if (name == "first_arrival") {
        scalars.Row({name, cs, "", FormatDouble(FirstArrival(ch) / fs)});
      } else if (name == "dual_slope") {
        const DualSlopeFit f = FitDualSlope(SchroederEdc(ch, fs));
        scalars.Row({"dual_slope_t60_1", cs, "", FormatDouble(-60.0 / f.slope1)});
        scalars.Row({"dual_slope_t60_2", cs, "", FormatDouble(-60.0 / f.slope2)});
        scalars.Row({"dual_slope_knee_db", cs, "", FormatDouble(f.knee_level)});
        scalars.Row({"dual_slope_knee_s", cs, "", FormatDouble(f.knee_time)});
      }
    }
  }
  if (!any_scalar) return;
  if (a.out.empty()) {
    std::cout << scalars.text();
  } else {
    WriteText(a.out, scalars.text());
  }
}

// ---- stimulus --------------------------------------------------------------

struct StimulusArgs {
  std::string kind;
  std::string out = "stimulus.wav";
  double sample_rate = kDefaultSampleRate;
  double duration = 0.0;
  std::string levels;
  bool random = false;
  std::uint64_t seed = 0;
  double f1 = 100.0;
  double f2 = 0.0;
  std::string format = "float32";
};

void RunStimulus(const StimulusArgs& a) {
  Stimulus s;
  if (a.kind == "pink-pulse") {
    s = PinkPulse(a.sample_rate, a.duration > 0.0 ? a.duration : 0.5);
  } else if (a.kind == "pink-pulse-variant") {
    BandLevels lv{};
    if (a.random) {
      CounterRng rng(a.seed);
      lv = RandomBandLevels(rng);
    } else {
      const auto items = SplitList(a.levels);
      if (items.size() != kNumStimulusBands) {
        throw Error(ErrorKind::kValidation, "--levels needs 10 comma-separated values");
      }
      for (std::size_t i = 0; i < items.size(); ++i) {
        try {
          lv[i] = std::stod(items[i]);
        } catch (const std::exception&) {
          throw Error(ErrorKind::kParse, "--levels: bad number '" + items[i] + "'");
        }
      }
    }
    s = PinkPulseVariant(lv, a.sample_rate, a.duration > 0.0 ? a.duration : 0.5);
  } else if (a.kind == "ess") {
    EssParams p;
    p.f1 = a.f1;
    p.f2 = a.f2 > 0.0 ? a.f2 : a.sample_rate / 2.0;
    p.duration = a.duration > 0.0 ? a.duration : 3.2;
    p.sample_rate = a.sample_rate;
    s = EssGenerate(p);
  } else {
    throw Error(ErrorKind::kUnknownName, "unknown stimulus kind '" + a.kind + "'");
  }
  WriteWav(a.out, {s.samples}, s.sample_rate, ParseWavFormat(a.format));
  Json info;
  info["kind"] = std::string(StimulusKindName(s.kind));
  info["samples"] = s.samples.size();
  info["sample_rate"] = s.sample_rate;
  if (s.kind == StimulusKind::kPinkPulse || s.kind == StimulusKind::kPinkPulseVariant) {
    info["ramp_rate_per_s"] = s.ramp_rate;
    info["envelope_db_at_36ms"] =
        EnvelopeDb(s.samples, s.sample_rate)[static_cast<std::size_t>(std::lround(0.036 * s.sample_rate))];
  }
  if (s.kind == StimulusKind::kPinkPulseVariant) {
    info["levels_db"] = std::vector<double>(s.levels.begin(), s.levels.end());
  }
  std::cout << info.dump() << "\n";
}

// ---- render / match / deconvolve --------------------------------------------

void RunRender(const std::string& ir_path, const std::string& stim_path,
               const std::string& out, const std::string& format) {
  const ImpulseResponse ir = LoadIr(ir_path);
  WavData sw = ReadWav(stim_path);
  if (sw.channels.size() != 1) {
    throw Error(ErrorKind::kValidation, "stimulus must be a mono WAV");
  }
  Stimulus s;
  s.samples = std::move(sw.channels.front());
  s.sample_rate = sw.sample_rate;
  const ImpulseResponse y = ConvolveStimulus(s, ir);
  WriteWav(out, y.channels, y.sample_rate, ParseWavFormat(format));
}

void RunMatch(const std::string& sim, const std::string& ref,
              const std::string& out, const std::string& format,
              double lo, double hi) {
  SpectralMatchOptions opt;
  opt.lo_hz = lo;
  opt.hi_hz = hi;
  const SpectralMatchResult m = MatchSpectrum(LoadIr(sim), LoadIr(ref), opt);
  WriteWav(out, m.corrected.channels, m.corrected.sample_rate, ParseWavFormat(format));
  Json r;
  r["residual_mean_db"] = m.report.residual_mean_db;
  r["residual_rms_db"] = m.report.residual_rms_db;
  r["residual_max_db"] = m.report.residual_max_db;
  r["residual_before_db"] = m.report.residual_before_db;
  r["band_hz"] = {m.report.band_range.first, m.report.band_range.second};
  r["filter_taps"] = m.filter.size();
  r["clamped"] = m.report.clamped;
  WriteText(Stem(out) + ".report.json", r.dump(2) + "\n");
  std::cout << r.dump() << "\n";
}

void RunDeconvolve(const std::string& rec, const std::string& out, double f1,
                   double f2, double duration, const std::string& format) {
  const ImpulseResponse r = LoadIr(rec);
  EssParams p;
  p.f1 = f1;
  p.f2 = f2 > 0.0 ? f2 : r.sample_rate / 2.0;
  p.duration = duration;
  p.sample_rate = r.sample_rate;
  const Stimulus sweep = EssGenerate(p);
  const ImpulseResponse h = EssDeconvolve(r, sweep, p);
  WriteWav(out, h.channels, h.sample_rate, ParseWavFormat(format));
}

void RunPresets(const std::string& dump) {
  if (!dump.empty()) {
    std::cout << SerializeScene(Preset(dump)) << "\n";
    return;
  }
  Json j;
  j["scenes"] = PresetNames();
  j["profiles"] = ProfileNames();
  std::cout << j.dump(2) << "\n";
}

std::string OneLine(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace
}  // namespace alodsim

int main(int argc, char** argv) {
  using namespace alodsim;
  CLI::App app{"alodsim: room acoustics simulation and auralization"};
  app.set_version_flag("--version", ALODSIM_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "simulate an impulse response");
  c_sim->add_option("--scene", sim.scene_file, "scene JSON file");
  c_sim->add_option("--preset", sim.preset, "built-in scene name");
  c_sim->add_option("--profile", sim.profile, "profile name or JSON file");
  c_sim->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  c_sim->add_option("--output-mode,--output", sim.output_mode,
                    "binaural|array|diotic|mono");
  c_sim->add_option("--hrtf", sim.hrtf, "HRTF directory");
  c_sim->add_option("--layout", sim.layout, "layout file or 86-preset");
  c_sim->add_option("--out", sim.out, "output WAV")->capture_default_str();
  c_sim->add_option("--manifest", sim.manifest, "manifest path");
  c_sim->add_option("--source", sim.source, "source id");
  c_sim->add_option("--receiver", sim.receiver, "receiver id");
  c_sim->add_option("--duration", sim.duration, "seconds (0 = automatic)");
  c_sim->add_option("--format", sim.format, "pcm16|pcm24|float32")->capture_default_str();
  c_sim->add_option("--match-ref", sim.match_ref, "reference WAV for spectral matching");

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "compute metrics of an IR");
  c_an->add_option("in,--in", an.in, "IR WAV")->required();
  c_an->add_option("--metrics", an.metrics,
                   "t30,t30_bands,edc,ned,drr,first_arrival,dual_slope")
      ->capture_default_str();
  c_an->add_option("--out", an.out, "scalar CSV (default stdout)");

  StimulusArgs st;
  auto* c_st = app.add_subcommand("stimulus", "generate a test stimulus");
  c_st->add_option("kind", st.kind, "pink-pulse|pink-pulse-variant|ess")->required();
  c_st->add_option("--out", st.out)->capture_default_str();
  c_st->add_option("--sample-rate", st.sample_rate)->capture_default_str();
  c_st->add_option("--duration", st.duration, "seconds");
  c_st->add_option("--levels", st.levels, "10 offsets in dB (-6, 0, 6)");
  c_st->add_flag("--random", st.random, "draw random band levels");
  c_st->add_option("--seed", st.seed)->capture_default_str();
  c_st->add_option("--f1", st.f1)->capture_default_str();
  c_st->add_option("--f2", st.f2, "default fs/2");
  c_st->add_option("--format", st.format)->capture_default_str();

  std::string r_ir, r_stim, r_out = "render.wav", r_format = "float32";
  auto* c_r = app.add_subcommand("render", "convolve a stimulus with an IR");
  c_r->add_option("--ir", r_ir)->required();
  c_r->add_option("--stim", r_stim)->required();
  c_r->add_option("--out", r_out)->capture_default_str();
  c_r->add_option("--format", r_format)->capture_default_str();

  std::string m_sim, m_ref, m_out = "matched.wav", m_format = "float32";
  double m_lo = 100.0, m_hi = 16000.0;
  auto* c_m = app.add_subcommand("match", "spectrally match sim to ref");
  c_m->add_option("--sim", m_sim)->required();
  c_m->add_option("--ref", m_ref)->required();
  c_m->add_option("--out", m_out)->capture_default_str();
  c_m->add_option("--format", m_format)->capture_default_str();
  c_m->add_option("--lo", m_lo)->capture_default_str();
  c_m->add_option("--hi", m_hi)->capture_default_str();

  std::string d_rec, d_out = "deconvolved.wav", d_format = "float32";
  double d_f1 = 100.0, d_f2 = 0.0, d_dur = 3.2;
  auto* c_d = app.add_subcommand("deconvolve", "recover an IR from a sweep recording");
  c_d->add_option("--recording", d_rec)->required();
  c_d->add_option("--out", d_out)->capture_default_str();
  c_d->add_option("--f1", d_f1)->capture_default_str();
  c_d->add_option("--f2", d_f2, "default fs/2");
  c_d->add_option("--duration", d_dur)->capture_default_str();
  c_d->add_option("--format", d_format)->capture_default_str();

  std::string p_dump;
  auto* c_p = app.add_subcommand("presets", "list built-in scenes and profiles");
  c_p->add_option("--dump", p_dump, "print a scene as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error kind=usage message=\"" << OneLine(e.what()) << "\"\n";
    return 64;
  }

  try {
    if (*c_sim) RunSimulate(sim);
    if (*c_an) RunAnalyze(an);
    if (*c_st) RunStimulus(st);
    if (*c_r) RunRender(r_ir, r_stim, r_out, r_format);
    if (*c_m) RunMatch(m_sim, m_ref, m_out, m_format, m_lo, m_hi);
    if (*c_d) RunDeconvolve(d_rec, d_out, d_f1, d_f2, d_dur, d_format);
    if (*c_p) RunPresets(p_dump);
  } catch (const Error& e) {
    std::cerr << "error kind=" << ErrorKindName(e.kind()) << " message=\""
              << OneLine(e.what()) << "\"\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error kind=internal message=\"" << OneLine(e.what()) << "\"\n";
    return 3;
  }
  return 0;
}
