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


#include "alodsim/dsp.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace alodsim {
namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

class RealFftPlan {
 public:
  explicit RealFftPlan(std::size_t n)
      : n_(n),
        time_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        freq_(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), time_.get(),
                                    freq_.get(), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq_.get(),
                                    time_.get(), FFTW_ESTIMATE);
  }
  ~RealFftPlan() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RealFftPlan(const RealFftPlan&) = delete;
  RealFftPlan& operator=(const RealFftPlan&) = delete;

  std::vector<Complex> Forward(std::span<const double> x) {
    const std::size_t m = std::min(x.size(), n_);
    std::copy_n(x.begin(), m, time_.get());
    std::fill(time_.get() + m, time_.get() + n_, 0.0);
    fftw_execute(forward_);
    std::vector<Complex> out(n_ / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = {freq_.get()[k][0], freq_.get()[k][1]};
    }
    return out;
  }

  std::vector<double> Inverse(std::span<const Complex> spectrum) {
    const std::size_t bins = n_ / 2 + 1;
    for (std::size_t k = 0; k < bins; ++k) {
      const Complex v = k < spectrum.size() ? spectrum[k] : Complex{};
      freq_.get()[k][0] = v.real();
      freq_.get()[k][1] = v.imag();
    }
    fftw_execute(inverse_);
    std::vector<double> out(time_.get(), time_.get() + n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
    return out;
  }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwDeleter> time_;
  std::unique_ptr<fftw_complex, FftwDeleter> freq_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

double RaisedCosineStep(double x) {
  // 0 for x <= -0.5, 1 for x >= 0.5 (x in octaves).
  if (x <= -0.5) return 0.0;
  if (x >= 0.5) return 1.0;
  return 0.5 - 0.5 * std::cos(kPi * (x + 0.5));
}

double LowerEdge(std::size_t band) {
  return kBandCenters[band] / std::sqrt(2.0);
}

std::size_t ZeroPhaseFftSize(std::size_t length) {
  return NextPow2(length + 8192);
}

}  // namespace

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<Complex> Rfft(std::span<const double> x, std::size_t n) {
  RealFftPlan plan(n);
  return plan.Forward(x);
}

std::vector<double> Irfft(std::span<const Complex> spectrum, std::size_t n) {
  RealFftPlan plan(n);
  return plan.Inverse(spectrum);
}

std::vector<double> Convolve(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  // Overlap-add: the shorter input is the kernel, the longer one is cut into
  // blocks.
  std::span<const double> signal = a.size() >= b.size() ? a : b;
  std::span<const double> kernel = a.size() >= b.size() ? b : a;
  const std::size_t out_len = signal.size() + kernel.size() - 1;
  const std::size_t block = std::max<std::size_t>(kernel.size(), 4096);
  const std::size_t n = NextPow2(block + kernel.size() - 1);
  RealFftPlan plan(n);
  const std::vector<Complex> kernel_spec = plan.Forward(kernel);
  std::vector<double> out(out_len, 0.0);
  std::vector<Complex> prod(kernel_spec.size());
  for (std::size_t start = 0; start < signal.size(); start += block) {
    const std::size_t len = std::min(block, signal.size() - start);
    const std::vector<Complex> spec = plan.Forward(signal.subspan(start, len));
    for (std::size_t k = 0; k < prod.size(); ++k) {
      prod[k] = spec[k] * kernel_spec[k];
    }
    const std::vector<double> y = plan.Inverse(prod);
    const std::size_t valid = std::min(len + kernel.size() - 1, out_len - start);
    for (std::size_t i = 0; i < valid; ++i) out[start + i] += y[i];
  }
  return out;
}

std::vector<double> RealCepstrum(std::span<const double> x, std::size_t n) {
  RealFftPlan plan(n);
  const std::vector<Complex> spec = plan.Forward(x);
  double peak = 0.0;
  for (const Complex& c : spec) peak = std::max(peak, std::abs(c));
  std::vector<Complex> log_mag(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    log_mag[k] = std::log(std::max(std::abs(spec[k]), peak * 1e-12));
  }
  return plan.Inverse(log_mag);
}

std::vector<double> MinimumPhase(std::span<const double> magnitude,
                                 std::size_t n, double floor_rel) {
  RealFftPlan plan(n);
  double peak = 0.0;
  for (double m : magnitude) peak = std::max(peak, m);
  const double floor = peak > 0.0 ? peak * floor_rel : 1e-300;
  std::vector<Complex> log_mag(n / 2 + 1);
  for (std::size_t k = 0; k < log_mag.size(); ++k) {
    const double m = k < magnitude.size() ? magnitude[k] : 0.0;
    log_mag[k] = std::log(std::max(m, floor));
  }
  std::vector<double> cep = plan.Inverse(log_mag);
  // Fold the cepstrum onto positive quefrencies.
  for (std::size_t i = 1; i < n / 2; ++i) {
    cep[i] *= 2.0;
    cep[n - i] = 0.0;
  }
  const std::vector<Complex> folded = plan.Forward(cep);
  std::vector<Complex> spec(folded.size());
  for (std::size_t k = 0; k < folded.size(); ++k) spec[k] = std::exp(folded[k]);
  return plan.Inverse(spec);
}

std::vector<double> HilbertEnvelope(std::span<const double> x) {
  const std::size_t n = NextPow2(2 * x.size());
  // Analytic signal via a full complex FFT.
  std::unique_ptr<fftw_complex, FftwDeleter> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
  fftw_plan fwd;
  fftw_plan inv;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                           FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                           FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf.get()[i][0] = i < x.size() ? x[i] : 0.0;
    buf.get()[i][1] = 0.0;
  }
  fftw_execute(fwd);
  for (std::size_t k = 1; k < n / 2; ++k) {
    buf.get()[k][0] *= 2.0;
    buf.get()[k][1] *= 2.0;
  }
  for (std::size_t k = n / 2 + 1; k < n; ++k) {
    buf.get()[k][0] = 0.0;
    buf.get()[k][1] = 0.0;
  }
  fftw_execute(inv);
  std::vector<double> env(x.size());
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    env[i] = std::hypot(buf.get()[i][0], buf.get()[i][1]) * scale;
  }
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  return env;
}

double OctaveBandWeight(std::size_t band, double frequency_hz) {
  if (frequency_hz <= 0.0) return band == 0 ? 1.0 : 0.0;
  const double rise =
      band == 0 ? 1.0
                : RaisedCosineStep(std::log2(frequency_hz / LowerEdge(band)));
  const double fall =
      band + 1 == kNumBands
          ? 0.0
          : RaisedCosineStep(std::log2(frequency_hz / LowerEdge(band + 1)));
  return rise - fall;
}

std::vector<double> SumBandFiltered(
    std::span<const std::vector<double>> bands, double sample_rate) {
  if (bands.empty()) return {};
  const std::size_t length = bands.front().size();
  if (length == 0) return {};
  const std::size_t n = ZeroPhaseFftSize(length);
  RealFftPlan plan(n);
  std::vector<Complex> acc(n / 2 + 1, Complex{});
  for (std::size_t b = 0; b < bands.size() && b < kNumBands; ++b) {
    bool any = false;
    for (double v : bands[b]) {
      if (v != 0.0) {
        any = true;
        break;
      }
    }
    if (!any) continue;
    const std::vector<Complex> spec = plan.Forward(bands[b]);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(n);
      acc[k] += OctaveBandWeight(b, f) * spec[k];
    }
  }
  std::vector<double> out = plan.Inverse(acc);
  out.resize(length);
  return out;
}

std::vector<double> OctaveBandFilter(std::span<const double> x,
                                     std::size_t band, double sample_rate) {
  if (x.empty()) return {};
  const std::size_t n = ZeroPhaseFftSize(x.size());
  RealFftPlan plan(n);
  std::vector<Complex> spec = plan.Forward(x);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    spec[k] *= OctaveBandWeight(
        band, static_cast<double>(k) * sample_rate / static_cast<double>(n));
  }
  std::vector<double> out = plan.Inverse(spec);
  out.resize(x.size());
  return out;
}

}  // namespace alodsim
