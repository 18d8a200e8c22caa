#include "toolbench/signal.hpp"

#include "toolbench/types.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace toolbench {

namespace {
// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> smooth_arma(std::span<const double> series, int window) {
  if (window < 1) throw InvalidInput("smooth_arma: window must be >= 1");
  if (series.empty()) throw InvalidInput("smooth_arma: empty series");
  const long n = static_cast<long>(series.size());
  const long left = window / 2;
  const long right = window - 1 - left;

  std::vector<double> out(series.size());
  for (long i = 0; i < n; ++i) {
    long lo = i - left;
    long hi = i + right;
    if (lo < 0 || hi > n - 1) {
      const long k = std::min({left, i, n - 1 - i});
      lo = i - k;
      hi = i + k;
    }
    double sum = 0.0;
    for (long j = lo; j <= hi; ++j) sum += series[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double band_energy(std::span<const double> series, double dt, double f_low) {
  const std::size_t n = series.size();
  if (n < 8) throw InvalidInput("band_energy: series needs at least 8 samples");
  if (!(dt > 0.0)) throw InvalidInput("band_energy: dt must be > 0");
  const double nyquist = 0.5 / dt;
  if (!(f_low > 0.0) || f_low >= nyquist) throw InvalidInput("band_energy: f_low must lie in (0, Nyquist)");

  const std::size_t half = n / 2 + 1;
  std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(n), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(fftw_alloc_complex(half), &fftw_free);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(series.begin(), series.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double nd = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t k = 1; k < half; ++k) {
    const double freq = static_cast<double>(k) / (nd * dt);
    if (!(freq > f_low)) continue;
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    // Bins k and n-k carry the same power; the Nyquist bin (even n) appears once.
    const double weight = (n % 2 == 0 && k == n / 2) ? 1.0 : 2.0;
    sum += weight * (re * re + im * im);
  }
  return sum / (nd * nd);
}

std::vector<double> hann_taper(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) throw InvalidInput("hann_taper: series needs at least 2 samples");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);

  std::vector<double> w(n);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    sq += w[i] * w[i];
  }
  const double scale = 1.0 / std::sqrt(sq / static_cast<double>(n));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (series[i] - mean) * w[i] * scale;
  return out;
}

double ac_energy(std::span<const double> series) {
  if (series.empty()) return 0.0;
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(series.size());
  double acc = 0.0;
  for (double x : series) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(series.size());
}

}  // namespace toolbench
