#include "toolbench/signal.hpp"
#include "toolbench/types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace toolbench;

namespace {

// O(N^2) reference DFT; returns the two-sided power per bin normalized by N^2.
std::vector<double> naive_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k % n) / static_cast<double>(n));
    p[k] = std::norm(acc) / static_cast<double>(n * n);
  }
  return p;
}

double naive_band(const std::vector<double>& x, double dt, double f_low, bool above) {
  const auto p = naive_power(x);
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double f = static_cast<double>(std::min(k, n - k)) / (static_cast<double>(n) * dt);
    if ((f > f_low) == above) sum += p[k];
  }
  return sum;
}

std::vector<double> sine(double hz, std::size_t n, double dt, double offset = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = offset + std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) * dt);
  return x;
}

}  // namespace

TEST(Smooth, ConstantSeriesIsFixed) {
  const std::vector<double> x(300, 3.7);
  for (int w : {1, 2, 7, 50}) {
    const auto y = smooth_arma(x, w);
    ASSERT_EQ(y.size(), x.size());
    for (double v : y) EXPECT_NEAR(v, 3.7, 1e-12);
  }
}

TEST(Smooth, ImpulsePlateauIsOneOverWindow) {
  std::vector<double> x(400, 0.0);
  x[200] = 1.0;
  const auto y = smooth_arma(x, 50);
  // Interior window [i-25, i+24] covers index 200 for i in [176, 225].
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i >= 176 && i <= 225) {
      EXPECT_NEAR(y[i], 1.0 / 50.0, 1e-12) << i;
    } else {
      EXPECT_EQ(y[i], 0.0) << i;
    }
  }
}

TEST(Smooth, WindowOneIsIdentityAndZeroIsRejected) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(100);
  for (double& v : x) v = g(rng);
  EXPECT_EQ(smooth_arma(x, 1), x);
  EXPECT_THROW(smooth_arma(x, 0), InvalidInput);
  EXPECT_THROW(smooth_arma(std::vector<double>{}, 5), InvalidInput);
}

TEST(Smooth, OutputStaysWithinInputRange) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 9.0);
  std::vector<double> x(500);
  for (double& v : x) v = u(rng);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  for (double v : smooth_arma(x, 50)) {
    EXPECT_GE(v, *lo - 1e-12);
    EXPECT_LE(v, *hi + 1e-12);
  }
}

TEST(BandEnergy, ConstantHasNone) {
  EXPECT_EQ(band_energy(std::vector<double>(256, 5.0), 1e-3, 10.0), 0.0);
  EXPECT_EQ(ac_energy(std::vector<double>(256, 5.0)), 0.0);
}

TEST(BandEnergy, TwentyHertzIsAllHighBand) {
  const auto x = sine(20.0, 2000, 1e-3, 0.3);
  const double total = ac_energy(x);
  EXPECT_NEAR(band_energy(x, 1e-3, 10.0), total, 0.01 * total);
}

TEST(BandEnergy, TwoHertzIsAlmostNone) {
  const auto x = sine(2.0, 2000, 1e-3);
  EXPECT_LE(band_energy(x, 1e-3, 10.0), 0.01 * ac_energy(x));
}

TEST(BandEnergy, MatchesNaiveDftAndParseval) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (std::size_t n : {64u, 255u, 512u}) {
    std::vector<double> x(n);
    for (double& v : x) v = g(rng) + 2.0;
    for (double f_low : {3.0, 10.0, 123.4}) {
      const double high = band_energy(x, 1e-3, f_low);
      const double low = naive_band(x, 1e-3, f_low, false);
      const double total = ac_energy(x);
      EXPECT_NEAR(high, naive_band(x, 1e-3, f_low, true), 1e-9 * total);
      EXPECT_NEAR(high + low, total, 1e-9 * total) << "n=" << n << " f_low=" << f_low;
    }
  }
}

TEST(BandEnergy, RejectsBadArguments) {
  const std::vector<double> x(64, 1.0);
  EXPECT_THROW(band_energy(std::vector<double>(4, 1.0), 1e-3, 10.0), InvalidInput);
  EXPECT_THROW(band_energy(x, 0.0, 10.0), InvalidInput);
  EXPECT_THROW(band_energy(x, 1e-3, 600.0), InvalidInput);
  EXPECT_THROW(band_energy(x, 1e-3, 0.0), InvalidInput);
}

TEST(HannTaper, RemovesMeanKeepsPowerAndSuppressesLeakage) {
  // A 2.5 Hz tone over a non-integer number of periods leaks into the high
  // band through the segment edges; the taper removes most of that.
  const auto x = sine(2.5, 1300, 1e-3, 4.0);
  const auto y = hann_taper(x);
  ASSERT_EQ(y.size(), x.size());
  EXPECT_EQ(y.front(), 0.0);
  EXPECT_NEAR(ac_energy(y), ac_energy(x), 0.05 * ac_energy(x));
  EXPECT_LT(band_energy(y, 1e-3, 10.0), 0.1 * band_energy(x, 1e-3, 10.0));
  EXPECT_THROW(hann_taper(std::vector<double>{1.0}), InvalidInput);
}
