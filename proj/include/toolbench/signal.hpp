#pragma once

#include <span>
#include <vector>

namespace toolbench {

/// Centered moving average (the pure-MA case of an ARMA smoother).
/// Interior windows span [i - w/2, i + w - 1 - w/2]; near the ends the window
/// shrinks symmetrically about i. Output length equals input length.
std::vector<double> smooth_arma(std::span<const double> series, int window);

/// Mean-square power of the DFT components with |f| > f_low (two-sided,
/// normalized by N^2 so that the full AC band equals the population variance).
double band_energy(std::span<const double> series, double dt, double f_low);

/// Mean-removed copy multiplied by a Hann window scaled to unit RMS, so a
/// stationary signal keeps its power while the segment ends stop leaking
/// broadband energy into every bin.
std::vector<double> hann_taper(std::span<const double> series);

/// Population variance: total AC energy in the band_energy normalization.
double ac_energy(std::span<const double> series);

}  // namespace toolbench
