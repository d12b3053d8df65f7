#pragma once

#include <map>
#include <string>
#include <vector>

#include "spdcoam/grid.hpp"

namespace spdcoam {

constexpr int kDefaultAngularSamples = 256;

// Field on a polar lattice about the grid center: r_j = j dr, phi_k = 2 pi k / n_phi.
struct PolarSamples {
  double dr = 0.0;
  int n_r = 0;
  int n_phi = 0;
  std::vector<cplx> values;  // [j * n_phi + k]

  double radius(int j) const { return j * dr; }
  const cplx& at(int j, int k) const { return values[static_cast<std::size_t>(j) * n_phi + k]; }
  // sum_j r_j dr (2 pi / n_phi) sum_k |f|^2
  double power() const;
};

// dr = min(dx, dy); radii run to the inscribed radius less a 4-sample margin.
PolarSamples polar_resample(const ComplexGrid& field, int n_phi = kDefaultAngularSamples);

struct AzimuthalSpectrum {
  int max_m = 0;
  int n_phi = 0;
  double dr = 0.0;
  std::map<int, std::vector<cplx>> harmonics;  // m -> c_m(r_j)
  std::map<int, double> power_fraction;
  double harmonic_power = 0.0;  // sum over |m| <= M of channel power
  double sampled_power = 0.0;   // power of the polar samples themselves

  double fraction(int m) const;
  // Channel with the largest fraction (lowest |m|, then lowest m, on ties).
  int dominant() const;
};

// c_m(r_j) = (1/N) sum_k f(r_j, phi_k) e^{-i m phi_k}, m in [-M, M].
AzimuthalSpectrum azimuthal_spectrum(const PolarSamples& polar, int max_m);
AzimuthalSpectrum azimuthal_spectrum(const ComplexGrid& field, int max_m, int n_phi = kDefaultAngularSamples);

// sum_m c_m(r_j) e^{i m phi_k} on the polar lattice the spectrum came from.
PolarSamples reconstruct(const AzimuthalSpectrum& spectrum);

// Per-bin std(|f|)/mean(|f|) over phi (population std), averaged with weights
// r_j * mean(|f|^2) over bins whose mean |f| exceeds 1% of the global peak.
double asymmetry_metric(const PolarSamples& polar);
double asymmetry_metric(const ComplexGrid& field, int n_phi = kDefaultAngularSamples);

// CSV: m,radial_bin_index,re,im  /  m,power_fraction
std::string spectrum_harmonics_csv(const AzimuthalSpectrum& spectrum);
std::string spectrum_summary_csv(const AzimuthalSpectrum& spectrum);

}  // namespace spdcoam
