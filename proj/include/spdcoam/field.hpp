#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "spdcoam/grid.hpp"

namespace spdcoam {

// h(k) on k_j = j dk, j = 0..count-1.
struct RadialSpectrum {
  std::vector<cplx> samples;
  double dk = 0.0;

  double k_max() const { return samples.empty() ? 0.0 : (samples.size() - 1) * dk; }
  double k(std::size_t j) const { return j * dk; }
  void validate() const;

  // Samples f on [0, k_max] where k_max is the smallest node at which |f|
  // has fallen below rel_cutoff of its peak for good (scanned on a fine grid up to k_limit).
  static RadialSpectrum sample(const std::function<cplx(double)>& f, int count, double k_limit,
                               double rel_cutoff = 1e-6);
  static RadialSpectrum on_range(const std::function<cplx(double)>& f, int count, double k_max);
};

// Trapezoid weights w_j for integrals over [0, k_max] on the spectrum nodes.
std::vector<double> trapezoid_weights(std::size_t count, double dk);

// phi_1^m(rho) = int d^2k h(k) e^{i m phi_k} e^{i k.(rho - rho0)}
//             = 2 pi i^m e^{i m theta} int h(k) J_m(k |rho - rho0|) k dk,
// evaluated on every sample of the grid spec (rho0 = spec.center).
ComplexGrid one_photon_amplitude(const RadialSpectrum& h, int m, const GridSpec& spec);

// Sum over channels of one_photon_amplitude, sharing the Bessel tables.
ComplexGrid sum_one_photon_amplitudes(const std::vector<std::pair<int, RadialSpectrum>>& channels,
                                      const GridSpec& spec);

// Point evaluation of the same integral at an arbitrary offset from rho0.
cplx one_photon_amplitude_at(const RadialSpectrum& h, int m, double dx, double dy);

// output(rho) = input(R(-dphi) rho) about the grid center.
ComplexGrid rotate_field(const ComplexGrid& field, double dphi);

// e^{i n theta} about the grid center for an offset (dx, dy), built as n-fold
// products of the unit phasor so that repeated integer charges compose exactly.
// At the center itself the phasor is taken as 1.
cplx unit_phasor_power(double dx, double dy, int n);

}  // namespace spdcoam
