#pragma once

#include <complex>

namespace spdcoam {

struct PumpBeam {
  int l = 0;
  int p = 0;
  double w0 = 1.0;
  double k_p = 1.0;
  std::complex<double> amplitude{1.0, 0.0};

  // Derived, never stored independently: z_R = k_p w0^2 / 2.
  double rayleigh_length() const { return 0.5 * k_p * w0 * w0; }
  double waist_at(double z) const;
  void validate() const;
};

// Generalized Laguerre polynomial L_n^alpha(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);
double binomial(int n, int k);

// psi_lp(rho, phi, z) e^{i k_p z}; the e^{-i w_p t} factor is not included.
// Negative l uses |l| in the radial factors and e^{i l phi}.
std::complex<double> eval_lg_mode(const PumpBeam& pump, double rho, double phi, double z);

}  // namespace spdcoam
