#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spdcoam/grid.hpp"
#include "spdcoam/lg_mode.hpp"

namespace spdcoam {

// Dimensionless ring scale factors: k_rho,s(phi_s) = k0 * signal(phi_s),
// k_rho,i(phi_i) = k0 * idler(phi_i). Empty functions select the built-in
// first-harmonic law 1 +/- eps cos(phi).
struct RingLaw {
  std::function<double(double)> signal;
  std::function<double(double)> idler;
  bool custom() const { return static_cast<bool>(signal) || static_cast<bool>(idler); }
};

struct CrystalModel {
  double length = 1.0;  // L
  double z0 = 0.0;
  double k0 = 1.0;
  double epsilon = 0.0;
  cplx coupling{1.0, 0.0};
  RingLaw ring;

  double signal_scale(double phi) const;
  double idler_scale(double phi) const;
  void validate() const;
};

// exp[i dw (t - t_int/2)] sin(dw t_int/2)/(dw/2); exactly t_int at dw = 0.
cplx time_window(double d_omega, double t_int, double t);

// exp(-i dkz z0) sin(dkz L/2)/(dkz/2); exactly L at dkz = 0.
cplx phase_matching(double dkz, const CrystalModel& crystal);
// Same with the sinc replaced by exp(-0.193 (dkz L/2)^2), which matches the
// sinc's half-maximum width and decays fast enough to fix a radial cutoff.
cplx phase_matching_gaussian(double dkz, const CrystalModel& crystal);
constexpr double kSincGaussCoefficient = 0.193;

// Degenerate mismatch for transverse radii (ks, ki): (ks^2 + ki^2 - 2 k0^2)/k_p.
double longitudinal_mismatch(double ks, double ki, double k0, double k_p);

double rho_k(double ks, double ki, double phi_s, double phi_i);

// L_p^{|l|}(z_R rho^2/k_p) exp(-z_R rho^2/(2 k_p)) exp(-i z0 rho^2/(2 k_p))
cplx phi_lp_kernel(const PumpBeam& pump, const CrystalModel& crystal, double ks, double ki, double phi_s,
                   double phi_i);
cplx phi_lp_of_rho(const PumpBeam& pump, double z0, double rho);

std::pair<double, double> ring_radii(const CrystalModel& crystal, double phi_s, double phi_i);

// G^{m_s,m_i,n} on the uniform (phi_s, phi_i) lattice.
struct GTensor {
  int l = 0;
  int p = 0;
  int max_m = 0;
  int n_phi = 0;
  double epsilon = 0.0;
  double k0 = 0.0;
  double length = 0.0;
  double z0 = 0.0;
  double captured_power = 0.0;  // fraction of sampled-kernel power inside |m_s|,|m_i| <= M
  std::map<std::tuple<int, int, int>, cplx> coefficients;  // (n, m_s, m_i)

  cplx at(int n, int m_s, int m_i) const;
  double max_abs() const;
};

// Sampled kernel phi_lp k_s^n k_i^{|l|-n} on the lattice at radii scale*(k_s, k_i)
// given as functions of the angles. Stored [a * n_phi + b] for (phi_s_a, phi_i_b).
struct KernelSamples {
  int n_phi = 0;
  std::vector<cplx> values;
  const cplx& at(int a, int b) const { return values[static_cast<std::size_t>(a) * n_phi + b]; }
};

KernelSamples sample_kernel(const PumpBeam& pump, const CrystalModel& crystal, int n, int n_phi,
                            double kappa_s, double kappa_i);

// (1/N^2) sum K e^{+i(m_s phi_s - m_i phi_i)} for m_s, m_i in [-M, M].
std::map<std::pair<int, int>, cplx> g_transform(const KernelSamples& kernel, int max_m);

// Slice n of the tensor on the base ring (kappa_s = kappa_i = k0).
GTensor g_coefficients(const PumpBeam& pump, const CrystalModel& crystal, int n, int max_m, int n_phi);
// Full tensor at every n in [0, |l|].
GTensor g_tensor(const PumpBeam& pump, const CrystalModel& crystal, int max_m, int n_phi);
// Smallest M in [|l|, cap] (and <= n_phi/4) with captured power >= target; truncation error otherwise.
GTensor g_tensor_adaptive(const PumpBeam& pump, const CrystalModel& crystal, int cap, int n_phi,
                          double target = 1.0 - 1e-6);

// sum over stored coefficients of G e^{-i(m_s phi_s - m_i phi_i)}
cplx g_reconstruct(const GTensor& g, int n, double phi_s, double phi_i);

std::string gtensor_csv(const GTensor& g);

}  // namespace spdcoam
