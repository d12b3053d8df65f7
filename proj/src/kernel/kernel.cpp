#include <cmath>
#include <string>
#include <vector>

#include "spdcoam/errors.hpp"
#include "spdcoam/kernel.hpp"

namespace spdcoam {

double CrystalModel::signal_scale(double phi) const {
  return ring.signal ? ring.signal(phi) : 1.0 + epsilon * std::cos(phi);
}

double CrystalModel::idler_scale(double phi) const {
  return ring.idler ? ring.idler(phi) : 1.0 - epsilon * std::cos(phi);
}

void CrystalModel::validate() const {
  std::vector<std::string> bad;
  if (!(length > 0.0) || !std::isfinite(length)) bad.push_back("crystal.length must be > 0");
  if (!std::isfinite(z0)) bad.push_back("crystal.z0 must be finite");
  if (!(k0 > 0.0) || !std::isfinite(k0)) bad.push_back("crystal.k0 must be > 0");
  if (!(epsilon >= 0.0)) bad.push_back("crystal.epsilon must be >= 0");
  if (epsilon >= 1.0) bad.push_back("crystal.epsilon must be < 1");
  if (!std::isfinite(coupling.real()) || !std::isfinite(coupling.imag()))
    bad.push_back("crystal.coupling must be finite");
  if (bad.empty() && ring.custom()) {
    for (int k = 0; k < 1024; ++k) {
      const double phi = 2.0 * M_PI * k / 1024;
      if (!(signal_scale(phi) > 0.0) || !(idler_scale(phi) > 0.0)) {
        bad.push_back("crystal ring law must return strictly positive radii");
        break;
      }
    }
  }
  if (!bad.empty()) throw ConfigError(bad);
}

cplx time_window(double d_omega, double t_int, double t) {
  if (!(t_int > 0.0)) fail(ErrorKind::Config, "t_int must be > 0");
  if (d_omega == 0.0) return {t_int, 0.0};
  return std::polar(1.0, d_omega * (t - 0.5 * t_int)) * (std::sin(0.5 * d_omega * t_int) / (0.5 * d_omega));
}

cplx phase_matching(double dkz, const CrystalModel& crystal) {
  const cplx ph = std::polar(1.0, -dkz * crystal.z0);
  if (dkz == 0.0) return ph * crystal.length;
  return ph * (std::sin(0.5 * dkz * crystal.length) / (0.5 * dkz));
}

cplx phase_matching_gaussian(double dkz, const CrystalModel& crystal) {
  const double x = 0.5 * dkz * crystal.length;
  return std::polar(1.0, -dkz * crystal.z0) * (crystal.length * std::exp(-kSincGaussCoefficient * x * x));
}

double longitudinal_mismatch(double ks, double ki, double k0, double k_p) {
  return (ks * ks + ki * ki - 2.0 * k0 * k0) / k_p;
}

double rho_k(double ks, double ki, double phi_s, double phi_i) {
  const double r2 = ks * ks + ki * ki + 2.0 * ks * ki * std::cos(phi_s - phi_i);
  return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

cplx phi_lp_of_rho(const PumpBeam& pump, double z0, double rho) {
  const double zr = pump.rayleigh_length();
  const double r2 = rho * rho;
  const double x = zr * r2 / pump.k_p;
  const double mag = laguerre(pump.p, std::abs(pump.l), x) * std::exp(-0.5 * x);
  if (z0 == 0.0) return {mag, 0.0};
  return mag * std::polar(1.0, -z0 * r2 / (2.0 * pump.k_p));
}

cplx phi_lp_kernel(const PumpBeam& pump, const CrystalModel& crystal, double ks, double ki, double phi_s,
                   double phi_i) {
  return phi_lp_of_rho(pump, crystal.z0, rho_k(ks, ki, phi_s, phi_i));
}

std::pair<double, double> ring_radii(const CrystalModel& crystal, double phi_s, double phi_i) {
  crystal.validate();
  return {crystal.k0 * crystal.signal_scale(phi_s), crystal.k0 * crystal.idler_scale(phi_i)};
}

}  // namespace spdcoam
