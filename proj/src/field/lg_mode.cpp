#include "spdcoam/lg_mode.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "spdcoam/errors.hpp"

namespace spdcoam {

double PumpBeam::waist_at(double z) const {
  const double zr = rayleigh_length();
  return w0 * std::sqrt(1.0 + (z * z) / (zr * zr));
}

void PumpBeam::validate() const {
  std::vector<std::string> bad;
  if (p < 0) bad.push_back("pump.p must be >= 0");
  if (!(w0 > 0.0) || !std::isfinite(w0)) bad.push_back("pump.w0 must be > 0");
  if (!(k_p > 0.0) || !std::isfinite(k_p)) bad.push_back("pump.k_p must be > 0");
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
    bad.push_back("pump.amplitude must be finite");
  if (!bad.empty()) throw ConfigError(bad);
}

double laguerre(int n, double alpha, double x) {
  if (n < 0) return 0.0;
  double l0 = 1.0;
  if (n == 0) return l0;
  double l1 = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

std::complex<double> eval_lg_mode(const PumpBeam& pump, double rho, double phi, double z) {
  pump.validate();
  if (!(rho >= 0.0)) fail(ErrorKind::Config, "rho must be >= 0");
  const int al = std::abs(pump.l);
  const double zr = pump.rayleigh_length();
  const double w = pump.waist_at(z);
  const double s = std::sqrt(2.0) * rho / w;
  const std::complex<double> q(z, -zr);
  const std::complex<double> i(0.0, 1.0);
  const double gouy = (2.0 * pump.p + al + 1.0) * std::atan2(z, zr);
  const std::complex<double> gauss = std::exp(i * pump.k_p * rho * rho / (2.0 * q));
  const double radial = std::pow(s, al) * laguerre(pump.p, al, s * s) / std::sqrt(1.0 + (z * z) / (zr * zr));
  return pump.amplitude * radial * gauss * std::polar(1.0, pump.l * phi - gouy + pump.k_p * z);
}

}  // namespace spdcoam
