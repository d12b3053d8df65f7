#include "spdcoam/azimuthal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../common/numfmt.hpp"
#include "../common/parallel.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/numerics.hpp"

namespace spdcoam {

double PolarSamples::power() const {
  double total = 0.0;
  for (int j = 0; j < n_r; ++j) {
    double ring = 0.0;
    for (int k = 0; k < n_phi; ++k) ring += std::norm(at(j, k));
    total += radius(j) * ring;
  }
  return total * dr * (2.0 * M_PI / n_phi);
}

PolarSamples polar_resample(const ComplexGrid& field, int n_phi) {
  const GridSpec& s = field.spec();
  if (n_phi < 8) fail(ErrorKind::Sampling, "angular sample count must be >= 8");
  PolarSamples p;
  p.n_phi = n_phi;
  p.dr = std::min(s.dx, s.dy);
  const double r_max = s.inscribed_radius() - 4.0 * std::max(s.dx, s.dy);
  if (!(r_max > 0.0)) fail(ErrorKind::Sampling, "grid too small for polar resampling");
  p.n_r = static_cast<int>(std::floor(r_max / p.dr)) + 1;
  p.values.resize(static_cast<std::size_t>(p.n_r) * n_phi);
  std::vector<double> cs(n_phi), sn(n_phi);
  const auto roots = roots_of_unity(n_phi);
  for (int k = 0; k < n_phi; ++k) {
    cs[k] = roots[k].real();
    sn[k] = -roots[k].imag();
  }
  detail::parallel_for(static_cast<std::size_t>(p.n_r), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const double r = p.radius(j);
    for (int k = 0; k < n_phi; ++k)
      p.values[jj * n_phi + k] = interpolate(field, s.center.x + r * cs[k], s.center.y + r * sn[k]);
  });
  return p;
}

double AzimuthalSpectrum::fraction(int m) const {
  auto it = power_fraction.find(m);
  return it == power_fraction.end() ? 0.0 : it->second;
}

int AzimuthalSpectrum::dominant() const {
  int best = 0;
  double bf = -1.0;
  for (const auto& [m, f] : power_fraction) {
    if (f > bf || (f == bf && (std::abs(m) < std::abs(best) || (std::abs(m) == std::abs(best) && m < best)))) {
      best = m;
      bf = f;
    }
  }
  return best;
}

AzimuthalSpectrum azimuthal_spectrum(const PolarSamples& polar, int max_m) {
  if (max_m < 0) fail(ErrorKind::Config, "max harmonic must be >= 0");
  if (4 * max_m > polar.n_phi)
    fail(ErrorKind::Sampling, "max harmonic " + std::to_string(max_m) + " exceeds n_phi/4 = " +
                                  std::to_string(polar.n_phi / 4));
  AzimuthalSpectrum out;
  out.max_m = max_m;
  out.n_phi = polar.n_phi;
  out.dr = polar.dr;
  const int n = polar.n_phi;
  const auto roots = roots_of_unity(n);
  const int count = 2 * max_m + 1;
  std::vector<std::vector<cplx>> h(count, std::vector<cplx>(polar.n_r));
  detail::parallel_for(static_cast<std::size_t>(count), [&](std::size_t c) {
    const int m = static_cast<int>(c) - max_m;
    for (int j = 0; j < polar.n_r; ++j) {
      cplx acc(0.0, 0.0);
      for (int k = 0; k < n; ++k) {
        const int idx = static_cast<int>((static_cast<long long>(m) * k % n + n) % n);
        acc += polar.at(j, k) * roots[idx];
      }
      h[c][j] = acc / static_cast<double>(n);
    }
  });
  std::vector<double> pw(count, 0.0);
  double total = 0.0;
  for (int c = 0; c < count; ++c) {
    double s = 0.0;
    for (int j = 0; j < polar.n_r; ++j) s += polar.radius(j) * std::norm(h[c][j]);
    pw[c] = s * polar.dr * 2.0 * M_PI;
    total += pw[c];
  }
  out.harmonic_power = total;
  out.sampled_power = polar.power();
  for (int c = 0; c < count; ++c) {
    const int m = c - max_m;
    out.power_fraction[m] = total > 0.0 ? pw[c] / total : 0.0;
    out.harmonics[m] = std::move(h[c]);
  }
  return out;
}

AzimuthalSpectrum azimuthal_spectrum(const ComplexGrid& field, int max_m, int n_phi) {
  if (4 * max_m > n_phi)
    fail(ErrorKind::Sampling, "max harmonic " + std::to_string(max_m) + " exceeds n_phi/4 = " +
                                  std::to_string(n_phi / 4));
  return azimuthal_spectrum(polar_resample(field, n_phi), max_m);
}

PolarSamples reconstruct(const AzimuthalSpectrum& spectrum) {
  PolarSamples p;
  p.n_phi = spectrum.n_phi;
  p.dr = spectrum.dr;
  p.n_r = spectrum.harmonics.empty() ? 0 : static_cast<int>(spectrum.harmonics.begin()->second.size());
  p.values.assign(static_cast<std::size_t>(p.n_r) * p.n_phi, cplx(0.0, 0.0));
  const int n = p.n_phi;
  const auto roots = roots_of_unity(n);
  for (int j = 0; j < p.n_r; ++j)
    for (int k = 0; k < n; ++k) {
      cplx acc(0.0, 0.0);
      for (const auto& [m, c] : spectrum.harmonics) {
        const int idx = static_cast<int>(((-static_cast<long long>(m) * k) % n + n) % n);
        acc += c[j] * roots[idx];
      }
      p.values[static_cast<std::size_t>(j) * n + k] = acc;
    }
  return p;
}

double asymmetry_metric(const PolarSamples& polar) {
  double peak = 0.0;
  for (const auto& v : polar.values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) return 0.0;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < polar.n_r; ++j) {
    double mean = 0.0, mean2 = 0.0;
    for (int k = 0; k < polar.n_phi; ++k) {
      const double a = std::abs(polar.at(j, k));
      mean += a;
      mean2 += a * a;
    }
    mean /= polar.n_phi;
    mean2 /= polar.n_phi;
    if (mean <= 0.01 * peak) continue;
    double var = 0.0;
    for (int k = 0; k < polar.n_phi; ++k) {
      const double d = std::abs(polar.at(j, k)) - mean;
      var += d * d;
    }
    var /= polar.n_phi;
    const double w = polar.radius(j) * mean2;
    num += w * std::sqrt(var) / mean;
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

double asymmetry_metric(const ComplexGrid& field, int n_phi) { return asymmetry_metric(polar_resample(field, n_phi)); }

std::string spectrum_harmonics_csv(const AzimuthalSpectrum& spectrum) {
  using detail::fmt_double;
  std::ostringstream os;
  os << "m,radial_bin_index,re,im\n";
  for (const auto& [m, c] : spectrum.harmonics)
    for (std::size_t j = 0; j < c.size(); ++j)
      os << m << ',' << j << ',' << fmt_double(c[j].real()) << ',' << fmt_double(c[j].imag()) << '\n';
  return os.str();
}

std::string spectrum_summary_csv(const AzimuthalSpectrum& spectrum) {
  std::ostringstream os;
  os << "m,power_fraction\n";
  for (const auto& [m, f] : spectrum.power_fraction) os << m << ',' << detail::fmt_double(f) << '\n';
  return os.str();
}

}  // namespace spdcoam
