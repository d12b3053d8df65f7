#include <algorithm>
#include <cmath>
#include <sstream>

#include "../common/numfmt.hpp"
#include "../common/parallel.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/kernel.hpp"
#include "spdcoam/numerics.hpp"

namespace spdcoam {

namespace {

int wrap(long long v, int n) { return static_cast<int>(((v % n) + n) % n); }

void check_lattice(int n_phi, int max_m) {
  if (n_phi < 8 || n_phi % 2 != 0) fail(ErrorKind::Sampling, "kernel lattice n_phi must be even and >= 8");
  if (max_m < 0) fail(ErrorKind::Config, "harmonic truncation must be >= 0");
  if (n_phi < 4 * max_m)
    fail(ErrorKind::Sampling, "kernel lattice n_phi=" + std::to_string(n_phi) + " below 4*M=" +
                                  std::to_string(4 * max_m));
}

double kernel_power(const KernelSamples& k) {
  double s = 0.0;
  for (const auto& v : k.values) s += std::norm(v);
  return s / (static_cast<double>(k.n_phi) * k.n_phi);
}

}  // namespace

cplx GTensor::at(int n, int m_s, int m_i) const {
  auto it = coefficients.find({n, m_s, m_i});
  return it == coefficients.end() ? cplx(0.0, 0.0) : it->second;
}

double GTensor::max_abs() const {
  double m = 0.0;
  for (const auto& [key, v] : coefficients) m = std::max(m, std::abs(v));
  return m;
}

KernelSamples sample_kernel(const PumpBeam& pump, const CrystalModel& crystal, int n, int n_phi, double kappa_s,
                            double kappa_i) {
  const int al = std::abs(pump.l);
  if (n < 0 || n > al) fail(ErrorKind::Config, "binomial index n must lie in [0, |l|]");
  KernelSamples out;
  out.n_phi = n_phi;
  out.values.resize(static_cast<std::size_t>(n_phi) * n_phi);
  std::vector<double> phi(n_phi), ks(n_phi), ki(n_phi);
  for (int a = 0; a < n_phi; ++a) {
    phi[a] = 2.0 * M_PI * a / n_phi;
    ks[a] = kappa_s * crystal.signal_scale(phi[a]);
    ki[a] = kappa_i * crystal.idler_scale(phi[a]);
  }
  for (int a = 0; a < n_phi; ++a)
    for (int b = 0; b < n_phi; ++b) {
      const double w = std::pow(ks[a], n) * std::pow(ki[b], al - n);
      out.values[static_cast<std::size_t>(a) * n_phi + b] =
          w * phi_lp_of_rho(pump, crystal.z0, rho_k(ks[a], ki[b], phi[a], phi[b]));
    }
  return out;
}

std::map<std::pair<int, int>, cplx> g_transform(const KernelSamples& kernel, int max_m) {
  const int n = kernel.n_phi;
  check_lattice(n, max_m);
  const auto roots = roots_of_unity(n);  // e^{-2 pi i k/n}
  const int count = 2 * max_m + 1;
  // s[c][a] = (1/N) sum_b K(a, b) e^{-i m_i phi_b}
  std::vector<std::vector<cplx>> s(count, std::vector<cplx>(n));
  for (int c = 0; c < count; ++c) {
    const int mi = c - max_m;
    for (int a = 0; a < n; ++a) {
      cplx acc(0.0, 0.0);
      for (int b = 0; b < n; ++b) acc += kernel.at(a, b) * roots[wrap(static_cast<long long>(mi) * b, n)];
      s[c][a] = acc / static_cast<double>(n);
    }
  }
  std::map<std::pair<int, int>, cplx> out;
  for (int cs = 0; cs < count; ++cs) {
    const int ms = cs - max_m;
    for (int c = 0; c < count; ++c) {
      cplx acc(0.0, 0.0);
      for (int a = 0; a < n; ++a) acc += s[c][a] * roots[wrap(-static_cast<long long>(ms) * a, n)];
      out[{ms, c - max_m}] = acc / static_cast<double>(n);
    }
  }
  return out;
}

namespace {

GTensor build(const PumpBeam& pump, const CrystalModel& crystal, const std::vector<int>& ns, int max_m, int n_phi) {
  pump.validate();
  crystal.validate();
  check_lattice(n_phi, max_m);
  GTensor g;
  g.l = pump.l;
  g.p = pump.p;
  g.max_m = max_m;
  g.n_phi = n_phi;
  g.epsilon = crystal.epsilon;
  g.k0 = crystal.k0;
  g.length = crystal.length;
  g.z0 = crystal.z0;
  std::vector<std::map<std::pair<int, int>, cplx>> parts(ns.size());
  std::vector<double> sampled(ns.size());
  detail::parallel_for(ns.size(), [&](std::size_t k) {
    const KernelSamples ks = sample_kernel(pump, crystal, ns[k], n_phi, crystal.k0, crystal.k0);
    sampled[k] = kernel_power(ks);
    parts[k] = g_transform(ks, max_m);
  });
  double total = 0.0, kept = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    total += sampled[k];
    for (const auto& [key, v] : parts[k]) {
      g.coefficients[{ns[k], key.first, key.second}] = v;
      kept += std::norm(v);
    }
  }
  g.captured_power = total > 0.0 ? kept / total : 1.0;
  return g;
}

}  // namespace

GTensor g_coefficients(const PumpBeam& pump, const CrystalModel& crystal, int n, int max_m, int n_phi) {
  if (n < 0 || n > std::abs(pump.l)) fail(ErrorKind::Config, "binomial index n must lie in [0, |l|]");
  return build(pump, crystal, {n}, max_m, n_phi);
}

GTensor g_tensor(const PumpBeam& pump, const CrystalModel& crystal, int max_m, int n_phi) {
  std::vector<int> ns;
  for (int n = 0; n <= std::abs(pump.l); ++n) ns.push_back(n);
  return build(pump, crystal, ns, max_m, n_phi);
}

GTensor g_tensor_adaptive(const PumpBeam& pump, const CrystalModel& crystal, int cap, int n_phi, double target) {
  const int limit = std::min(cap, n_phi / 4);
  GTensor last;
  for (int m = std::min(std::abs(pump.l), limit); m <= limit; ++m) {
    last = g_tensor(pump, crystal, m, n_phi);
    if (last.captured_power >= target) return last;
  }
  throw TruncationError("G tensor captured power " + detail::fmt_double(last.captured_power) + " below target at M=" +
                            std::to_string(limit),
                        1.0 - last.captured_power);
}

cplx g_reconstruct(const GTensor& g, int n, double phi_s, double phi_i) {
  cplx acc(0.0, 0.0);
  for (const auto& [key, v] : g.coefficients) {
    const auto [nn, ms, mi] = key;
    if (nn != n) continue;
    acc += v * std::polar(1.0, -(ms * phi_s - mi * phi_i));
  }
  return acc;
}

std::string gtensor_csv(const GTensor& g) {
  using detail::fmt_double;
  std::ostringstream os;
  os << "# l=" << g.l << "\n# p=" << g.p << "\n# M=" << g.max_m << "\n# N_phi=" << g.n_phi
     << "\n# epsilon=" << fmt_double(g.epsilon) << "\n# k0=" << fmt_double(g.k0) << "\n# L=" << fmt_double(g.length)
     << "\n# z0=" << fmt_double(g.z0) << "\n# captured_power=" << fmt_double(g.captured_power) << "\n";
  os << "n,m_s,m_i,re,im\n";
  for (const auto& [key, v] : g.coefficients) {
    const auto [n, ms, mi] = key;
    os << n << ',' << ms << ',' << mi << ',' << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
  }
  return os.str();
}

}  // namespace spdcoam
