#include "spdcoam/biphoton.hpp"

#include <algorithm>
#include <cmath>

#include "../common/numfmt.hpp"
#include "../common/parallel.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/numerics.hpp"

namespace spdcoam {

namespace {

const cplx kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
cplx i_pow(int m) { return kIPow[((m % 4) + 4) % 4]; }
int wrap(long long v, int n) { return static_cast<int>(((v % n) + n) % n); }

// Lattice angles and the pieces of the kernel that depend on one angle only.
struct Lattice {
  int n = 0;
  std::vector<double> phi, scale_s, scale_i;
  std::vector<cplx> roots;  // e^{-2 pi i k/n}

  Lattice(const CrystalModel& c, int n_phi) : n(n_phi), phi(n_phi), scale_s(n_phi), scale_i(n_phi) {
    roots = roots_of_unity(n_phi);
    for (int k = 0; k < n; ++k) {
      phi[k] = 2.0 * M_PI * k / n;
      scale_s[k] = c.signal_scale(phi[k]);
      scale_i[k] = c.idler_scale(phi[k]);
    }
  }
  // e^{+i q phi_k}
  cplx turn(long long q, int k) const { return roots[wrap(-q * k, n)]; }
};

// phi_lp on the lattice for radial pair (kappa_s, kappa_i), [u * n + v].
void pump_lattice(const PumpBeam& pump, const CrystalModel& c, const Lattice& lat, double kappa_s, double kappa_i,
                  std::vector<cplx>& out, std::vector<double>& ks, std::vector<double>& ki) {
  const int n = lat.n;
  out.resize(static_cast<std::size_t>(n) * n);
  ks.resize(n);
  ki.resize(n);
  for (int k = 0; k < n; ++k) {
    ks[k] = kappa_s * lat.scale_s[k];
    ki[k] = kappa_i * lat.scale_i[k];
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      out[static_cast<std::size_t>(u) * n + v] = phi_lp_of_rho(pump, c.z0, rho_k(ks[u], ki[v], lat.phi[u], lat.phi[v]));
}

// Smallest order A with 1 - sum_{|a|<=A} J_a(x)^2 below 1e-13, capped at cap.
int harmonic_bound(double x, int cap, double& residual) {
  std::vector<double> j(static_cast<std::size_t>(cap) + 1);
  bessel_jn_sequence(cap, x, j.data());
  double s = j[0] * j[0];
  for (int a = 0; a <= cap; ++a) {
    if (a > 0) s += 2.0 * j[a] * j[a];
    residual = std::max(0.0, 1.0 - s);
    if (residual < 1e-13) return a;
  }
  return cap;
}

}  // namespace

int total_pair_oam(int l, int m_s, int m_i) { return l - m_s + m_i; }

BiphotonKernel::BiphotonKernel(const PumpBeam& pump, const CrystalModel& crystal, const BiphotonSettings& settings)
    : pump_(pump), crystal_(crystal), settings_(settings) {
  pump_.validate();
  crystal_.validate();
  std::vector<std::string> bad;
  if (settings_.radial_nodes < 8) bad.push_back("analysis.radial_nodes must be >= 8");
  if (settings_.kernel_n_phi < 8 || settings_.kernel_n_phi % 2 != 0)
    bad.push_back("analysis.kernel_n_phi must be even and >= 8");
  if (settings_.max_m < 0 || settings_.max_m > 16) bad.push_back("analysis.max_m must lie in [0, 16]");
  if (std::abs(pump_.l) > settings_.max_m) bad.push_back("pump.l exceeds the harmonic truncation cap");
  if (!bad.empty()) throw ConfigError(bad);
  if (4 * std::abs(pump_.l) > settings_.kernel_n_phi)
    fail(ErrorKind::Sampling, "kernel lattice too coarse for pump charge");

  gtensor_ = g_tensor_adaptive(pump_, crystal_, settings_.max_m, settings_.kernel_n_phi, settings_.captured_target);

  const double x = std::sqrt(std::log(1e6) / kSincGaussCoefficient);
  kappa_max_ = std::sqrt(2.0 * crystal_.k0 * crystal_.k0 + 2.0 * pump_.k_p / crystal_.length * x);
  dk_ = kappa_max_ / (settings_.radial_nodes - 1);
  nodes_.resize(settings_.radial_nodes);
  for (int j = 0; j < settings_.radial_nodes; ++j) nodes_[j] = j * dk_;
  weights_ = trapezoid_weights(nodes_.size(), dk_);
}

cplx BiphotonKernel::radial_weight(double kappa_s, double kappa_i) const {
  return phase_matching_gaussian(longitudinal_mismatch(kappa_s, kappa_i, crystal_.k0, pump_.k_p), crystal_);
}

GTensor BiphotonKernel::g_at(double kappa_s, double kappa_i, int max_m) const {
  GTensor g;
  g.l = pump_.l;
  g.p = pump_.p;
  g.max_m = max_m;
  g.n_phi = settings_.kernel_n_phi;
  g.epsilon = crystal_.epsilon;
  g.k0 = crystal_.k0;
  g.length = crystal_.length;
  g.z0 = crystal_.z0;
  double total = 0.0, kept = 0.0;
  for (int n = 0; n <= std::abs(pump_.l); ++n) {
    const KernelSamples ks = sample_kernel(pump_, crystal_, n, settings_.kernel_n_phi, kappa_s, kappa_i);
    for (const auto& v : ks.values) total += std::norm(v);
    for (const auto& [key, v] : g_transform(ks, max_m)) {
      g.coefficients[{n, key.first, key.second}] = v;
      kept += std::norm(v);
    }
  }
  total /= static_cast<double>(settings_.kernel_n_phi) * settings_.kernel_n_phi;
  g.captured_power = total > 0.0 ? kept / total : 1.0;
  return g;
}

std::map<int, RadialSpectrum> BiphotonKernel::channel_spectra(PairingMode pairing) const {
  return channel_spectra(pairing, true);
}

std::map<int, RadialSpectrum> BiphotonKernel::channel_spectra(PairingMode pairing, bool with_coupling) const {
  const int n = settings_.kernel_n_phi;
  const int al = std::abs(pump_.l);
  const int s = pump_.l < 0 ? -1 : 1;
  const Lattice lat(crystal_, n);
  const std::size_t nk = nodes_.size();
  std::vector<double> binom(al + 1);
  for (int q = 0; q <= al; ++q) binom[q] = binomial(al, q);

  // amp[j * n + c], c indexes m = c - n/2
  std::vector<cplx> amp(nk * n, cplx(0.0, 0.0));
  detail::parallel_for(nk, [&](std::size_t js) {
    const double kappa_s = nodes_[js];
    std::vector<cplx> t(n, cplx(0.0, 0.0));
    if (pairing == PairingMode::IdlerPoint) {
      std::vector<cplx> lattice, q(n), col(n);
      std::vector<double> ks, ki;
      for (std::size_t ji = 0; ji < nk; ++ji) {
        const double kappa_i = nodes_[ji];
        const cplx wgt = 2.0 * M_PI * kappa_i * weights_[ji] * radial_weight(kappa_s, kappa_i);
        if (wgt == cplx(0.0, 0.0)) continue;
        pump_lattice(pump_, crystal_, lat, kappa_s, kappa_i, lattice, ks, ki);
        for (int nn = 0; nn <= al; ++nn) {
          // Idler column of G: m_i = -s(|l| - n), the only idler harmonic a point detector at rho_0,i sees.
          const int mi = -s * (al - nn);
          for (int v = 0; v < n; ++v) q[v] = std::pow(ki[v], al - nn) * lat.turn(-mi, v);
          for (int u = 0; u < n; ++u) {
            cplx acc(0.0, 0.0);
            const cplx* row = lattice.data() + static_cast<std::size_t>(u) * n;
            for (int v = 0; v < n; ++v) acc += row[v] * q[v];
            col[u] = acc * (std::pow(ks[u], nn) / n);
          }
          const cplx c = binom[nn] * wgt;
          for (int u = 0; u < n; ++u) t[u] += c * lat.turn(static_cast<long long>(s) * nn, u) * col[u];
        }
      }
    } else {
      const cplx wgt = radial_weight(kappa_s, kappa_s);
      for (int u = 0; u < n; ++u) {
        const int up = (u + n / 2) % n;  // phi_i = phi_s + pi
        const double ks = kappa_s * lat.scale_s[u];
        const double ki = kappa_s * lat.scale_i[up];
        const cplx phi = phi_lp_of_rho(pump_, crystal_.z0, rho_k(ks, ki, lat.phi[u], lat.phi[up]));
        cplx acc(0.0, 0.0);
        for (int nn = 0; nn <= al; ++nn) {
          // e^{i s n phi_s} e^{i s(|l|-n) phi_s} (-1)^{|l|-n}
          const double sign = ((al - nn) % 2 == 0) ? 1.0 : -1.0;
          acc += binom[nn] * std::pow(ks, nn) * std::pow(ki, al - nn) * sign;
        }
        t[u] = wgt * phi * acc * lat.turn(static_cast<long long>(s) * al, u);
      }
    }
    for (int c = 0; c < n; ++c) {
      const int m = c - n / 2;
      cplx acc(0.0, 0.0);
      for (int u = 0; u < n; ++u) acc += t[u] * lat.turn(-static_cast<long long>(m), u);
      amp[js * n + c] = acc / static_cast<double>(n);
      if (with_coupling) amp[js * n + c] *= crystal_.coupling;
    }
  });

  std::map<int, RadialSpectrum> out;
  for (int c = 0; c < n; ++c) {
    RadialSpectrum r;
    r.dk = dk_;
    r.samples.resize(nk);
    for (std::size_t j = 0; j < nk; ++j) r.samples[j] = amp[j * n + c];
    out.emplace(c - n / 2, std::move(r));
  }
  return out;
}

std::vector<cplx> BiphotonKernel::two_photon_amplitude_points(const std::vector<PointPair>& pairs) const {
  const int n = settings_.kernel_n_phi;
  const int al = std::abs(pump_.l);
  const int s = pump_.l < 0 ? -1 : 1;
  const Lattice lat(crystal_, n);
  const std::size_t nk = nodes_.size(), np = pairs.size();
  if (np == 0) return {};

  double rs_max = 0.0, ri_max = 0.0;
  for (const auto& p : pairs) {
    rs_max = std::max(rs_max, std::hypot(p.signal.x, p.signal.y));
    ri_max = std::max(ri_max, std::hypot(p.idler.x, p.idler.y));
  }
  const int cap = n / 2 - 1;
  double res_s = 0.0, res_i = 0.0;
  const int as = harmonic_bound(kappa_max_ * rs_max, cap, res_s);
  const int ai = harmonic_bound(kappa_max_ * ri_max, cap, res_i);
  const double residual = std::max(res_s, res_i);
  if (residual > 1e-6)
    throw TruncationError("kernel lattice resolves harmonics up to " + std::to_string(cap) +
                              "; plane-wave residual power " + detail::fmt_double(residual),
                          residual);
  const int ns = 2 * as + 1, ni = 2 * ai + 1;

  // Angular plane-wave factors 2 pi i^a J_a(kappa r) e^{i a theta} per point and node.
  auto plane = [&](const Point2& d, int bound, std::vector<cplx>& out) {
    out.assign(nk * (2 * bound + 1), cplx(0.0, 0.0));
    const double r = std::hypot(d.x, d.y);
    std::vector<double> j(static_cast<std::size_t>(bound) + 1);
    for (std::size_t k = 0; k < nk; ++k) {
      bessel_jn_sequence(bound, nodes_[k] * r, j.data());
      for (int a = -bound; a <= bound; ++a) {
        double v = j[std::abs(a)];
        if (a < 0 && (std::abs(a) % 2) == 1) v = -v;
        out[k * (2 * bound + 1) + (a + bound)] = 2.0 * M_PI * i_pow(a) * unit_phasor_power(d.x, d.y, a) * v;
      }
    }
  };
  std::vector<std::vector<cplx>> xs(np), yi(np);
  for (std::size_t p = 0; p < np; ++p) {
    plane(pairs[p].signal, as, xs[p]);
    plane(pairs[p].idler, ai, yi[p]);
  }

  std::vector<double> binom(al + 1);
  for (int q = 0; q <= al; ++q) binom[q] = binomial(al, q);

  std::vector<std::vector<cplx>> partial(nk, std::vector<cplx>(np, cplx(0.0, 0.0)));
  detail::parallel_for(nk, [&](std::size_t js) {
    const double kappa_s = nodes_[js];
    std::vector<cplx> lattice, kn(static_cast<std::size_t>(n) * n), sc(static_cast<std::size_t>(ni) * n),
        g(static_cast<std::size_t>(ns) * ni);
    std::vector<double> ks, ki;
    for (std::size_t ji = 0; ji < nk; ++ji) {
      const double kappa_i = nodes_[ji];
      const cplx wgt = kappa_s * weights_[js] * kappa_i * weights_[ji] * radial_weight(kappa_s, kappa_i);
      if (wgt == cplx(0.0, 0.0)) continue;
      pump_lattice(pump_, crystal_, lat, kappa_s, kappa_i, lattice, ks, ki);
      for (int nn = 0; nn <= al; ++nn) {
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v)
            kn[static_cast<std::size_t>(u) * n + v] =
                lattice[static_cast<std::size_t>(u) * n + v] * (std::pow(ks[u], nn) * std::pow(ki[v], al - nn));
        // G^{m_s, m_i, n} for signal harmonic a = s n - m_s, idler harmonic b = s(|l|-n) + m_i.
        for (int cb = 0; cb < ni; ++cb) {
          const long long mi = (cb - ai) - static_cast<long long>(s) * (al - nn);
          for (int u = 0; u < n; ++u) {
            cplx acc(0.0, 0.0);
            for (int v = 0; v < n; ++v) acc += kn[static_cast<std::size_t>(u) * n + v] * lat.turn(-mi, v);
            sc[static_cast<std::size_t>(cb) * n + u] = acc / static_cast<double>(n);
          }
        }
        for (int ca = 0; ca < ns; ++ca) {
          const long long ms = static_cast<long long>(s) * nn - (ca - as);
          for (int cb = 0; cb < ni; ++cb) {
            cplx acc(0.0, 0.0);
            for (int u = 0; u < n; ++u) acc += sc[static_cast<std::size_t>(cb) * n + u] * lat.turn(ms, u);
            g[static_cast<std::size_t>(ca) * ni + cb] = acc / static_cast<double>(n);
          }
        }
        const cplx c = binom[nn] * wgt;
        for (std::size_t p = 0; p < np; ++p) {
          const cplx* x = xs[p].data() + js * ns;
          const cplx* y = yi[p].data() + ji * ni;
          cplx acc(0.0, 0.0);
          for (int ca = 0; ca < ns; ++ca) {
            cplx row(0.0, 0.0);
            for (int cb = 0; cb < ni; ++cb) row += g[static_cast<std::size_t>(ca) * ni + cb] * y[cb];
            acc += x[ca] * row;
          }
          partial[js][p] += c * acc;
        }
      }
    }
  });
  std::vector<cplx> out(np, cplx(0.0, 0.0));
  for (std::size_t js = 0; js < nk; ++js)
    for (std::size_t p = 0; p < np; ++p) out[p] += partial[js][p];
  for (auto& v : out) v *= crystal_.coupling;
  return out;
}

cplx BiphotonKernel::two_photon_amplitude_point(const PointPair& pair) const {
  return two_photon_amplitude_points({pair}).front();
}

double ring_mismatch(const CrystalModel& crystal, int samples) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * M_PI * k / samples;
    worst = std::max(worst, std::fabs(crystal.signal_scale(phi) - crystal.idler_scale(phi + M_PI)));
  }
  return crystal.k0 * worst;
}

BiphotonProfile degenerate_profile(const BiphotonKernel& kernel, const Point2& idler_point, const GridSpec& grid,
                                   const ProfileOptions& options) {
  grid.validate_for_waist(kernel.pump().w0);
  if (kernel.kappa_max() * std::max(grid.dx, grid.dy) > M_PI)
    fail(ErrorKind::Sampling, "radial cutoff kappa_max=" + detail::fmt_double(kernel.kappa_max()) +
                                  " aliases on grid spacing (kappa_max*d > pi)");
  BiphotonProfile prof;
  prof.idler_point = idler_point;
  prof.config_digest = options.config_digest;
  prof.ring_mismatch = ring_mismatch(kernel.crystal());
  if (prof.ring_mismatch > 1e-9 * kernel.crystal().k0)
    prof.warnings.push_back("signal and antipodal idler ring radii differ by up to " +
                            detail::fmt_double(prof.ring_mismatch));

  // Coupling is applied once to the assembled grid so that scaling it scales every value exactly.
  const auto spectra = kernel.channel_spectra(options.pairing, false);
  std::map<int, double> power;
  double total = 0.0;
  const auto& w = kernel.weights();
  for (const auto& [m, h] : spectra) {
    double pw = 0.0;
    for (std::size_t j = 0; j < h.samples.size(); ++j) pw += h.k(j) * w[j] * std::norm(h.samples[j]);
    power[m] = pw;
    total += pw;
  }

  const int al = std::abs(kernel.pump().l);
  const int cap = kernel.settings().max_m;
  int m_trunc = std::min(al, cap);
  double captured = 1.0;
  if (total > 0.0) {
    for (m_trunc = std::min(al, cap);; ++m_trunc) {
      double kept = 0.0;
      for (const auto& [m, pw] : power)
        if (std::abs(m) <= m_trunc) kept += pw;
      captured = kept / total;
      if (captured >= kernel.settings().captured_target) break;
      if (m_trunc >= cap)
        throw TruncationError("profile channels need M > " + std::to_string(cap) + "; residual power " +
                                  detail::fmt_double(1.0 - captured),
                              1.0 - captured);
    }
  } else {
    prof.warnings.push_back("coincidence profile has zero power");
  }
  prof.truncation_m = m_trunc;
  prof.captured_power = captured;

  std::vector<std::pair<int, RadialSpectrum>> channels;
  for (const auto& [m, h] : spectra)
    if (std::abs(m) <= m_trunc) {
      channels.emplace_back(m, h);
      prof.channel_power[m] = total > 0.0 ? power[m] / total : 0.0;
    }
  prof.signal_grid = sum_one_photon_amplitudes(channels, grid);
  const cplx coupling = kernel.crystal().coupling;
  for (auto& v : prof.signal_grid.values()) v = coupling * v;
  prof.signal_grid.check_finite();
  prof.m_channels = azimuthal_spectrum(prof.signal_grid, options.analysis_max_m, options.analysis_n_phi);
  return prof;
}

AzimuthalSpectrum channel_decomposition(const BiphotonProfile& profile) { return profile.m_channels; }

}  // namespace spdcoam
