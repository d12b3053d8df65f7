#include <algorithm>
#include <cmath>
#include <string>

#include "../common/parallel.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/field.hpp"
#include "spdcoam/numerics.hpp"

namespace spdcoam {

namespace {

const cplx kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

cplx i_pow(int m) { return kIPow[((m % 4) + 4) % 4]; }

void check_sampling(const RadialSpectrum& h, const GridSpec& spec) {
  h.validate();
  spec.validate();
  const double d = std::max(spec.dx, spec.dy);
  if (h.k_max() * d > M_PI)
    fail(ErrorKind::Sampling, "spectrum cutoff k_max=" + std::to_string(h.k_max()) +
                                  " aliases on grid spacing " + std::to_string(d) + " (k_max*d > pi)");
}

bool same_nodes(const RadialSpectrum& a, const RadialSpectrum& b) {
  return a.dk == b.dk && a.samples.size() == b.samples.size();
}

// Lookup of radial values by |offset| in samples, symmetric in (i, j) when dx == dy.
struct RadialTable {
  int ka = 0, kb = 0;
  bool square = false;
  std::vector<std::pair<int, int>> keys;
  std::vector<int> slot;

  explicit RadialTable(const GridSpec& s) {
    square = (s.dx == s.dy);
    ka = std::max(s.nx, s.ny) / 2 + 1;
    kb = ka;
    slot.assign(static_cast<std::size_t>(ka) * kb, -1);
    for (int i = 0; i < s.nx; ++i)
      for (int j = 0; j < s.ny; ++j) {
        auto [a, b] = key(i - s.nx / 2, j - s.ny / 2);
        int& sl = slot[static_cast<std::size_t>(a) * kb + b];
        if (sl < 0) {
          sl = static_cast<int>(keys.size());
          keys.emplace_back(a, b);
        }
      }
  }
  std::pair<int, int> key(int di, int dj) const {
    int a = std::abs(di), b = std::abs(dj);
    if (square && a > b) std::swap(a, b);
    return {a, b};
  }
  int lookup(int di, int dj) const {
    auto [a, b] = key(di, dj);
    return slot[static_cast<std::size_t>(a) * kb + b];
  }
  double radius(std::size_t k, const GridSpec& s) const {
    const auto [a, b] = keys[k];
    if (square) return std::hypot(a * s.dx, b * s.dx);
    return std::hypot(a * s.dx, b * s.dy);
  }
};

}  // namespace

void RadialSpectrum::validate() const {
  if (!(dk > 0.0) || !std::isfinite(dk)) fail(ErrorKind::Config, "radial spectrum dk must be > 0");
  if (samples.size() < 2) fail(ErrorKind::Config, "radial spectrum needs at least 2 samples");
  for (const auto& v : samples)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::Config, "radial spectrum samples must be finite");
}

RadialSpectrum RadialSpectrum::on_range(const std::function<cplx(double)>& f, int count, double k_max) {
  if (count < 2 || !(k_max > 0.0)) fail(ErrorKind::Config, "radial spectrum needs count >= 2 and k_max > 0");
  RadialSpectrum r;
  r.dk = k_max / (count - 1);
  r.samples.resize(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) r.samples[j] = f(j * r.dk);
  return r;
}

RadialSpectrum RadialSpectrum::sample(const std::function<cplx(double)>& f, int count, double k_limit,
                                      double rel_cutoff) {
  constexpr int kScan = 4096;
  std::vector<double> mag(kScan + 1);
  double peak = 0.0;
  for (int j = 0; j <= kScan; ++j) {
    mag[j] = std::abs(f(k_limit * j / kScan));
    peak = std::max(peak, mag[j]);
  }
  if (!(peak > 0.0)) fail(ErrorKind::UndefinedInput, "radial spectrum is identically zero on [0, k_limit]");
  int last = 0;
  for (int j = 0; j <= kScan; ++j)
    if (mag[j] >= rel_cutoff * peak) last = j;
  if (last == kScan) fail(ErrorKind::Sampling, "radial spectrum does not decay below cutoff within k_limit");
  return on_range(f, count, k_limit * (last + 1) / kScan);
}

std::vector<double> trapezoid_weights(std::size_t count, double dk) {
  std::vector<double> w(count, dk);
  if (count > 0) {
    w.front() = 0.5 * dk;
    w.back() = 0.5 * dk;
  }
  return w;
}

cplx unit_phasor_power(double dx, double dy, int n) {
  const double r = std::hypot(dx, dy);
  if (n == 0 || r == 0.0) return {1.0, 0.0};
  const cplx u = (n > 0) ? cplx(dx / r, dy / r) : cplx(dx / r, -dy / r);
  cplx acc = u;
  for (int k = 1; k < std::abs(n); ++k) acc *= u;
  return acc;
}

cplx one_photon_amplitude_at(const RadialSpectrum& h, int m, double dx, double dy) {
  h.validate();
  const double rho = std::hypot(dx, dy);
  const int am = std::abs(m);
  const auto w = trapezoid_weights(h.samples.size(), h.dk);
  std::vector<double> jn(static_cast<std::size_t>(am) + 1);
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k < h.samples.size(); ++k) {
    const double kk = h.k(k);
    bessel_jn_sequence(am, kk * rho, jn.data());
    double j = jn[am];
    if (m < 0 && (am % 2) == 1) j = -j;
    acc += w[k] * kk * j * h.samples[k];
  }
  return 2.0 * M_PI * i_pow(m) * unit_phasor_power(dx, dy, m) * acc;
}

ComplexGrid sum_one_photon_amplitudes(const std::vector<std::pair<int, RadialSpectrum>>& channels,
                                      const GridSpec& spec) {
  ComplexGrid out(spec);
  if (channels.empty()) return out;
  for (const auto& [m, h] : channels) {
    check_sampling(h, spec);
    if (!same_nodes(h, channels.front().second)) {
      // Mixed node sets: evaluate channel by channel.
      for (const auto& [m2, h2] : channels) {
        const ComplexGrid part = one_photon_amplitude(h2, m2, spec);
        for (std::size_t k = 0; k < out.values().size(); ++k) out.values()[k] += part.values()[k];
      }
      return out;
    }
  }
  const RadialSpectrum& ref = channels.front().second;
  const std::size_t nk = ref.samples.size();
  const auto w = trapezoid_weights(nk, ref.dk);
  int mmax = 0;
  for (const auto& [m, h] : channels) mmax = std::max(mmax, std::abs(m));
  const std::size_t nc = channels.size();

  RadialTable table(spec);
  // radial[key * nc + c] = int h_c(k) J_{m_c}(k r) k dk
  std::vector<cplx> radial(table.keys.size() * nc);
  detail::parallel_for(table.keys.size(), [&](std::size_t key) {
    const double r = table.radius(key, spec);
    std::vector<double> jn(static_cast<std::size_t>(mmax) + 1);
    std::vector<cplx> acc(nc, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < nk; ++k) {
      const double kk = ref.k(k);
      bessel_jn_sequence(mmax, kk * r, jn.data());
      const double wk = w[k] * kk;
      for (std::size_t c = 0; c < nc; ++c) {
        const int m = channels[c].first, am = std::abs(m);
        double j = jn[am];
        if (m < 0 && (am % 2) == 1) j = -j;
        acc[c] += wk * j * channels[c].second.samples[k];
      }
    }
    for (std::size_t c = 0; c < nc; ++c) radial[key * nc + c] = acc[c];
  });

  detail::parallel_for(static_cast<std::size_t>(spec.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const int di = i - spec.nx / 2;
    const double ox = di * spec.dx;
    for (int j = 0; j < spec.ny; ++j) {
      const int dj = j - spec.ny / 2;
      const double oy = dj * spec.dy;
      const std::size_t key = static_cast<std::size_t>(table.lookup(di, dj));
      cplx v(0.0, 0.0);
      for (std::size_t c = 0; c < nc; ++c) {
        const int m = channels[c].first;
        v += i_pow(m) * unit_phasor_power(ox, oy, m) * radial[key * nc + c];
      }
      out.at(i, j) = 2.0 * M_PI * v;
    }
  });
  return out;
}

ComplexGrid one_photon_amplitude(const RadialSpectrum& h, int m, const GridSpec& spec) {
  return sum_one_photon_amplitudes({{m, h}}, spec);
}

ComplexGrid rotate_field(const ComplexGrid& field, double dphi) {
  const GridSpec& s = field.spec();
  ComplexGrid out(s);
  const double c = std::cos(dphi), sn = std::sin(dphi);
  detail::parallel_for(static_cast<std::size_t>(s.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double ox = (i - s.nx / 2) * s.dx;
    for (int j = 0; j < s.ny; ++j) {
      const double oy = (j - s.ny / 2) * s.dy;
      const double sx = c * ox + sn * oy;
      const double sy = -sn * ox + c * oy;
      out.at(i, j) = interpolate(field, s.center.x + sx, s.center.y + sy);
    }
  });
  return out;
}

}  // namespace spdcoam
