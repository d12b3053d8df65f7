#include <doctest.h>

#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "spdcoam/biphoton.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/numerics.hpp"

using namespace spdcoam;

namespace {

PumpBeam pump(int l, int p) { return PumpBeam{l, p, 1.0, 100.0, {1.0, 0.0}}; }

CrystalModel crystal(double eps, cplx coupling = {1.0, 0.0}) {
  CrystalModel c;
  c.length = 40.0;
  c.z0 = 0.0;
  c.k0 = 0.5;
  c.epsilon = eps;
  c.coupling = coupling;
  return c;
}

BiphotonSettings small_settings(int nodes = 32, int n_phi = 32) {
  BiphotonSettings s;
  s.radial_nodes = nodes;
  s.kernel_n_phi = n_phi;
  return s;
}

// 64 x 64 at 0.2: covers 6 waists and keeps kappa_max * d below pi.
const GridSpec kGrid{64, 64, 0.2, 0.2, {}};

ProfileOptions small_options() {
  ProfileOptions o;
  o.analysis_max_m = 8;
  o.analysis_n_phi = 64;
  return o;
}

double radial_mean_abs(const ComplexGrid& g, double r) {
  double acc = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double a = 2 * M_PI * k / 64;
    acc += std::abs(interpolate(g, g.spec().center.x + r * std::cos(a), g.spec().center.y + r * std::sin(a)));
  }
  return acc / 64;
}

}  // namespace

TEST_SUITE("biphoton") {
  TEST_CASE("total_pair_oam examples") {
    for (int m = -4; m <= 4; ++m) CHECK(total_pair_oam(3, m, m) == 3);
    CHECK(total_pair_oam(2, 1, 0) == 1);
    CHECK(total_pair_oam(0, -1, 1) == 2);
  }

  TEST_CASE("kernel settings are validated") {
    BiphotonSettings s = small_settings();
    s.radial_nodes = 4;
    CHECK_THROWS_AS(BiphotonKernel(pump(1, 0), crystal(0.0), s), ConfigError);
    s = small_settings();
    s.max_m = 17;
    CHECK_THROWS_AS(BiphotonKernel(pump(1, 0), crystal(0.0), s), ConfigError);
  }

  TEST_CASE("zero coupling gives a zero amplitude everywhere") {
    const BiphotonKernel k(pump(1, 0), crystal(0.2, {0.0, 0.0}), small_settings());
    CHECK(k.two_photon_amplitude_point({{0.3, -0.2}, {0.1, 0.4}}) == cplx(0.0, 0.0));
    const BiphotonProfile prof = degenerate_profile(k, {}, kGrid, small_options());
    for (const auto& v : prof.signal_grid.values()) CHECK(v == cplx(0.0, 0.0));
  }

  TEST_CASE("profile values scale exactly with the coupling") {
    const cplx c(0.37, -1.25);
    const BiphotonKernel k1(pump(2, 0), crystal(0.2), small_settings());
    const BiphotonKernel kc(pump(2, 0), crystal(0.2, c), small_settings());
    const BiphotonProfile p1 = degenerate_profile(k1, {}, kGrid, small_options());
    const BiphotonProfile pc = degenerate_profile(kc, {}, kGrid, small_options());
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < p1.signal_grid.values().size(); ++i)
      if (pc.signal_grid.values()[i] != c * p1.signal_grid.values()[i]) ++mismatches;
    CHECK(mismatches == 0u);
  }

  TEST_CASE("point amplitude equals the direct 4-D quadrature, l = 0 conserved") {
    const BiphotonKernel k(pump(0, 0), crystal(0.0), small_settings(24, 32));
    const std::vector<PointPair> pts = {
        {{0.0, 0.0}, {0.0, 0.0}}, {{0.4, 0.0}, {0.0, 0.0}}, {{0.3, -0.5}, {0.2, 0.1}},
        {{-0.7, 0.2}, {0.5, -0.6}}, {{0.0, 0.9}, {-0.8, 0.0}}};
    const auto got = k.two_photon_amplitude_points(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const cplx want = oracle::two_photon_direct(k, pts[i]);
      CHECK(std::abs(got[i] - want) <= 1e-6 * std::abs(want));
      CHECK(std::abs(got[i] - k.two_photon_amplitude_point(pts[i])) <= 1e-12 * std::abs(want));
    }
  }

  TEST_CASE("point amplitude equals the direct 4-D quadrature with an asymmetric ring") {
    for (auto [l, p] : {std::pair{2, 0}, {-1, 1}}) {
      CrystalModel c = crystal(0.2, {0.5, 0.25});
      c.z0 = 1.5;
      const BiphotonKernel k(pump(l, p), c, small_settings(24, 32));
      const std::vector<PointPair> pts = {{{0.5, 0.1}, {0.0, 0.0}}, {{-0.3, 0.6}, {0.4, 0.2}}, {{0.8, -0.8}, {-0.2, 0.5}}};
      const auto got = k.two_photon_amplitude_points(pts);
      double scale = 0.0;
      std::vector<cplx> want;
      for (const auto& pt : pts) {
        want.push_back(oracle::two_photon_direct(k, pt));
        scale = std::max(scale, std::abs(want.back()));
      }
      for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-6 * scale);
    }
  }

  TEST_CASE("l = 2 conserved amplitude vanishes at the beam centers") {
    const BiphotonKernel k(pump(2, 0), crystal(0.0), small_settings(24, 32));
    const auto v = k.two_photon_amplitude_points({{{0.0, 0.0}, {0.0, 0.0}}, {{0.7, 0.0}, {0.0, 0.0}}, {{0.0, -0.9}, {0.0, 0.0}}});
    const double peak = std::max(std::abs(v[1]), std::abs(v[2]));
    CHECK(peak > 0.0);
    CHECK(std::abs(v[0]) <= 1e-9 * peak);
  }

  TEST_CASE("points beyond the lattice resolution raise a truncation error") {
    const BiphotonKernel k(pump(1, 0), crystal(0.0), small_settings(24, 16));
    CHECK_THROWS_AS(k.two_photon_amplitude_point({{5.0, 0.0}, {0.0, 0.0}}), TruncationError);
  }

  TEST_CASE("idler-point channel spectra match the tensor construction") {
    for (auto [l, eps] : {std::pair{2, 0.2}, {-1, 0.1}, {0, 0.3}}) {
      const BiphotonKernel k(pump(l, 1), crystal(eps, {0.0, 2.0}), small_settings(16, 32));
      const auto got = k.channel_spectra(PairingMode::IdlerPoint);
      const auto want = oracle::idler_channels_from_tensors(k, 4);
      double scale = 0.0;
      for (const auto& [m, v] : want)
        for (const auto& x : v) scale = std::max(scale, std::abs(x));
      for (const auto& [m, v] : want)
        for (std::size_t j = 0; j < v.size(); ++j)
          CHECK(std::abs(got.at(m).samples[j] - v[j]) <= 1e-12 * scale);
    }
  }

  TEST_CASE("literal antipodal pairing cancels for nonzero pump charge") {
    for (int l : {1, 2, -3}) {
      const BiphotonKernel k(pump(l, 0), crystal(0.2), small_settings(24, 32));
      const auto anti = k.channel_spectra(PairingMode::Antipodal);
      const auto idl = k.channel_spectra(PairingMode::IdlerPoint);
      double a = 0.0, b = 0.0;
      for (const auto& [m, h] : anti)
        for (const auto& x : h.samples) a = std::max(a, std::abs(x));
      for (const auto& [m, h] : idl)
        for (const auto& x : h.samples) b = std::max(b, std::abs(x));
      CHECK(b > 0.0);
      CHECK(a <= 1e-12 * b);
    }
    const BiphotonKernel k0(pump(0, 0), crystal(0.0), small_settings(24, 32));
    double a = 0.0;
    for (const auto& x : k0.channel_spectra(PairingMode::Antipodal).at(0).samples) a = std::max(a, std::abs(x));
    CHECK(a > 0.0);
  }

  TEST_CASE("conserved l = 2 profile: single channel, central null, one bright ring") {
    const BiphotonKernel k(pump(2, 0), crystal(0.0), small_settings());
    const BiphotonProfile prof = degenerate_profile(k, {}, kGrid, small_options());
    CHECK(prof.m_channels.fraction(2) > 1.0 - 1e-6);
    CHECK(prof.truncation_m == 2);
    CHECK(prof.warnings.empty());
    const double peak = prof.signal_grid.peak_abs();
    CHECK(std::abs(prof.signal_grid.at(32, 32)) <= 1e-9 * peak);
    // one local maximum above half the peak in the azimuthal mean |phi| (weaker Bessel-type side rings allowed)
    std::vector<double> prof_r;
    for (int j = 0; j <= 20; ++j) prof_r.push_back(radial_mean_abs(prof.signal_grid, 0.2 * j));
    int maxima = 0;
    for (std::size_t j = 1; j + 1 < prof_r.size(); ++j)
      if (prof_r[j] > prof_r[j - 1] && prof_r[j] >= prof_r[j + 1] && prof_r[j] > 0.5 * peak) ++maxima;
    CHECK(maxima == 1);
  }

  TEST_CASE("conserved l = 0 profile is symmetric and sits in m = 0") {
    const BiphotonKernel k(pump(0, 0), crystal(0.0), small_settings());
    const BiphotonProfile prof = degenerate_profile(k, {}, kGrid, small_options());
    CHECK(asymmetry_metric(prof.signal_grid, 64) < 1e-6);
    CHECK(prof.m_channels.fraction(0) > 1.0 - 1e-6);
  }

  TEST_CASE("asymmetric ring spreads l = 2 over several channels") {
    const BiphotonKernel k(pump(2, 0), crystal(0.2), small_settings());
    const BiphotonProfile prof = degenerate_profile(k, {}, kGrid, small_options());
    int strong = 0;
    for (auto [m, f] : prof.m_channels.power_fraction)
      if (f > 0.05) ++strong;
    CHECK(strong > 1);
    CHECK(asymmetry_metric(prof.signal_grid, 64) > 0.05);
    // the opposite-sign ring law maps the signal ring onto the antipodal idler ring
    CHECK(prof.ring_mismatch < 1e-12);
    CHECK(prof.captured_power >= 1.0 - 1e-6);
  }

  TEST_CASE("non-congruent ring laws report a mismatch warning") {
    CrystalModel c = crystal(0.0);
    c.ring.signal = [](double phi) { return 1.0 + 0.1 * std::cos(phi); };
    c.ring.idler = [](double phi) { return 1.0 + 0.1 * std::cos(phi); };
    CHECK(ring_mismatch(c) == doctest::Approx(0.2 * c.k0).epsilon(1e-12));
    const BiphotonKernel k(pump(1, 0), c, small_settings(24, 32));
    const BiphotonProfile prof = degenerate_profile(k, {}, kGrid, small_options());
    CHECK(prof.warnings.size() == 1u);
    CHECK(prof.signal_grid.peak_abs() > 0.0);
  }

  TEST_CASE("stored decomposition equals a recomputed spectrum") {
    const BiphotonKernel k(pump(1, 1), crystal(0.15), small_settings());
    ProfileOptions o = small_options();
    o.config_digest = "abc";
    const BiphotonProfile prof = degenerate_profile(k, {0.0, 0.0}, kGrid, o);
    CHECK(prof.config_digest == "abc");
    CHECK(prof.signal_grid.spec().center == kGrid.center);
    const AzimuthalSpectrum again = azimuthal_spectrum(prof.signal_grid, 8, 64);
    const AzimuthalSpectrum stored = channel_decomposition(prof);
    double sum = 0.0;
    for (auto [m, f] : stored.power_fraction) {
      CHECK(std::fabs(f - again.fraction(m)) < 1e-9);
      sum += f;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("synthetic two-channel profile splits evenly") {
    const auto h = RadialSpectrum::sample([](double k) { return cplx(k * std::exp(-k * k / 2), 0.0); }, 120, 15.0);
    const ComplexGrid g = sum_one_photon_amplitudes({{1, h}, {-1, h}}, GridSpec{128, 128, 0.15, 0.15, {}});
    const AzimuthalSpectrum sp = azimuthal_spectrum(g, 4);
    CHECK(sp.fraction(1) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(sp.fraction(-1) == doctest::Approx(0.5).epsilon(1e-3));
  }

  TEST_CASE("conserved collapse for every small pump charge") {
    for (int l = -3; l <= 3; ++l)
      for (int p : {0, 1}) {
        CAPTURE(l);
        CAPTURE(p);
        const BiphotonKernel k(pump(l, p), crystal(0.0), small_settings(24, 32));
        const BiphotonProfile prof = degenerate_profile(k, {}, kGrid, small_options());
        CHECK(prof.m_channels.fraction(l) > 1.0 - 1e-6);
      }
  }

  TEST_CASE("profile truncation cap is enforced") {
    BiphotonSettings s = small_settings(24, 64);
    s.max_m = 2;
    const BiphotonKernel k(pump(2, 0), crystal(0.0), s);
    CHECK_NOTHROW(degenerate_profile(k, {}, kGrid, small_options()));
    CHECK_THROWS_AS(BiphotonKernel(pump(2, 0), crystal(0.4), s), TruncationError);
  }

  TEST_CASE("coarse grids are rejected") {
    const BiphotonKernel k(pump(0, 0), crystal(0.0), small_settings(16, 16));
    try {
      degenerate_profile(k, {}, GridSpec{16, 16, 0.5, 0.5, {}}, small_options());
      FAIL("expected sampling error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Sampling);
    }
    CHECK_THROWS_AS(degenerate_profile(k, {}, GridSpec{16, 16, 0.1, 0.1, {}}, small_options()), ConfigError);
  }
}
