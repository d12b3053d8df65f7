// Acceptance checks at desk scale. Prints one PASS/FAIL line per criterion;
// an optional argument "cN" runs a single criterion. Exit status is nonzero
// when any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spdcoam/analysis.hpp"
#include "spdcoam/biphoton.hpp"
#include "spdcoam/config.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/scenario.hpp"

using namespace spdcoam;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string preset(const char* name) { return std::string(SPDCOAM_SOURCE_DIR) + "/configs/" + name; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BiphotonProfile profile_for(const ScenarioConfig& c) {
  const BiphotonKernel k(c.pump, c.crystal, c.biphoton_settings());
  ProfileOptions o;
  o.analysis_max_m = c.analysis.max_m;
  o.analysis_n_phi = c.analysis.n_phi;
  o.config_digest = c.digest();
  return degenerate_profile(k, c.idler_point, c.grid, o);
}

std::map<int, double> mask_sweep(const ComplexGrid& f) {
  std::map<int, double> out;
  for (int n = -8; n <= 8; ++n) out[n] = gaussian_overlap(apply_mask(f, n));
  return out;
}

// 1. Conserved-case collapse.
Outcome c1() {
  const ScenarioConfig base = parse_config_file(preset("type1.cfg"));
  double worst = 1.0, slowest = 0.0;
  std::string where;
  for (int l = -2; l <= 2; ++l)
    for (int p : {0, 1}) {
      ScenarioConfig c = base;
      c.pump.l = l;
      c.pump.p = p;
      const auto t0 = std::chrono::steady_clock::now();
      const BiphotonProfile prof = profile_for(c);
      const double dt = seconds_since(t0);
      const double f = prof.m_channels.fraction(l);
      std::printf("  c1 l=%d p=%d fraction(m=l)=%.12f runtime=%.2fs\n", l, p, f, dt);
      if (f < worst) {
        worst = f;
        where = "l=" + std::to_string(l) + ",p=" + std::to_string(p);
      }
      slowest = std::max(slowest, dt);
    }
  const bool ok = worst >= 1.0 - 1e-6 && slowest <= 30.0;
  return {ok, "min fraction(m=l) " + fmt("%.12f", worst) + " at " + where + " (need >= 1-1e-6); max runtime " +
                  fmt("%.2f", slowest) + " s (need <= 30 s)"};
}

// 2. Mask Gaussianization of the conserved l = 2 profile.
Outcome c2() {
  const BiphotonProfile prof = profile_for(parse_config_file(preset("type1.cfg")));
  const auto ov = mask_sweep(prof.signal_grid);
  double other = 0.0;
  int other_n = 0;
  for (auto [n, o] : ov) {
    std::printf("  c2 mask n=%+d overlap=%.6f\n", n, o);
    if (n != -2 && o > other) {
      other = o;
      other_n = n;
    }
  }
  const bool ok = ov.at(-2) >= 0.95 && other < 0.5;
  return {ok, "overlap(mask -2) " + fmt("%.6f", ov.at(-2)) + " (need >= 0.95); max other " + fmt("%.6f", other) +
                  " at n=" + std::to_string(other_n) + " (need < 0.5)"};
}

// 3. Rotation phase law for one-photon amplitudes.
Outcome c3() {
  const GridSpec grid{256, 256, 0.12, 0.12, {}};
  double worst = 0.0;
  std::string where;
  for (int m = -3; m <= 3; ++m) {
    const int am = std::abs(m);
    const RadialSpectrum h = RadialSpectrum::sample(
        [am](double k) { return cplx(std::pow(k, am) * std::exp(-k * k / 2), 0.0); }, 256, 30.0);
    const ComplexGrid f = one_photon_amplitude(h, m, grid);
    const double peak = f.peak_abs();
    for (double d : {M_PI / 7, M_PI / 4, M_PI / 2}) {
      const ComplexGrid r = rotate_field(f, d);
      const cplx ph = std::polar(1.0, -m * d);
      double err = 0.0;
      for (std::size_t k = 0; k < f.values().size(); ++k) {
        const cplx want = ph * f.values()[k];
        if (std::abs(want) <= 0.01 * peak) continue;
        err = std::max(err, std::abs(r.values()[k] - want) / std::abs(want));
      }
      if (err > worst) {
        worst = err;
        where = "m=" + std::to_string(m) + ",dphi=" + fmt("%.4f", d);
      }
    }
  }
  return {worst < 1e-3, "max relative error " + fmt("%.3e", worst) + " at " + where + " (need < 1e-3)"};
}

// 4. Point amplitude vs brute-force 4-D quadrature on a reduced instance.
Outcome c4() {
  ScenarioConfig c = parse_config_file(preset("type2.cfg"));
  BiphotonSettings s = c.biphoton_settings();
  s.kernel_n_phi = 64;
  s.radial_nodes = 32;
  const BiphotonKernel k(c.pump, c.crystal, s);
  const GridSpec grid{64, 64, 0.05, 0.05, {}};
  std::mt19937_64 rng(c.seed + 20240611);
  std::uniform_int_distribution<int> idx(0, 63);
  std::vector<PointPair> pts;
  for (int t = 0; t < 5; ++t) {
    PointPair p;
    p.signal = {grid.x(idx(rng)), grid.y(idx(rng))};
    p.idler = {grid.x(idx(rng)), grid.y(idx(rng))};
    pts.push_back(p);
  }
  const auto got = k.two_photon_amplitude_points(pts);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx want = oracle::two_photon_direct(k, pts[i]);
    const double rel = std::abs(got[i] - want) / std::abs(want);
    std::printf("  c4 pair %zu s=(%.2f,%.2f) i=(%.2f,%.2f) |phi2|=%.6e rel_err=%.3e\n", i, pts[i].signal.x,
                pts[i].signal.y, pts[i].idler.x, pts[i].idler.y, std::abs(want), rel);
    worst = std::max(worst, rel);
  }
  return {worst < 1e-6, "max relative error " + fmt("%.3e", worst) + " over 5 pairs (need < 1e-6)"};
}

// 5. Fourier roundtrips.
Outcome c5() {
  const ScenarioConfig c = parse_config_file(preset("type2.cfg"));
  const GTensor g = g_tensor(c.pump, c.crystal, 16, 64);
  double g_err = 0.0;
  for (int n = 0; n <= std::abs(c.pump.l); ++n) {
    const KernelSamples ks = sample_kernel(c.pump, c.crystal, n, 64, c.crystal.k0, c.crystal.k0);
    double peak = 0.0;
    for (const auto& v : ks.values) peak = std::max(peak, std::abs(v));
    for (int a = 0; a < 64; ++a)
      for (int b = 0; b < 64; ++b)
        g_err = std::max(g_err, std::abs(g_reconstruct(g, n, 2 * M_PI * a / 64, 2 * M_PI * b / 64) - ks.at(a, b)) / peak);
  }

  // random field band-limited to |m| <= 12, analysed with M = 16
  std::mt19937_64 rng(c.seed + 7);
  std::normal_distribution<double> nd;
  PolarSamples polar;
  polar.dr = 0.05;
  polar.n_r = 96;
  polar.n_phi = c.analysis.n_phi;
  polar.values.assign(static_cast<std::size_t>(polar.n_r) * polar.n_phi, cplx{});
  for (int m = -12; m <= 12; ++m)
    for (int j = 0; j < polar.n_r; ++j) {
      const cplx a(nd(rng), nd(rng));
      for (int k = 0; k < polar.n_phi; ++k)
        polar.values[static_cast<std::size_t>(j) * polar.n_phi + k] += a * std::polar(1.0, m * 2 * M_PI * k / polar.n_phi);
    }
  const AzimuthalSpectrum sp = azimuthal_spectrum(polar, c.analysis.max_m);
  const PolarSamples back = reconstruct(sp);
  double peak = 0.0, a_err = 0.0;
  for (const auto& v : polar.values) peak = std::max(peak, std::abs(v));
  for (std::size_t k = 0; k < polar.values.size(); ++k)
    a_err = std::max(a_err, std::abs(back.values[k] - polar.values[k]) / peak);

  const BiphotonProfile prof = profile_for(c);
  const PolarSamples pp = polar_resample(prof.signal_grid, c.analysis.n_phi);
  const PolarSamples pb = reconstruct(azimuthal_spectrum(pp, c.analysis.max_m));
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < pp.values.size(); ++k) {
    num += std::norm(pb.values[k] - pp.values[k]);
    den += std::norm(pp.values[k]);
  }
  std::printf("  c5 type-2 profile truncated at M=%d: relative L2 residual %.3e\n", c.analysis.max_m, std::sqrt(num / den));
  const double parseval = std::fabs(sp.harmonic_power - sp.sampled_power) / sp.sampled_power;
  const bool ok = g_err < 1e-9 && a_err < 1e-9 && parseval < 1e-9;
  return {ok, "G reconstruction " + fmt("%.3e", g_err) + ", azimuthal reconstruction " + fmt("%.3e", a_err) +
                  ", Parseval " + fmt("%.3e", parseval) + " (each need < 1e-9)"};
}

// Golden channel fractions of the type-2 preset, pinned from the first verified run.
const std::map<int, double> kGoldenType2 = {
    {-1, 0.0000365437}, {0, 0.0044899709}, {1, 0.2130786538}, {2, 0.7671535328},
    {3, 0.0143984936},  {4, 0.0008325345}, {5, 0.0000100332},
};

// 6. Non-conservation detection on the type-2 preset.
Outcome c6() {
  const ScenarioConfig c = parse_config_file(preset("type2.cfg"));
  const BiphotonProfile prof = profile_for(c);
  const AzimuthalSpectrum& sp = prof.m_channels;
  int above = 0;
  for (auto [m, f] : sp.power_fraction) {
    if (f > 1e-6) std::printf("  c6 m=%+d fraction=%.10f channel_power=%.10f\n", m, f,
                              prof.channel_power.count(m) ? prof.channel_power.at(m) : 0.0);
    if (f > 0.05) ++above;
  }
  const SymmetryResult sym = symmetry_test(prof.signal_grid, c.analysis.thresholds.symmetry, c.analysis.n_phi);
  std::string verdict;
  try {
    verdict = to_string(classify(prof, c.pump.l, c.analysis.thresholds).verdict);
  } catch (const Error& e) {
    verdict = std::string("error: ") + e.what();
  }
  const auto ov = mask_sweep(prof.signal_grid);
  double best = 0.0;
  for (auto [n, o] : ov) best = std::max(best, o);

  // independent path: spectral-domain channel power vs grid-domain azimuthal fractions
  double path_gap = 0.0;
  for (auto [m, f] : sp.power_fraction)
    path_gap = std::max(path_gap, std::fabs(f - (prof.channel_power.count(m) ? prof.channel_power.at(m) : 0.0)));
  double golden_gap = 0.0;
  for (auto [m, f] : kGoldenType2) golden_gap = std::max(golden_gap, std::fabs(sp.fraction(m) - f));

  const bool ok = above >= 2 && !sym.symmetric && verdict == "TypeB" && best < 0.9 && path_gap < 1e-3 &&
                  golden_gap < 1e-6;
  return {ok, std::to_string(above) + " channels > 0.05 (need >= 2); asymmetry " + fmt("%.4f", sym.metric) +
                  " (need >= 0.01); verdict " + verdict + " (need TypeB); best mask overlap " + fmt("%.4f", best) +
                  " (need < 0.9); spectral vs grid fractions " + fmt("%.2e", path_gap) +
                  " (need < 1e-3); golden deviation " + fmt("%.2e", golden_gap) + " (need < 1e-6)"};
}

// 7. Type-A synthetic profile.
Outcome c7() {
  const GridSpec grid{256, 256, 0.12, 0.12, {}};
  const int m_a = 1, pump_l = 2;
  const RadialSpectrum h =
      RadialSpectrum::sample([](double k) { return cplx(k * std::exp(-k * k / 2), 0.0); }, 256, 30.0);
  const ComplexGrid f = one_photon_amplitude(h, m_a, grid);
  std::string verdict;
  int type_a = 0;
  try {
    const ClassificationReport r = classify(f, pump_l);
    verdict = to_string(r.verdict);
    type_a = r.type_a_m.value_or(0);
  } catch (const Error& e) {
    verdict = std::string("error: ") + e.what();
  }
  const SymmetryResult sym = symmetry_test(f, 0.01);
  const auto ov = mask_sweep(f);
  double other = 0.0;
  for (auto [n, o] : ov)
    if (n != -m_a) other = std::max(other, o);
  const bool ok = verdict == "TypeA" && type_a == m_a && sym.symmetric && ov.at(-m_a) >= 0.9 && other < 0.5;
  return {ok, "verdict " + verdict + "(" + std::to_string(type_a) + ") (need TypeA(1)); asymmetry " +
                  fmt("%.2e", sym.metric) + " (need < 0.01); overlap(mask -1) " + fmt("%.4f", ov.at(-m_a)) +
                  " (need >= 0.9); max other " + fmt("%.2e", other) + " (need < 0.5)"};
}

// 8. Determinism of the type-1 preset.
Outcome c8() {
  const ScenarioConfig c = parse_config_file(preset("type1.cfg"));
  const fs::path root = fs::temp_directory_path() / "spdcoam_acceptance_c8";
  fs::remove_all(root);
  const ScenarioResult a = run_scenario(c, (root / "a").string());
  const ScenarioResult b = run_scenario(c, (root / "b").string());
  const std::string ha = sha256_file((root / "a" / "manifest.json").string());
  const std::string hb = sha256_file((root / "b" / "manifest.json").string());
  fs::remove_all(root);
  return {ha == hb && a.manifest_json == b.manifest_json,
          "manifest sha256 " + ha.substr(0, 16) + " vs " + hb.substr(0, 16) + " over " +
              std::to_string(a.files.size()) + " files"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::pair<const char*, std::function<Outcome()>>>> criteria = {
      {"c1", {"conserved-case collapse", c1}},      {"c2", {"mask gaussianization", c2}},
      {"c3", {"rotation phase law", c3}},           {"c4", {"oracle equivalence", c4}},
      {"c5", {"Fourier roundtrips", c5}},           {"c6", {"non-conservation detection", c6}},
      {"c7", {"type-A synthetic check", c7}},       {"c8", {"determinism", c8}},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int failed = 0, ran = 0;
  for (const auto& [id, entry] : criteria) {
    if (!only.empty() && only != id) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id.c_str(), entry.first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed ? 1 : 0;
}
