#include "spdcoam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "../common/parallel.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/field.hpp"

namespace spdcoam {

ComplexGrid apply_mask(const ComplexGrid& field, int n) {
  if (n == 0) return field;
  const GridSpec& s = field.spec();
  ComplexGrid out = field;
  const int steps = std::abs(n);
  for (int i = 0; i < s.nx; ++i) {
    const double ox = (i - s.nx / 2) * s.dx;
    for (int j = 0; j < s.ny; ++j) {
      const double oy = (j - s.ny / 2) * s.dy;
      const double r = std::hypot(ox, oy);
      if (r == 0.0) continue;
      const cplx u = n > 0 ? cplx(ox / r, oy / r) : cplx(ox / r, -oy / r);
      cplx& v = out.at(i, j);
      for (int k = 0; k < steps; ++k) v *= u;
    }
  }
  return out;
}

OverlapResult gaussian_overlap_detail(const ComplexGrid& field) {
  const GridSpec& s = field.spec();
  double p = 0.0, pr2 = 0.0;
  std::vector<double> r2(s.size());
  for (int i = 0; i < s.nx; ++i) {
    const double ox = (i - s.nx / 2) * s.dx;
    for (int j = 0; j < s.ny; ++j) {
      const double oy = (j - s.ny / 2) * s.dy;
      const std::size_t k = s.index(i, j);
      r2[k] = ox * ox + oy * oy;
      const double a = std::norm(field.values()[k]);
      p += a;
      pr2 += a * r2[k];
    }
  }
  if (!(p > 0.0) || !std::isfinite(p)) fail(ErrorKind::UndefinedInput, "gaussian overlap of a zero-power field");
  const double r_rms = std::sqrt(pr2 / p);
  const double floor_r = 0.5 * std::min(s.dx, s.dy);
  const double base = std::max(r_rms, floor_r);

  auto overlap = [&](double sigma) {
    const double inv = 1.0 / (2.0 * sigma * sigma);
    cplx num(0.0, 0.0);
    double gg = 0.0;
    for (std::size_t k = 0; k < r2.size(); ++k) {
      const double g = std::exp(-r2[k] * inv);
      num += g * field.values()[k];
      gg += g * g;
    }
    return std::norm(num) / (gg * p);
  };
  // Coarse log scan brackets the best width, golden section refines it.
  constexpr int kScan = 25;
  const double lo = 0.2 * base, hi = 5.0 * base;
  std::vector<double> grid(kScan), val(kScan);
  int best = 0;
  for (int k = 0; k < kScan; ++k) {
    grid[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (kScan - 1));
    val[k] = overlap(grid[k]);
    if (val[k] > val[best]) best = k;
  }
  double a = grid[std::max(0, best - 1)], b = grid[std::min(kScan - 1, best + 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = overlap(c), fd = overlap(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = overlap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = overlap(d);
    }
  }
  OverlapResult r;
  r.sigma = fc > fd ? c : d;
  r.overlap = std::max({fc, fd, val[best]});
  if (val[best] > std::max(fc, fd)) r.sigma = grid[best];
  r.overlap = std::min(1.0, r.overlap);
  return r;
}

double gaussian_overlap(const ComplexGrid& field) { return gaussian_overlap_detail(field).overlap; }

SymmetryResult symmetry_test(const ComplexGrid& field, double threshold, int n_phi) {
  if (!(threshold > 0.0)) fail(ErrorKind::Config, "symmetry threshold must be > 0");
  SymmetryResult r;
  r.metric = asymmetry_metric(field, n_phi);
  r.symmetric = r.metric < threshold;
  return r;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Conserved: return "Conserved";
    case Verdict::TypeA: return "TypeA";
    case Verdict::TypeB: return "TypeB";
  }
  return "TypeB";
}

ClassificationReport classify(const AzimuthalSpectrum& spectrum, double asymmetry, int pump_l,
                              const Thresholds& thresholds) {
  if (!(thresholds.dominance > 0.0 && thresholds.dominance <= 1.0))
    fail(ErrorKind::Config, "analysis.dominance must lie in (0, 1]");
  if (!(thresholds.symmetry > 0.0)) fail(ErrorKind::Config, "analysis.symmetry must be > 0");
  ClassificationReport rep;
  rep.pump_l = pump_l;
  rep.power_fractions = spectrum.power_fraction;
  rep.asymmetry_metric = asymmetry;
  rep.thresholds = thresholds;
  const int top = spectrum.dominant();
  const bool dominant = spectrum.fraction(top) >= thresholds.dominance;
  const bool symmetric = asymmetry < thresholds.symmetry;
  std::ostringstream why;
  why << "dominant m=" << top << " fraction=" << spectrum.fraction(top) << " asymmetry=" << asymmetry
      << " (dominance " << thresholds.dominance << ", symmetry " << thresholds.symmetry << ")";
  if (dominant) {
    if (!symmetric)
      fail(ErrorKind::Consistency, "single dominant channel but azimuthally asymmetric profile: " + why.str());
    rep.dominant_m = top;
    rep.mask_recommendation = -top;
    if (top == pump_l) {
      rep.verdict = Verdict::Conserved;
    } else {
      rep.verdict = Verdict::TypeA;
      rep.type_a_m = top;
    }
  } else {
    if (symmetric)
      fail(ErrorKind::Consistency, "no dominant channel but azimuthally symmetric profile: " + why.str());
    rep.verdict = Verdict::TypeB;
  }
  return rep;
}

ClassificationReport classify(const BiphotonProfile& profile, int pump_l, const Thresholds& thresholds) {
  const double asym = asymmetry_metric(profile.signal_grid, profile.m_channels.n_phi);
  ClassificationReport rep = classify(profile.m_channels, asym, pump_l, thresholds);
  rep.config_digest = profile.config_digest;
  return rep;
}

ClassificationReport classify(const ComplexGrid& field, int pump_l, const Thresholds& thresholds, int max_m,
                              int n_phi) {
  const PolarSamples polar = polar_resample(field, n_phi);
  return classify(azimuthal_spectrum(polar, max_m), asymmetry_metric(polar), pump_l, thresholds);
}

std::string ClassificationReport::to_json() const {
  nlohmann::json j;
  j["version"] = "report_v1";
  j["verdict"] = to_string(verdict);
  j["pump_l"] = pump_l;
  j["dominant_m"] = dominant_m ? nlohmann::json(*dominant_m) : nlohmann::json(nullptr);
  j["type_a_m"] = type_a_m ? nlohmann::json(*type_a_m) : nlohmann::json(nullptr);
  j["mask_recommendation"] = mask_recommendation ? nlohmann::json(*mask_recommendation) : nlohmann::json(nullptr);
  nlohmann::json pf = nlohmann::json::object();
  for (const auto& [m, f] : power_fractions) pf[std::to_string(m)] = f;
  j["power_fractions"] = pf;
  j["asymmetry_metric"] = asymmetry_metric;
  j["thresholds"] = {{"dominance", thresholds.dominance}, {"symmetry", thresholds.symmetry}};
  j["config_digest"] = config_digest;
  return j.dump(2) + "\n";
}

}  // namespace spdcoam
