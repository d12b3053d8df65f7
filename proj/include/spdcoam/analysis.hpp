#pragma once

#include <map>
#include <optional>
#include <string>

#include "spdcoam/azimuthal.hpp"
#include "spdcoam/biphoton.hpp"
#include "spdcoam/grid.hpp"

namespace spdcoam {

// field * e^{i n phi} about field.center; n = 0 returns an exact copy.
ComplexGrid apply_mask(const ComplexGrid& field, int n);

struct OverlapResult {
  double overlap = 0.0;
  double sigma = 0.0;
};

// max over sigma of |<g, f>|^2 / (|g|^2 |f|^2), g = exp(-r^2/(2 sigma^2)) about field.center.
OverlapResult gaussian_overlap_detail(const ComplexGrid& field);
double gaussian_overlap(const ComplexGrid& field);

struct SymmetryResult {
  bool symmetric = false;
  double metric = 0.0;
};

SymmetryResult symmetry_test(const ComplexGrid& field, double threshold, int n_phi = kDefaultAngularSamples);

enum class Verdict { Conserved, TypeA, TypeB };
const char* to_string(Verdict v);

struct Thresholds {
  double dominance = 0.99;
  double symmetry = 0.01;
};

struct ClassificationReport {
  Verdict verdict = Verdict::TypeB;
  int pump_l = 0;
  std::optional<int> dominant_m;
  std::optional<int> type_a_m;
  std::map<int, double> power_fractions;
  double asymmetry_metric = 0.0;
  Thresholds thresholds;
  std::optional<int> mask_recommendation;
  std::string config_digest;

  std::string to_json() const;
};

ClassificationReport classify(const AzimuthalSpectrum& spectrum, double asymmetry, int pump_l,
                              const Thresholds& thresholds = {});
ClassificationReport classify(const BiphotonProfile& profile, int pump_l, const Thresholds& thresholds = {});
ClassificationReport classify(const ComplexGrid& field, int pump_l, const Thresholds& thresholds = {},
                              int max_m = 16, int n_phi = kDefaultAngularSamples);

}  // namespace spdcoam
