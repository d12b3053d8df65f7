#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spdcoam/analysis.hpp"
#include "spdcoam/biphoton.hpp"
#include "spdcoam/grid.hpp"
#include "spdcoam/kernel.hpp"
#include "spdcoam/lg_mode.hpp"

namespace spdcoam {

struct OutputOptions {
  std::string dir = "spdcoam_out";
  bool pump_grid = true;
  bool gtensor = true;
  bool plots = true;
};

struct AnalysisOptions {
  int max_m = 16;
  int n_phi = kDefaultAngularSamples;
  int kernel_n_phi = 64;
  int radial_nodes = 96;
  Thresholds thresholds;
};

struct ScenarioConfig {
  PumpBeam pump;
  CrystalModel crystal;
  GridSpec grid{256, 256, 0.12, 0.12, {}};
  Point2 idler_point;
  AnalysisOptions analysis;
  OutputOptions output;
  long long seed = 0;

  BiphotonSettings biphoton_settings() const;
  // Every key = value line, sorted, excluding output.*; doubles in shortest round-trip form.
  std::string canonical_text() const;
  // sha256 of canonical_text()
  std::string digest() const;
  // Collects every invariant violation (key path + reason) into one ConfigError.
  void validate() const;
};

// Flat "section.key = value" document, '#' comments, unknown keys rejected.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

enum class SweepParameter { Epsilon, PumpL, Length, K0 };
const char* to_string(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Epsilon;
  std::vector<double> values;
  ScenarioConfig base;
  std::string dir;  // empty: <base output dir>/sweep

  ScenarioConfig row_config(std::size_t k) const;
};

// sweep.parameter, sweep.values (comma separated), sweep.base (path relative
// to the spec file), optional sweep.dir. Every row config is validated here.
SweepSpec parse_sweep(const std::string& text, const std::string& base_dir = ".");
SweepSpec parse_sweep_file(const std::string& path);

}  // namespace spdcoam
