#pragma once

#include <string>
#include <vector>

#include "spdcoam/config.hpp"

namespace spdcoam {

struct ManifestEntry {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct ScenarioResult {
  std::string dir;
  std::string manifest_json;
  ClassificationReport report;
  BiphotonProfile profile;
  std::vector<ManifestEntry> files;
};

// Resolves dir against SPDCOAM_OUTPUT_ROOT when dir is relative and the variable is set.
std::string resolve_output_dir(const std::string& dir);

// Runs pump -> kernel -> profile -> classification and writes the artifact
// set into out_dir (output.dir resolved when empty). Outputs are staged and
// moved into place on success; nothing is left behind on failure.
ScenarioResult run_scenario(const ScenarioConfig& config, const std::string& out_dir = "");

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string verdict;
  std::optional<int> dominant_m;
  std::vector<std::pair<int, double>> top;  // up to 3 (m, fraction), largest first
  double asymmetry = 0.0;
  std::string error;
  int error_code = 0;
};

struct SweepResult {
  std::string dir;
  std::vector<SweepRow> rows;
  std::string summary_csv;
  std::string manifest_json;
};

SweepResult run_sweep(const SweepSpec& spec, const std::string& out_dir = "");

// lower-case hex sha256 of a byte string / file
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

}  // namespace spdcoam
