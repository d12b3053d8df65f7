// spdcoam command-line front end. Talks to the library only through spdcoam.h.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "spdcoam/spdcoam.h"

namespace {

int report(spdc_status st) {
  if (st == SPDC_OK) return 0;
  std::fprintf(stderr, "error: %s\n", spdc_last_error());
  switch (st) {
    case SPDC_ERR_CONFIG:
    case SPDC_ERR_INVALID_ARGUMENT: return 2;
    case SPDC_ERR_IO: return 4;
    default: return 3;
  }
}

std::string under_root(const std::string& path) {
  const char* root = std::getenv("SPDCOAM_OUTPUT_ROOT");
  std::filesystem::path p(path);
  if (p.is_relative() && root && *root) p = std::filesystem::path(root) / p;
  return p.string();
}

struct Grid {
  spdc_grid* g = nullptr;
  ~Grid() { spdc_grid_free(g); }
};

void print_and_free(char* s) {
  if (s) std::fputs(s, stdout);
  spdc_string_free(s);
}

int cmd_run(const std::string& path, const std::string& out) {
  spdc_config* cfg = nullptr;
  if (int rc = report(spdc_config_parse_file(path.c_str(), &cfg))) return rc;
  char* manifest = nullptr;
  const int rc = report(spdc_run_scenario(cfg, out.empty() ? nullptr : out.c_str(), &manifest));
  spdc_config_free(cfg);
  print_and_free(manifest);
  return rc;
}

int cmd_sweep(const std::string& path, const std::string& out) {
  char* manifest = nullptr;
  const int rc = report(spdc_run_sweep_file(path.c_str(), out.empty() ? nullptr : out.c_str(), &manifest));
  print_and_free(manifest);
  return rc;
}

int cmd_validate(const std::string& path, bool sweep) {
  if (sweep) {
    if (int rc = report(spdc_validate_sweep_file(path.c_str()))) return rc;
    std::printf("ok\n");
    return 0;
  }
  spdc_config* cfg = nullptr;
  if (int rc = report(spdc_config_parse_file(path.c_str(), &cfg))) return rc;
  char* digest = nullptr;
  const int rc = report(spdc_config_canonical(cfg, nullptr, &digest));
  if (rc == 0) std::printf("ok %s\n", digest);
  spdc_string_free(digest);
  spdc_config_free(cfg);
  return rc;
}

int cmd_decompose(const std::string& path, int max_m, const std::string& prefix) {
  Grid in;
  if (int rc = report(spdc_grid_load(path.c_str(), &in.g))) return rc;
  spdc_spectrum* s = nullptr;
  if (int rc = report(spdc_grid_spectrum(in.g, max_m, &s))) return rc;
  std::printf("m,power_fraction\n");
  for (int m = -max_m; m <= max_m; ++m) {
    double f = 0.0;
    spdc_spectrum_power_fraction(s, m, &f);
    std::printf("%d,%.17g\n", m, f);
  }
  int rc = 0;
  if (!prefix.empty()) rc = report(spdc_spectrum_write_csv(s, under_root(prefix).c_str()));
  spdc_spectrum_free(s);
  return rc;
}

int cmd_mask(const std::string& path, int n, std::string out) {
  Grid in, masked;
  if (int rc = report(spdc_grid_load(path.c_str(), &in.g))) return rc;
  if (int rc = report(spdc_grid_apply_mask(in.g, n, &masked.g))) return rc;
  if (out.empty()) {
    std::filesystem::path p(path);
    out = (p.parent_path() / (p.stem().string() + "_mask" + std::to_string(n) + ".spdcgrid")).string();
  } else {
    out = under_root(out);
  }
  if (int rc = report(spdc_grid_save(masked.g, out.c_str()))) return rc;
  double overlap = 0.0;
  if (int rc = report(spdc_grid_gaussian_overlap(masked.g, &overlap))) return rc;
  std::printf("mask=%d output=%s gaussian_overlap=%.17g\n", n, out.c_str(), overlap);
  return 0;
}

int cmd_classify(const std::string& path, int pump_l, double dominance, double symmetry, int max_m) {
  Grid in;
  if (int rc = report(spdc_grid_load(path.c_str(), &in.g))) return rc;
  char* json = nullptr;
  const int rc = report(spdc_classify_grid(in.g, pump_l, dominance, symmetry, max_m, &json));
  print_and_free(json);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPDC orbital-angular-momentum simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", spdc_version());

  std::string path, out, prefix;
  int max_m = 16, n = 0, pump_l = 0;
  double dominance = 0.99, symmetry = 0.01;
  bool sweep_spec = false;

  auto* run = app.add_subcommand("run", "run one scenario and write its artifact set");
  run->add_option("config", path, "scenario config file")->required();
  run->add_option("--out", out, "output directory (default: output.dir)");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("spec", path, "sweep spec file")->required();
  sweep->add_option("--out", out, "output directory");

  auto* validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("config", path, "config file")->required();
  validate->add_flag("--sweep", sweep_spec, "treat the file as a sweep spec");

  auto* decompose = app.add_subcommand("decompose", "azimuthal harmonic spectrum of a grid dump");
  decompose->add_option("gridfile", path, "SPDCGRID file")->required();
  decompose->add_option("--max-m", max_m, "largest |m|")->required();
  decompose->add_option("--csv", prefix, "also write <prefix>_harmonics.csv and <prefix>_summary.csv");

  auto* mask = app.add_subcommand("mask", "apply a holographic mask e^{i n phi}");
  mask->add_option("gridfile", path, "SPDCGRID file")->required();
  mask->add_option("-n", n, "mask charge")->required()->allow_extra_args(false);
  mask->add_option("-o,--out", out, "output grid path");

  auto* classify = app.add_subcommand("classify", "classify a coincidence profile dump");
  classify->add_option("profilefile", path, "SPDCGRID file")->required();
  classify->add_option("--pump-l", pump_l, "pump OAM index")->required();
  classify->add_option("--dominance", dominance, "dominance threshold");
  classify->add_option("--symmetry", symmetry, "symmetry threshold");
  classify->add_option("--max-m", max_m, "largest |m|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*run) return cmd_run(path, out);
  if (*sweep) return cmd_sweep(path, out);
  if (*validate) return cmd_validate(path, sweep_spec);
  if (*decompose) return cmd_decompose(path, max_m, prefix);
  if (*mask) return cmd_mask(path, n, out);
  if (*classify) return cmd_classify(path, pump_l, dominance, symmetry, max_m);
  return 2;
}
