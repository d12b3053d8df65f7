#include "spdcoam/spdcoam.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "spdcoam/analysis.hpp"
#include "spdcoam/config.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/scenario.hpp"

struct spdc_config {
  spdcoam::ScenarioConfig cfg;
};
struct spdc_grid {
  spdcoam::ComplexGrid grid;
};
struct spdc_spectrum {
  spdcoam::AzimuthalSpectrum spectrum;
};

namespace {

thread_local std::string g_last_error;

spdc_status status_of(spdcoam::ErrorKind k) {
  switch (spdcoam::exit_code(k)) {
    case 2: return SPDC_ERR_CONFIG;
    case 4: return SPDC_ERR_IO;
    default: return SPDC_ERR_NUMERIC;
  }
}

template <class F>
spdc_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SPDC_OK;
  } catch (const spdcoam::Error& e) {
    g_last_error = std::string(spdcoam::to_string(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPDC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal: ") + e.what();
    return SPDC_ERR_INTERNAL;
  }
}

spdc_status invalid(const char* what) {
  g_last_error = std::string("invalid argument: ") + what;
  return SPDC_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* spdc_version(void) { return "0.1.0"; }
const char* spdc_last_error(void) { return g_last_error.c_str(); }
void spdc_string_free(char* s) { std::free(s); }

spdc_status spdc_config_parse_text(const char* text, spdc_config** out) {
  if (!text || !out) return invalid("text/out");
  return guarded([&] { *out = new spdc_config{spdcoam::parse_config(text)}; });
}

spdc_status spdc_config_parse_file(const char* path, spdc_config** out) {
  if (!path || !out) return invalid("path/out");
  return guarded([&] { *out = new spdc_config{spdcoam::parse_config_file(path)}; });
}

spdc_status spdc_config_canonical(const spdc_config* cfg, char** text, char** digest) {
  if (!cfg) return invalid("cfg");
  return guarded([&] {
    if (text) *text = dup(cfg->cfg.canonical_text());
    if (digest) *digest = dup(cfg->cfg.digest());
  });
}

void spdc_config_free(spdc_config* cfg) { delete cfg; }

spdc_status spdc_run_scenario(const spdc_config* cfg, const char* output_dir, char** manifest_json) {
  if (!cfg) return invalid("cfg");
  return guarded([&] {
    const auto r = spdcoam::run_scenario(cfg->cfg, output_dir ? output_dir : "");
    if (manifest_json) *manifest_json = dup(r.manifest_json);
  });
}

spdc_status spdc_run_sweep_file(const char* spec_path, const char* output_dir, char** manifest_json) {
  if (!spec_path) return invalid("spec_path");
  return guarded([&] {
    const auto spec = spdcoam::parse_sweep_file(spec_path);
    const auto r = spdcoam::run_sweep(spec, output_dir ? output_dir : "");
    if (manifest_json) *manifest_json = dup(r.manifest_json);
  });
}

spdc_status spdc_validate_sweep_file(const char* spec_path) {
  if (!spec_path) return invalid("spec_path");
  return guarded([&] { (void)spdcoam::parse_sweep_file(spec_path); });
}

spdc_status spdc_grid_load(const char* path, spdc_grid** out) {
  if (!path || !out) return invalid("path/out");
  return guarded([&] { *out = new spdc_grid{spdcoam::read_grid(path)}; });
}

spdc_status spdc_grid_save(const spdc_grid* grid, const char* path) {
  if (!grid || !path) return invalid("grid/path");
  return guarded([&] { spdcoam::write_grid(path, grid->grid); });
}

spdc_status spdc_grid_create(int nx, int ny, double dx, double dy, double cx, double cy,
                             const double* interleaved_re_im, spdc_grid** out) {
  if (!out) return invalid("out");
  return guarded([&] {
    spdcoam::GridSpec s{nx, ny, dx, dy, {cx, cy}};
    s.validate();
    std::vector<spdcoam::cplx> v(s.size());
    if (interleaved_re_im)
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = {interleaved_re_im[2 * k], interleaved_re_im[2 * k + 1]};
    *out = new spdc_grid{spdcoam::ComplexGrid(s, std::move(v))};
  });
}

void spdc_grid_free(spdc_grid* grid) { delete grid; }

spdc_status spdc_grid_dims(const spdc_grid* grid, int* nx, int* ny, double* dx, double* dy, double* cx, double* cy) {
  if (!grid) return invalid("grid");
  const auto& s = grid->grid.spec();
  if (nx) *nx = s.nx;
  if (ny) *ny = s.ny;
  if (dx) *dx = s.dx;
  if (dy) *dy = s.dy;
  if (cx) *cx = s.center.x;
  if (cy) *cy = s.center.y;
  g_last_error.clear();
  return SPDC_OK;
}

spdc_status spdc_grid_values(const spdc_grid* grid, double* out, size_t capacity) {
  if (!grid || !out) return invalid("grid/out");
  const auto& v = grid->grid.values();
  if (capacity < 2 * v.size()) return invalid("capacity below 2*nx*ny");
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[2 * k] = v[k].real();
    out[2 * k + 1] = v[k].imag();
  }
  g_last_error.clear();
  return SPDC_OK;
}

spdc_status spdc_grid_apply_mask(const spdc_grid* grid, int n, spdc_grid** out) {
  if (!grid || !out) return invalid("grid/out");
  return guarded([&] { *out = new spdc_grid{spdcoam::apply_mask(grid->grid, n)}; });
}

spdc_status spdc_grid_rotate(const spdc_grid* grid, double dphi, spdc_grid** out) {
  if (!grid || !out) return invalid("grid/out");
  return guarded([&] { *out = new spdc_grid{spdcoam::rotate_field(grid->grid, dphi)}; });
}

spdc_status spdc_grid_asymmetry(const spdc_grid* grid, double* metric) {
  if (!grid || !metric) return invalid("grid/metric");
  return guarded([&] { *metric = spdcoam::asymmetry_metric(grid->grid); });
}

spdc_status spdc_grid_gaussian_overlap(const spdc_grid* grid, double* overlap) {
  if (!grid || !overlap) return invalid("grid/overlap");
  return guarded([&] { *overlap = spdcoam::gaussian_overlap(grid->grid); });
}

spdc_status spdc_grid_spectrum(const spdc_grid* grid, int max_m, spdc_spectrum** out) {
  if (!grid || !out) return invalid("grid/out");
  return guarded([&] { *out = new spdc_spectrum{spdcoam::azimuthal_spectrum(grid->grid, max_m)}; });
}

spdc_status spdc_spectrum_power_fraction(const spdc_spectrum* s, int m, double* fraction) {
  if (!s || !fraction) return invalid("spectrum/fraction");
  if (m < -s->spectrum.max_m || m > s->spectrum.max_m) return invalid("m outside [-max_m, max_m]");
  *fraction = s->spectrum.fraction(m);
  g_last_error.clear();
  return SPDC_OK;
}

spdc_status spdc_spectrum_max_m(const spdc_spectrum* s, int* max_m) {
  if (!s || !max_m) return invalid("spectrum/max_m");
  *max_m = s->spectrum.max_m;
  g_last_error.clear();
  return SPDC_OK;
}

spdc_status spdc_spectrum_write_csv(const spdc_spectrum* s, const char* prefix) {
  if (!s || !prefix) return invalid("spectrum/prefix");
  return guarded([&] {
    const std::string base(prefix);
    for (const auto& [suffix, text] : {std::pair{std::string("_harmonics.csv"), spdcoam::spectrum_harmonics_csv(s->spectrum)},
                                       std::pair{std::string("_summary.csv"), spdcoam::spectrum_summary_csv(s->spectrum)}}) {
      std::ofstream f(base + suffix, std::ios::binary | std::ios::trunc);
      if (!f) spdcoam::fail(spdcoam::ErrorKind::Io, "cannot write " + base + suffix);
      f << text;
      if (!f) spdcoam::fail(spdcoam::ErrorKind::Io, "write failed: " + base + suffix);
    }
  });
}

void spdc_spectrum_free(spdc_spectrum* s) { delete s; }

spdc_status spdc_classify_grid(const spdc_grid* grid, int pump_l, double dominance, double symmetry, int max_m,
                               char** report_json) {
  if (!grid || !report_json) return invalid("grid/report_json");
  return guarded([&] {
    const auto rep = spdcoam::classify(grid->grid, pump_l, {dominance, symmetry}, max_m);
    *report_json = dup(rep.to_json());
  });
}

}  // extern "C"
