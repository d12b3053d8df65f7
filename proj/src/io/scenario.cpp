#include "spdcoam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "../common/numfmt.hpp"
#include "../common/parallel.hpp"
#include "spdcoam/errors.hpp"

namespace fs = std::filesystem;

namespace spdcoam {

namespace {

using detail::fmt_double;
using nlohmann::json;

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open for writing: " + p.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::Io, "write failed: " + p.string());
}

void remove_quietly(const fs::path& p) {
  std::error_code ec;
  fs::remove_all(p, ec);
}

// Stage into "<dir>.partial", swap into place on success.
template <class Body>
void staged(const fs::path& dir, Body&& body) {
  fs::path staging = dir;
  staging += ".partial";
  std::error_code ec;
  remove_quietly(staging);
  if (dir.has_parent_path()) fs::create_directories(dir.parent_path(), ec);
  if (!fs::create_directories(staging, ec) && ec)
    fail(ErrorKind::Io, "cannot create output directory " + staging.string() + ": " + ec.message());
  try {
    body(staging);
    remove_quietly(dir);
    fs::rename(staging, dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot move outputs into " + dir.string() + ": " + ec.message());
  } catch (...) {
    remove_quietly(staging);
    throw;
  }
}

std::vector<ManifestEntry> list_files(const fs::path& root) {
  std::vector<ManifestEntry> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    ManifestEntry m;
    m.path = fs::relative(e.path(), root).generic_string();
    if (m.path == "manifest.json") continue;
    m.sha256 = sha256_file(e.path().string());
    m.bytes = static_cast<std::size_t>(e.file_size());
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return out;
}

json files_json(const std::vector<ManifestEntry>& files) {
  json arr = json::array();
  for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return arr;
}

json opt_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

ComplexGrid pump_grid(const PumpBeam& pump, const GridSpec& spec) {
  ComplexGrid g(spec);
  for (int i = 0; i < spec.nx; ++i) {
    const double ox = (i - spec.nx / 2) * spec.dx;
    for (int j = 0; j < spec.ny; ++j) {
      const double oy = (j - spec.ny / 2) * spec.dy;
      g.at(i, j) = eval_lg_mode(pump, std::hypot(ox, oy), std::atan2(oy, ox), 0.0);
    }
  }
  return g;
}

std::string plot_abs_csv(const ComplexGrid& g) {
  std::ostringstream os;
  os << "x,y,abs\n";
  const auto& s = g.spec();
  for (int i = 0; i < s.nx; ++i)
    for (int j = 0; j < s.ny; ++j)
      os << fmt_double(s.x(i)) << ',' << fmt_double(s.y(j)) << ',' << fmt_double(std::abs(g.at(i, j))) << '\n';
  return os.str();
}

}  // namespace

std::string resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  const char* root = std::getenv("SPDCOAM_OUTPUT_ROOT");
  if (p.is_relative() && root && *root) p = fs::path(root) / p;
  return p.lexically_normal().string();
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
  config.validate();
  ScenarioResult res;
  res.dir = out_dir.empty() ? resolve_output_dir(config.output.dir) : out_dir;
  const std::string digest = config.digest();

  staged(res.dir, [&](const fs::path& dir) {
    if (config.output.pump_grid) write_grid((dir / "pump_profile.spdcgrid").string(), pump_grid(config.pump, config.grid));

    const BiphotonKernel kernel(config.pump, config.crystal, config.biphoton_settings());
    if (config.output.gtensor) write_text(dir / "gtensor.csv", gtensor_csv(kernel.gtensor()));

    ProfileOptions opts;
    opts.analysis_max_m = config.analysis.max_m;
    opts.analysis_n_phi = config.analysis.n_phi;
    opts.config_digest = digest;
    res.profile = degenerate_profile(kernel, config.idler_point, config.grid, opts);
    const BiphotonProfile& prof = res.profile;
    write_grid((dir / "profile.spdcgrid").string(), prof.signal_grid);

    const double asym = asymmetry_metric(prof.signal_grid, config.analysis.n_phi);
    json side;
    side["config_digest"] = digest;
    side["idler_point"] = {{"x", prof.idler_point.x}, {"y", prof.idler_point.y}};
    json fr = json::object();
    for (const auto& [m, f] : prof.m_channels.power_fraction) fr[std::to_string(m)] = f;
    side["m_power_fractions"] = fr;
    side["asymmetry_metric"] = asym;
    side["ring_mismatch_diagnostic"] = prof.ring_mismatch;
    json cp = json::object();
    for (const auto& [m, f] : prof.channel_power) cp[std::to_string(m)] = f;
    side["channel_power"] = cp;
    side["truncation_m"] = prof.truncation_m;
    side["captured_power"] = prof.captured_power;
    side["gtensor_m"] = kernel.gtensor().max_m;
    side["gtensor_captured_power"] = kernel.gtensor().captured_power;
    side["kappa_max"] = kernel.kappa_max();
    side["radial_nodes"] = kernel.settings().radial_nodes;
    side["kernel_n_phi"] = kernel.settings().kernel_n_phi;
    side["polar_angle_parameter"] = config.crystal.k0 / config.pump.k_p;
    side["grid_header"] = grid_header(config.grid);
    side["warnings"] = prof.warnings;
    write_text(dir / "profile_report.json", side.dump(2) + "\n");

    write_text(dir / "spectrum_harmonics.csv", spectrum_harmonics_csv(prof.m_channels));
    write_text(dir / "spectrum_summary.csv", spectrum_summary_csv(prof.m_channels));

    res.report = classify(prof.m_channels, asym, config.pump.l, config.analysis.thresholds);
    res.report.config_digest = digest;
    write_text(dir / "classification.json", res.report.to_json());

    if (config.output.plots) {
      write_text(dir / "plot_profile_abs.csv", plot_abs_csv(prof.signal_grid));
      std::ostringstream bars;
      bars << "m,power_fraction\n";
      for (const auto& [m, f] : prof.m_channels.power_fraction) bars << m << ',' << fmt_double(f) << '\n';
      write_text(dir / "plot_channel_bars.csv", bars.str());
    }

    res.files = list_files(dir);
    json man;
    man["version"] = "manifest_v1";
    man["config_digest"] = digest;
    man["files"] = files_json(res.files);
    man["verdict"] = to_string(res.report.verdict);
    man["dominant_m"] = opt_int(res.report.dominant_m);
    man["mask_recommendation"] = opt_int(res.report.mask_recommendation);
    res.manifest_json = man.dump(2) + "\n";
    write_text(dir / "manifest.json", res.manifest_json);
  });
  return res;
}

SweepResult run_sweep(const SweepSpec& spec, const std::string& out_dir) {
  if (spec.values.empty()) fail(ErrorKind::Config, "sweep.values must not be empty");
  SweepResult res;
  if (!out_dir.empty()) res.dir = out_dir;
  else if (!spec.dir.empty()) res.dir = resolve_output_dir(spec.dir);
  else res.dir = (fs::path(resolve_output_dir(spec.base.output.dir)) / "sweep").string();
  res.rows.resize(spec.values.size());

  staged(res.dir, [&](const fs::path& dir) {
    detail::parallel_for(spec.values.size(), [&](std::size_t k) {
      SweepRow& row = res.rows[k];
      row.value = spec.values[k];
      char name[32];
      std::snprintf(name, sizeof name, "row_%03zu", k);
      try {
        const ScenarioResult r = run_scenario(spec.row_config(k), (dir / name).string());
        row.ok = true;
        row.verdict = to_string(r.report.verdict);
        row.dominant_m = r.report.dominant_m;
        std::vector<std::pair<int, double>> fr(r.report.power_fractions.begin(), r.report.power_fractions.end());
        std::stable_sort(fr.begin(), fr.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        fr.resize(std::min<std::size_t>(3, fr.size()));
        row.top = fr;
        row.asymmetry = r.report.asymmetry_metric;
      } catch (const Error& e) {
        row.ok = false;
        row.error = std::string(to_string(e.kind())) + ": " + e.what();
        row.error_code = exit_code(e.kind());
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = std::string("internal: ") + e.what();
        row.error_code = 3;
      }
    });

    std::ostringstream csv;
    csv << "row,parameter,value,verdict,dominant_m,m1,f1,m2,f2,m3,f3,asymmetry_metric,error\n";
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
      const auto& r = res.rows[k];
      csv << k << ',' << to_string(spec.parameter) << ',' << fmt_double(r.value) << ',' << r.verdict << ','
          << (r.dominant_m ? std::to_string(*r.dominant_m) : "");
      for (std::size_t t = 0; t < 3; ++t) {
        if (t < r.top.size()) csv << ',' << r.top[t].first << ',' << fmt_double(r.top[t].second);
        else csv << ",,";
      }
      std::string err = r.error;
      std::replace(err.begin(), err.end(), '"', '\'');
      csv << ',' << (r.ok ? fmt_double(r.asymmetry) : "") << ",\"" << err << "\"\n";
    }
    res.summary_csv = csv.str();
    write_text(dir / "sweep_summary.csv", res.summary_csv);

    json man;
    man["version"] = "sweep_manifest_v1";
    man["parameter"] = to_string(spec.parameter);
    man["values"] = spec.values;
    man["base_config_digest"] = spec.base.digest();
    bool monotone = true;
    for (std::size_t k = 1; k < res.rows.size(); ++k) {
      const auto &a = res.rows[k - 1], &b = res.rows[k];
      if (a.ok && b.ok && b.value >= a.value && b.asymmetry < a.asymmetry) monotone = false;
    }
    man["asymmetry_non_decreasing"] = monotone;
    json rows = json::array();
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
      const auto& r = res.rows[k];
      rows.push_back({{"value", r.value},
                      {"ok", r.ok},
                      {"verdict", r.verdict},
                      {"dominant_m", opt_int(r.dominant_m)},
                      {"asymmetry_metric", r.asymmetry},
                      {"error", r.error},
                      {"exit_code", r.error_code}});
    }
    man["rows"] = rows;
    man["files"] = files_json(list_files(dir));
    res.manifest_json = man.dump(2) + "\n";
    write_text(dir / "manifest.json", res.manifest_json);
  });
  return res;
}

}  // namespace spdcoam
