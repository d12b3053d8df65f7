#include "spdcoam/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "../common/numfmt.hpp"
#include "spdcoam/errors.hpp"
#include "spdcoam/scenario.hpp"

namespace spdcoam {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

bool parse_int(const std::string& s, long long& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e && b != e;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e && b != e && std::isfinite(out);
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return out = true, true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return out = false, true;
  return false;
}

enum class Kind { Int, Double, Bool, String };

struct Field {
  Kind kind;
  std::function<void(ScenarioConfig&, const std::string&, long long, double, bool)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

using detail::fmt_double;

#define SPDC_DOUBLE(path, expr) \
  {path, {Kind::Double, [](ScenarioConfig& c, const std::string&, long long, double d, bool) { expr = d; }, \
          [](const ScenarioConfig& c) { return fmt_double(expr); }}}
#define SPDC_INT(path, expr, type) \
  {path, {Kind::Int, [](ScenarioConfig& c, const std::string&, long long i, double, bool) { expr = static_cast<type>(i); }, \
          [](const ScenarioConfig& c) { return std::to_string(expr); }}}
#define SPDC_BOOL(path, expr) \
  {path, {Kind::Bool, [](ScenarioConfig& c, const std::string&, long long, double, bool b) { expr = b; }, \
          [](const ScenarioConfig& c) { return std::string(expr ? "true" : "false"); }}}

const std::map<std::string, Field>& schema() {
  static const std::map<std::string, Field> s = {
      SPDC_INT("pump.l", c.pump.l, int),
      SPDC_INT("pump.p", c.pump.p, int),
      SPDC_DOUBLE("pump.w0", c.pump.w0),
      SPDC_DOUBLE("pump.k_p", c.pump.k_p),
      {"pump.amplitude_re",
       {Kind::Double, [](ScenarioConfig& c, const std::string&, long long, double d, bool) { c.pump.amplitude.real(d); },
        [](const ScenarioConfig& c) { return fmt_double(c.pump.amplitude.real()); }}},
      {"pump.amplitude_im",
       {Kind::Double, [](ScenarioConfig& c, const std::string&, long long, double d, bool) { c.pump.amplitude.imag(d); },
        [](const ScenarioConfig& c) { return fmt_double(c.pump.amplitude.imag()); }}},
      SPDC_DOUBLE("crystal.length", c.crystal.length),
      SPDC_DOUBLE("crystal.z0", c.crystal.z0),
      SPDC_DOUBLE("crystal.k0", c.crystal.k0),
      SPDC_DOUBLE("crystal.epsilon", c.crystal.epsilon),
      {"crystal.coupling_re",
       {Kind::Double, [](ScenarioConfig& c, const std::string&, long long, double d, bool) { c.crystal.coupling.real(d); },
        [](const ScenarioConfig& c) { return fmt_double(c.crystal.coupling.real()); }}},
      {"crystal.coupling_im",
       {Kind::Double, [](ScenarioConfig& c, const std::string&, long long, double d, bool) { c.crystal.coupling.imag(d); },
        [](const ScenarioConfig& c) { return fmt_double(c.crystal.coupling.imag()); }}},
      SPDC_INT("grid.nx", c.grid.nx, int),
      SPDC_INT("grid.ny", c.grid.ny, int),
      SPDC_DOUBLE("grid.dx", c.grid.dx),
      SPDC_DOUBLE("grid.dy", c.grid.dy),
      SPDC_DOUBLE("grid.cx", c.grid.center.x),
      SPDC_DOUBLE("grid.cy", c.grid.center.y),
      SPDC_DOUBLE("detector.idler_x", c.idler_point.x),
      SPDC_DOUBLE("detector.idler_y", c.idler_point.y),
      SPDC_INT("analysis.max_m", c.analysis.max_m, int),
      SPDC_INT("analysis.n_phi", c.analysis.n_phi, int),
      SPDC_INT("analysis.kernel_n_phi", c.analysis.kernel_n_phi, int),
      SPDC_INT("analysis.radial_nodes", c.analysis.radial_nodes, int),
      SPDC_DOUBLE("analysis.dominance", c.analysis.thresholds.dominance),
      SPDC_DOUBLE("analysis.symmetry", c.analysis.thresholds.symmetry),
      {"output.dir",
       {Kind::String, [](ScenarioConfig& c, const std::string& v, long long, double, bool) { c.output.dir = v; },
        [](const ScenarioConfig& c) { return c.output.dir; }}},
      SPDC_BOOL("output.pump_grid", c.output.pump_grid),
      SPDC_BOOL("output.gtensor", c.output.gtensor),
      SPDC_BOOL("output.plots", c.output.plots),
      SPDC_INT("seed", c.seed, long long),
  };
  return s;
}

#undef SPDC_DOUBLE
#undef SPDC_INT
#undef SPDC_BOOL

struct Line {
  int number;
  std::string key, value;
};

std::vector<Line> split_lines(const std::string& text, std::vector<std::string>& bad) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back("line " + std::to_string(number) + ": expected 'key = value'");
      continue;
    }
    out.push_back({number, trim(line.substr(0, eq)), unquote(trim(line.substr(eq + 1)))});
  }
  return out;
}

template <class F>
void collect(std::vector<std::string>& bad, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    bad.insert(bad.end(), e.violations().begin(), e.violations().end());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

BiphotonSettings ScenarioConfig::biphoton_settings() const {
  BiphotonSettings s;
  s.radial_nodes = analysis.radial_nodes;
  s.kernel_n_phi = analysis.kernel_n_phi;
  s.max_m = analysis.max_m;
  return s;
}

std::string ScenarioConfig::canonical_text() const {
  std::string out;
  for (const auto& [key, field] : schema()) {
    if (key.rfind("output.", 0) == 0) continue;
    out += key + " = " + field.get(*this) + "\n";
  }
  return out;
}

std::string ScenarioConfig::digest() const { return sha256_hex(canonical_text()); }

void ScenarioConfig::validate() const {
  std::vector<std::string> bad;
  collect(bad, [&] { pump.validate(); });
  collect(bad, [&] { crystal.validate(); });
  collect(bad, [&] { grid.validate_for_waist(pump.w0 > 0.0 ? pump.w0 : 0.0); });
  const auto& a = analysis;
  if (a.max_m < 0 || a.max_m > 16) bad.push_back("analysis.max_m must lie in [0, 16]");
  if (a.n_phi < 8 || a.n_phi % 2 != 0) bad.push_back("analysis.n_phi must be even and >= 8");
  else if (4 * a.max_m > a.n_phi) bad.push_back("analysis.max_m must be <= analysis.n_phi/4");
  if (a.kernel_n_phi < 8 || a.kernel_n_phi % 2 != 0) bad.push_back("analysis.kernel_n_phi must be even and >= 8");
  else if (a.kernel_n_phi < 4 * std::abs(pump.l)) bad.push_back("analysis.kernel_n_phi must be >= 4*|pump.l|");
  if (a.radial_nodes < 8) bad.push_back("analysis.radial_nodes must be >= 8");
  if (!(a.thresholds.dominance > 0.0 && a.thresholds.dominance <= 1.0))
    bad.push_back("analysis.dominance must lie in (0, 1]");
  if (!(a.thresholds.symmetry > 0.0)) bad.push_back("analysis.symmetry must be > 0");
  if (std::abs(pump.l) > a.max_m) bad.push_back("pump.l must satisfy |pump.l| <= analysis.max_m");
  if (output.dir.empty()) bad.push_back("output.dir must not be empty");
  if (!bad.empty()) throw ConfigError(bad);
}

ScenarioConfig parse_config(const std::string& text) {
  std::vector<std::string> bad;
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::optional<double> z_r;
  for (const auto& ln : split_lines(text, bad)) {
    const std::string where = " (line " + std::to_string(ln.number) + ")";
    if (!seen.insert(ln.key).second) {
      bad.push_back(ln.key + ": duplicate key" + where);
      continue;
    }
    if (ln.key == "pump.z_R") {
      double d = 0.0;
      if (!parse_double(ln.value, d)) bad.push_back("pump.z_R: expected a number, got '" + ln.value + "'" + where);
      else z_r = d;
      continue;
    }
    const auto it = schema().find(ln.key);
    if (it == schema().end()) {
      bad.push_back(ln.key + ": unknown key" + where);
      continue;
    }
    const Field& f = it->second;
    long long i = 0;
    double d = 0.0;
    bool b = false;
    switch (f.kind) {
      case Kind::Int:
        if (!parse_int(ln.value, i)) {
          bad.push_back(ln.key + ": expected an integer, got '" + ln.value + "'" + where);
          continue;
        }
        break;
      case Kind::Double:
        if (!parse_double(ln.value, d)) {
          bad.push_back(ln.key + ": expected a number, got '" + ln.value + "'" + where);
          continue;
        }
        break;
      case Kind::Bool:
        if (!parse_bool(ln.value, b)) {
          bad.push_back(ln.key + ": expected true or false, got '" + ln.value + "'" + where);
          continue;
        }
        break;
      case Kind::String: break;
    }
    f.set(cfg, ln.value, i, d, b);
  }
  for (const char* req : {"pump.l", "pump.p"})
    if (!seen.count(req)) bad.push_back(std::string(req) + ": required key missing");
  collect(bad, [&] { cfg.validate(); });
  if (z_r) {
    const double expect = cfg.pump.rayleigh_length();
    if (!(std::fabs(*z_r - expect) <= 1e-9 * std::max(1.0, std::fabs(expect))))
      bad.push_back("pump.z_R must equal pump.k_p*pump.w0^2/2 (got " + fmt_double(*z_r) + ", relation gives " +
                    fmt_double(expect) + ")");
  }
  if (!bad.empty()) throw ConfigError(bad);
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) { return parse_config(read_text(path)); }

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Epsilon: return "epsilon";
    case SweepParameter::PumpL: return "pump_l";
    case SweepParameter::Length: return "L";
    case SweepParameter::K0: return "k0";
  }
  return "epsilon";
}

ScenarioConfig SweepSpec::row_config(std::size_t k) const {
  ScenarioConfig c = base;
  const double v = values.at(k);
  switch (parameter) {
    case SweepParameter::Epsilon: c.crystal.epsilon = v; break;
    case SweepParameter::PumpL: c.pump.l = static_cast<int>(std::llround(v)); break;
    case SweepParameter::Length: c.crystal.length = v; break;
    case SweepParameter::K0: c.crystal.k0 = v; break;
  }
  return c;
}

SweepSpec parse_sweep(const std::string& text, const std::string& base_dir) {
  std::vector<std::string> bad;
  SweepSpec spec;
  std::optional<std::string> param, values, base;
  std::set<std::string> seen;
  for (const auto& ln : split_lines(text, bad)) {
    const std::string where = " (line " + std::to_string(ln.number) + ")";
    if (!seen.insert(ln.key).second) {
      bad.push_back(ln.key + ": duplicate key" + where);
      continue;
    }
    if (ln.key == "sweep.parameter") param = ln.value;
    else if (ln.key == "sweep.values") values = ln.value;
    else if (ln.key == "sweep.base") base = ln.value;
    else if (ln.key == "sweep.dir") spec.dir = ln.value;
    else bad.push_back(ln.key + ": unknown key" + where);
  }
  if (!param) bad.push_back("sweep.parameter: required key missing");
  else if (*param == "epsilon") spec.parameter = SweepParameter::Epsilon;
  else if (*param == "pump_l") spec.parameter = SweepParameter::PumpL;
  else if (*param == "L") spec.parameter = SweepParameter::Length;
  else if (*param == "k0") spec.parameter = SweepParameter::K0;
  else bad.push_back("sweep.parameter: must be one of epsilon, pump_l, L, k0 (got '" + *param + "')");

  if (!values) {
    bad.push_back("sweep.values: required key missing");
  } else {
    std::istringstream vs(*values);
    std::string item;
    while (std::getline(vs, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      double d = 0.0;
      if (!parse_double(item, d)) {
        bad.push_back("sweep.values: '" + item + "' is not a number");
        continue;
      }
      if (param && *param == "pump_l" && d != std::round(d)) {
        bad.push_back("sweep.values: pump_l value '" + item + "' is not an integer");
        continue;
      }
      spec.values.push_back(d);
    }
    if (spec.values.empty()) bad.push_back("sweep.values must not be empty");
  }
  if (!base) {
    bad.push_back("sweep.base: required key missing");
  } else if (bad.empty()) {
    std::filesystem::path p(*base);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    try {
      spec.base = parse_config_file(p.string());
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) bad.push_back("sweep.base: " + v);
    } catch (const Error& e) {
      bad.push_back(std::string("sweep.base: ") + e.what());
    }
  }
  if (bad.empty()) {
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
      try {
        spec.row_config(k).validate();
      } catch (const ConfigError& e) {
        for (const auto& v : e.violations())
          bad.push_back("sweep.values[" + std::to_string(k) + "]=" + fmt_double(spec.values[k]) + ": " + v);
      }
    }
  }
  if (!bad.empty()) throw ConfigError(bad);
  return spec;
}

SweepSpec parse_sweep_file(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_sweep(read_text(path), dir.empty() ? "." : dir.string());
}

}  // namespace spdcoam
