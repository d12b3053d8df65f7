#include "spdcoam/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "../common/numfmt.hpp"
#include "spdcoam/errors.hpp"

namespace spdcoam {

static_assert(std::endian::native == std::endian::little, "grid dumps assume a little-endian host");

double GridSpec::inscribed_radius() const {
  return std::min((nx / 2) * dx, (ny / 2) * dy);
}

void GridSpec::validate() const {
  std::vector<std::string> bad;
  if (nx < 8 || nx % 2 != 0) bad.push_back("grid.nx must be even and >= 8");
  if (ny < 8 || ny % 2 != 0) bad.push_back("grid.ny must be even and >= 8");
  if (!(dx > 0.0) || !std::isfinite(dx)) bad.push_back("grid.dx must be > 0");
  if (!(dy > 0.0) || !std::isfinite(dy)) bad.push_back("grid.dy must be > 0");
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) bad.push_back("grid center must be finite");
  if (!bad.empty()) throw ConfigError(bad);
}

void GridSpec::validate_for_waist(double w0) const {
  validate();
  std::vector<std::string> bad;
  if (nx * dx < 6.0 * w0) bad.push_back("grid.nx*grid.dx must cover 6 pump waists");
  if (ny * dy < 6.0 * w0) bad.push_back("grid.ny*grid.dy must cover 6 pump waists");
  if (!bad.empty()) throw ConfigError(bad);
}

ComplexGrid::ComplexGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.size(), cplx(0.0, 0.0));
}

ComplexGrid::ComplexGrid(const GridSpec& spec, std::vector<cplx> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size()) fail(ErrorKind::Config, "grid value count does not match nx*ny");
}

double ComplexGrid::total_power() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * spec_.dx * spec_.dy;
}

double ComplexGrid::peak_abs() const {
  double p = 0.0;
  for (const auto& v : values_) p = std::max(p, std::abs(v));
  return p;
}

void ComplexGrid::check_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::Sampling, "grid contains non-finite samples");
}

std::string grid_header(const GridSpec& s) {
  using detail::fmt_double;
  std::ostringstream os;
  os << "SPDCGRID v1 " << s.nx << ' ' << s.ny << ' ' << fmt_double(s.dx) << ' ' << fmt_double(s.dy) << ' '
     << fmt_double(s.center.x) << ' ' << fmt_double(s.center.y);
  return os.str();
}

void write_grid(const std::string& path, const ComplexGrid& grid) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open for writing: " + path);
  const std::string header = grid_header(grid.spec()) + "\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  const auto& v = grid.values();
  std::vector<double> raw(2 * v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    raw[2 * k] = v[k].real();
    raw[2 * k + 1] = v[k].imag();
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
  if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

ComplexGrid read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open grid file: " + path);
  std::string header;
  if (!std::getline(in, header)) fail(ErrorKind::Io, "empty grid file: " + path);
  std::istringstream hs(header);
  hs.imbue(std::locale::classic());
  std::string magic, version;
  GridSpec s;
  hs >> magic >> version >> s.nx >> s.ny >> s.dx >> s.dy >> s.center.x >> s.center.y;
  if (!hs || magic != "SPDCGRID" || version != "v1") fail(ErrorKind::Io, "bad SPDCGRID header in " + path);
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Io, "invalid grid header in " + path + ": " + e.what());
  }
  std::vector<double> raw(2 * s.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(double)))
    fail(ErrorKind::Io, "truncated grid payload in " + path);
  if (in.peek() != std::char_traits<char>::eof()) fail(ErrorKind::Io, "trailing bytes after grid payload in " + path);
  std::vector<cplx> v(s.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = cplx(raw[2 * k], raw[2 * k + 1]);
  return ComplexGrid(s, std::move(v));
}

}  // namespace spdcoam
