#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace spdcoam {

using cplx = std::complex<double>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Uniform transverse sampling. Sample (i, j) sits at
//   x_i = center.x + (i - nx/2) dx,  y_j = center.y + (j - ny/2) dy
// so the declared center is always a sample. Storage is row-major, y fastest.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  Point2 center;

  double x(int i) const { return center.x + (i - nx / 2) * dx; }
  double y(int j) const { return center.y + (j - ny / 2) * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
  }
  // Radius of the largest disc about the center that fits on the grid.
  double inscribed_radius() const;

  void validate() const;
  // Also requires the extent to cover 6 pump waists in both directions.
  void validate_for_waist(double w0) const;

  bool operator==(const GridSpec&) const = default;
};

class ComplexGrid {
 public:
  ComplexGrid() = default;
  explicit ComplexGrid(const GridSpec& spec);
  ComplexGrid(const GridSpec& spec, std::vector<cplx> values);

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }

  cplx& at(int i, int j) { return values_[spec_.index(i, j)]; }
  const cplx& at(int i, int j) const { return values_[spec_.index(i, j)]; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  // sum |v|^2 dx dy
  double total_power() const;
  double peak_abs() const;
  // Throws a numerical error when any sample is NaN or infinite.
  void check_finite() const;

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

// SPDCGRID v1: text header, newline, nx*ny little-endian float64 (re, im) pairs.
std::string grid_header(const GridSpec& spec);
void write_grid(const std::string& path, const ComplexGrid& grid);
ComplexGrid read_grid(const std::string& path);

}  // namespace spdcoam
