#include <cmath>

#include "spdcoam/numerics.hpp"

namespace spdcoam {

namespace {

constexpr int kTaps = 8;
constexpr int kLeft = 3;  // taps at floor(u)-3 .. floor(u)+4

// Returns false when u lies outside [0, n-1].
bool stencil(double u, int n, int& base, double w[kTaps], bool& exact) {
  if (!(u >= -1e-12) || !(u <= n - 1 + 1e-12)) return false;
  const double r = std::round(u);
  if (std::fabs(u - r) < 1e-12) {
    exact = true;
    base = static_cast<int>(r);
    return true;
  }
  exact = false;
  const double f = std::floor(u);
  const double t = u - f;
  base = static_cast<int>(f) - kLeft;
  for (int k = 0; k < kTaps; ++k) {
    const double node = k - kLeft;
    double num = 1.0, den = 1.0;
    for (int m = 0; m < kTaps; ++m) {
      if (m == k) continue;
      const double other = m - kLeft;
      num *= (t - other);
      den *= (node - other);
    }
    w[k] = num / den;
  }
  return true;
}

}  // namespace

cplx interpolate(const ComplexGrid& grid, double x, double y) {
  const GridSpec& s = grid.spec();
  const double u = (x - s.center.x) / s.dx + s.nx / 2;
  const double v = (y - s.center.y) / s.dy + s.ny / 2;
  int bi = 0, bj = 0;
  double wi[kTaps], wj[kTaps];
  bool ei = false, ej = false;
  if (!stencil(u, s.nx, bi, wi, ei) || !stencil(v, s.ny, bj, wj, ej)) return {0.0, 0.0};
  auto column = [&](int i) -> cplx {
    if (i < 0 || i >= s.nx) return {0.0, 0.0};
    if (ej) return grid.at(i, bj);
    cplx acc(0.0, 0.0);
    for (int k = 0; k < kTaps; ++k) {
      const int j = bj + k;
      if (j < 0 || j >= s.ny) continue;
      acc += wj[k] * grid.at(i, j);
    }
    return acc;
  };
  if (ei) return column(bi);
  cplx acc(0.0, 0.0);
  for (int k = 0; k < kTaps; ++k) acc += wi[k] * column(bi + k);
  return acc;
}

std::vector<cplx> roots_of_unity(int n) {
  std::vector<cplx> r(static_cast<std::size_t>(n));
  const double two_pi = 2.0 * M_PI;
  for (int k = 0; k < n; ++k) {
    // Fill by symmetry so e.g. k = n/4 is exactly -i.
    if (4 * k == n) r[k] = {0.0, -1.0};
    else if (2 * k == n) r[k] = {-1.0, 0.0};
    else if (4 * k == 3 * n) r[k] = {0.0, 1.0};
    else if (k == 0) r[k] = {1.0, 0.0};
    else r[k] = std::polar(1.0, -two_pi * k / n);
  }
  return r;
}

}  // namespace spdcoam
