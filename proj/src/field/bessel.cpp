#include <algorithm>
#include <cmath>
#include <vector>

#include "spdcoam/numerics.hpp"

namespace spdcoam {

void bessel_jn_sequence(int nmax, double x, double* out) {
  if (x == 0.0) {
    out[0] = 1.0;
    for (int n = 1; n <= nmax; ++n) out[n] = 0.0;
    return;
  }
  const double ax = std::fabs(x);
  const int top = std::max(nmax, static_cast<int>(ax));
  int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
  start += start % 2;
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  double jp1 = 0.0, jn = 1e-300, norm = 0.0;
  j[start] = jn;
  for (int n = start; n > 0; --n) {
    const double jm1 = 2.0 * n / ax * jn - jp1;
    jp1 = jn;
    jn = jm1;
    j[n - 1] = jn;
    if (std::fabs(jn) > 1e250) {
      for (int k = n - 1; k <= start; ++k) j[k] *= 1e-250;
      jn *= 1e-250;
      jp1 *= 1e-250;
    }
  }
  for (int n = 2; n <= start; n += 2) norm += j[n];
  norm = j[0] + 2.0 * norm;
  for (int n = 0; n <= nmax; ++n) {
    double v = j[n] / norm;
    if (x < 0.0 && (n % 2) == 1) v = -v;
    out[n] = v;
  }
}

double bessel_jn(int n, double x) {
  const int an = std::abs(n);
  std::vector<double> buf(static_cast<std::size_t>(an) + 1);
  bessel_jn_sequence(an, x, buf.data());
  const double v = buf[an];
  return (n < 0 && (an % 2) == 1) ? -v : v;
}

}  // namespace spdcoam
