#pragma once

#include <complex>
#include <vector>

#include "spdcoam/grid.hpp"

namespace spdcoam {

// J_0(x) .. J_nmax(x) by Miller backward recurrence, written to out[0..nmax].
void bessel_jn_sequence(int nmax, double x, double* out);
double bessel_jn(int n, double x);

// Separable 8-point Lagrange interpolation at (x, y). Positions off the grid
// return 0 and stencil taps beyond the edge read as 0. Within 1e-12 of a
// sample index the interpolant collapses to a plain lookup.
cplx interpolate(const ComplexGrid& grid, double x, double y);

// N-th roots of unity e^{-2 pi i k / N}, k = 0..N-1, built from exact index arithmetic.
std::vector<cplx> roots_of_unity(int n);

}  // namespace spdcoam
