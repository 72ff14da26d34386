#pragma once

#include "langsov/oper.hpp"

namespace langsov {

// Local solution basis at a regular singular point.  In the local
// coordinate x (x = y - z_r at a finite puncture, x = 1/y at infinity) the
// two solutions are
//   phi_1(x) = x^{-j} (1 + sum a_m x^m),   phi_2(x) = x^{1+j} (1 + sum b_m x^m),
// the exponents being the roots of rho(rho-1) + delta = 0.
struct FrobeniusPair {
  int puncture = 0;           // index; n-1 means the point at infinity
  cplx exponent1, exponent2;  // -j_r and 1+j_r
  cvec a, b;                  // series coefficients, a[0] = b[0] = 1
  double r_loc = 0.0;         // validity radius in the local coordinate
  double tail_bound = 0.0;    // estimated truncation error at r_loc/2

  // Value and x-derivative of solution i (1 or 2) at local coordinate x.
  std::pair<cplx, cplx> eval(int i, cplx x) const;
  // Series factors alone (without x^rho), for modulus-only evaluations.
  cplx series_value(int i, cplx x) const;
};

// Builds the local basis at finite puncture r (r < n_finite) or at the
// infinity puncture (r == n_finite, requires the infinity picture).
// N is the series order; it is grown adaptively until the estimated tail
// at r_loc/2 drops below 1e-12 (or the cap is reached).
FrobeniusPair frobenius_series(const OperPotential& oper, size_t r, int order = 8);

}  // namespace langsov
