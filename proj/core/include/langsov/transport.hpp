#pragma once

#include <Eigen/Dense>
#include <functional>

#include "langsov/path.hpp"

namespace langsov {

using Mat2 = Eigen::Matrix2cd;
using PotentialFn = std::function<cplx(cplx)>;

// Transfer matrix of s'' + t(y) s = 0 along `path`: the fundamental system
// satisfies (s, s')(end) = T (s, s')(start).  Embedded Dormand-Prince 5(4)
// with adaptive steps; det T = 1 holds to integrator accuracy (no first
// derivative term, constant Wronskian).
Mat2 transport_ode(const PotentialFn& t_eval, const PathSpec& path, double tol = 1e-12);

// Inverse of a unimodular 2x2 matrix (adjugate).
inline Mat2 sl2_inverse(const Mat2& m) {
  Mat2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / m.determinant();
}

}  // namespace langsov
