#pragma once

#include "langsov/frobenius.hpp"
#include "langsov/transport.hpp"

namespace langsov {

// Monodromy of the fundamental system (s, s') around the punctures.
// Loop gamma_r is based at `basepoint`, encircles exactly the finite
// puncture z_r once counterclockwise, and the basis is arranged so that
//   M_inf * M_{n-1} * ... * M_1 = sign * Id
// with the loops ordered by puncture index.  M_inf is transported along a
// large clockwise circle through the basepoint (the w = 1/y chart loop).
struct MonodromyRep {
  cplx basepoint;
  std::vector<PathSpec> loops;  // index-ordered lassos around finite punctures
  std::vector<Mat2> M;          // matrices for gamma_1..gamma_{n-1}
  // Raw lasso transports per puncture (conjugates of M[r] with moderate
  // norms).  They generate the same group; scale-sensitive consumers
  // (traces, pairing conditions) use these.
  std::vector<Mat2> M_gen;
  Mat2 M_inf;
  int sign = +1;                 // the PSL(2) sign in the product relation
  double product_residual = 0.0; // || M_inf M_{n-1}...M_1 -+ Id ||_max
  double max_det_error = 0.0;

  Mat2 ordered_product() const;  // M_{n-1} ... M_1
  double trace_imag_max() const;
  const std::vector<Mat2>& generators() const { return M_gen.empty() ? M : M_gen; }
  cplx trace(size_t r) const { return generators()[r].trace(); }
};

// Transport around an arbitrary closed loop (basepoint = loop start).
Mat2 monodromy_matrix(const OperPotential& oper, const PathSpec& loop, double tol = 1e-12);

// Basepoint below the puncture cluster with unobstructed stems; used when
// the caller does not supply one.
cplx default_basepoint(const PunctureConfig& config);

MonodromyRep monodromy_rep(const OperPotential& oper, cplx basepoint, double tol = 1e-12);
MonodromyRep monodromy_rep(const OperPotential& oper, double tol = 1e-12);

}  // namespace langsov
