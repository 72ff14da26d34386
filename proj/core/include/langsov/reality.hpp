#pragma once

#include "langsov/monodromy.hpp"

namespace langsov {

// Invariant Hermitian pairing: H with M_r^T H conj(M_r) = H for all finite
// monodromies.  Stored unit Frobenius norm with a deterministic sign.
struct HermitianPairing {
  Mat2 H = Mat2::Zero();
  enum class Signature { Indefinite, Definite, Degenerate };
  Signature signature = Signature::Degenerate;

  double frobenius_norm() const;
  static HermitianPairing from_components(double h11, double h22, cplx h12);
};

enum class RealityClass { RealForm, UnitaryForm, None };

struct RealityReport {
  double obstruction = 0.0;    // smallest singular value of the intertwiner map
  HermitianPairing pairing;    // minimizing H
  double trace_imag_max = 0.0; // max_r |Im tr M_r|
  RealityClass classification = RealityClass::None;
};

// Smallest singular value of H -> (M_r^T H conj(M_r) - H)_{r=1..n-1} on the
// 4-dimensional real space of Hermitian matrices, restricted to unit
// Frobenius norm, together with the minimizing pairing.
RealityReport reality_obstruction(const MonodromyRep& rep, double class_tol = 1e-6);

const char* reality_class_name(RealityClass c);

}  // namespace langsov
