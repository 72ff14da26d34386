#pragma once

#include <memory>

#include "langsov/reality.hpp"

namespace langsov {

// The single-valued solution chi(y, ybar) of a real oper, built as
//   chi = sum_{ab} H_ab s_a(y) conj(s_b(y))
// from the fundamental system (s_1, s_2) at the monodromy basepoint and the
// invariant pairing.  Evaluation is backed by Frobenius patches around each
// puncture (and the w = 1/y chart at infinity) plus an atlas of Taylor disks
// covering the bulk, so a call costs a couple of Horner evaluations.
class ChiEvaluator {
 public:
  ChiEvaluator(OperPotential oper, MonodromyRep rep, HermitianPairing pairing,
               cplx y_ref, double transport_tol = 1e-12, bool normalize = true);

  double operator()(cplx y) const { return value(y); }
  double value(cplx y) const;

  // chi in the w = 1/y chart: |w|^2 chi(1/w), the solution of the hatted
  // equation; finite at w = 0.
  double value_hatted(cplx w) const;

  const OperPotential& oper() const { return oper_; }
  const MonodromyRep& rep() const { return rep_; }
  cplx reference_point() const { return y_ref_; }

  // Max relative pairing drift under continuation around any gamma_r
  // (zero for exactly invariant pairings).
  double loop_consistency() const;

  // Local expansion chi ~ sum_eps C_{r,eps} |x|^{1+eps(2j_r+1)} (1 + O(x));
  // least-squares fit of angular averages at radii r_loc/2, /4, /8 with the
  // series-corrected model, validated at r_loc/3.  r = n_finite addresses
  // the puncture at infinity in the w chart.
  struct ConnectionFit {
    cplx c_plus, c_minus;
    double reconstruction_error;  // relative, at the held-out radius
  };
  ConnectionFit connection_constants(size_t r) const;
  cplx chi_n() const { return connection_constants(oper_.config.n_finite()).c_minus; }

  // Pairing actually used for evaluation (after normalization).
  const Mat2& pairing_matrix() const { return h_chi_; }

  // Default normalization point: centroid + 0.37i * spread.
  static cplx default_reference(const PunctureConfig& config);

 private:
  struct Patch;   // Frobenius patch data
  struct Disk;    // Taylor disk
  struct Atlas;

  OperPotential oper_;
  MonodromyRep rep_;
  Mat2 h_chi_;  // evaluation pairing: T H T^dag = H for all monodromies
  cplx y_ref_;
  std::shared_ptr<const Atlas> atlas_;

  double quad_form(const Mat2& h, cplx v1, cplx v2) const;
};

}  // namespace langsov
