#pragma once

#include "langsov/types.hpp"

namespace langsov {

inline cplx delta_from_weight(cplx j) { return j * (j + 1.0); }

// Weights j_1..j_n; j_n belongs to the puncture at infinity when the
// configuration has one.  Sector index i picks j_{n,i} = j_n (i=0) or
// -j_n-1 (i=1).
struct WeightVector {
  cvec j;
  bool allow_resonant = false;

  explicit WeightVector(cvec weights, bool allow_resonant_ = false);

  size_t size() const { return j.size(); }
  cplx delta(size_t r) const { return delta_from_weight(j[r]); }
  cplx j_sector(int i) const { return i == 0 ? j.back() : -j.back() - 1.0; }
  // J_i = sum_{r<n} j_r - j_{n,i}
  cplx big_j(int i) const;
  static bool resonant(cplx j, double tol = 1e-9);
};

// Punctures z_1..z_{n-1} finite; when `infinity_puncture` the n-th puncture
// sits at y = infinity, otherwise infinity is an ordinary point of the oper
// (the all-finite picture used by the Theta representations).
struct PunctureConfig {
  cvec z;
  bool infinity_puncture = true;

  explicit PunctureConfig(cvec punctures, bool infinity = true);

  size_t n_finite() const { return z.size(); }
  size_t n_total() const { return z.size() + (infinity_puncture ? 1 : 0); }
  int sov_dim() const { return int(n_total()) - 3; }
  double min_separation() const;
  cplx centroid() const;
  double spread() const;  // max pairwise distance
};

// t(y) = sum_r [ delta_r/(y-z_r)^2 + E_r/(y-z_r) ] over the finite
// punctures.  With an infinity puncture the residues satisfy
//   sum E_r = 0,  sum (z_r E_r + delta_r) = delta_n;
// in the all-finite picture the third constraint
//   sum (z_r^2 E_r + 2 z_r delta_r) = 0
// also holds, making infinity an ordinary point (y^4 t(y) finite).
struct OperPotential {
  PunctureConfig config;
  WeightVector weights;
  cvec E;     // residues at the finite punctures
  cvec free;  // free accessory coordinates (n_total - 3 of them)

  cplx eval(cplx y) const;              // t(y)
  cplx eval_hatted(cplx w) const;       // w^{-4} t(1/w), the chart at infinity

  // The single-valued solutions satisfy s'' = t(y) s, which fixes the local
  // exponents at z_r to (-j_r, 1+j_r).  transport_ode integrates
  // s'' + q(y) s = 0, so the oper hands it q = -t.
  cplx ode_q(cplx y) const { return -eval(y); }
  double constraint_residual() const;   // max violation of the linear constraints

  // delta_infty = sum (z_r E_r + delta_r), E_infty = sum (z_r^2 E_r + 2 delta_r z_r)
  std::pair<cplx, cplx> infinity_data() const;

  // Laurent data of t at finite puncture r in x = y - z_r:
  // t = delta_r/x^2 + sum_{m>=-1} tau[m+1] x^m (tau[0] = E_r).
  cvec laurent_tail(size_t r, int order) const;
  // Same at infinity in w = 1/y: t_hat = delta_n/w^2 + sum_{m>=-1} tau[m+1] w^m.
  cvec laurent_tail_infinity(int order) const;
  // Taylor coefficients of t at an ordinary point c.
  cvec taylor(cplx c, int order) const;
};

// Completes free accessory coordinates to the full residue vector by
// solving the linear constraints for the last two (infinity picture) or
// three (all-finite picture) residues.
OperPotential embed_accessory(const cvec& free, const PunctureConfig& config,
                              const WeightVector& weights);

}  // namespace langsov
