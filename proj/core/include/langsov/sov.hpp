#pragma once

#include "langsov/chi.hpp"

namespace langsov {

// Separated variables (y_1..y_d, rho), d = n-3, attached to the finite
// punctures z_1..z_{n-1} of an infinity-picture configuration.
struct SklyaninPoint {
  cvec y;
  cplx rho = 1.0;
};

struct MomentumPoint {
  cvec k;
  cplx rho(const PunctureConfig& config) const {
    cplx s = 0.0;
    for (size_t r = 0; r < k.size(); ++r) s += config.z[r] * k[r];
    return s;
  }
};

// kappa_r(y) = prod_k (z_r - y_k) / prod_{s!=r} (z_r - z_s); the divided
// difference identity gives sum_r kappa_r = 0 automatically.
cvec kappa(const PunctureConfig& config, const cvec& y);

MomentumPoint forward_vars(const SklyaninPoint& pt, const PunctureConfig& config);

// Inverts k_r = rho kappa_r(y): builds R(z) = sum_r k_r prod_{s!=r}(z-z_s),
// whose degree drops to n-3 on the constraint surface sum k = 0; rho is the
// leading coefficient (= sum z_r k_r) and y the canonically ordered roots.
SklyaninPoint inverse_vars(const MomentumPoint& k, const PunctureConfig& config,
                           double ctol = 1e-8);

// Density of d mu_Skl with respect to Lebesgue measure d^{2d}y:
//   prod_{r<s} |z_r - z_s|^2  prod_{k<l} |y_k - y_l|^2  prod_r |kappa_r|^{-2}.
double sklyanin_density(const PunctureConfig& config, const cvec& y);

// Compares the finite-difference Jacobian determinant of the chart
// y -> lambda_r(y) = kappa_r(y)/kappa_{n-1}(y), r = 2..n-2, against the
// closed form
//   |det J|^2 = prod_{k<l}|y_k-y_l|^2 /
//               ( prod_{r<s}|z_r-z_s|^2 |kappa_{n-1}(y)|^{2(n-2)} ),
// returning the relative discrepancy.
double jacobian_check(const PunctureConfig& config, const cvec& y);

// Closed-form value used by jacobian_check (exposed for the measure tests).
double sov_jacobian_closed_form(const PunctureConfig& config, const cvec& y);

// |rho(k)|^{-2(j_{n,i}+1)} prod_r |k_r|^{2 j_r + 2} with |.|^a = exp(a ln|.|).
cplx twisted_weight(const PunctureConfig& config, const WeightVector& weights, int sector,
                    const cvec& k);

// Phi_chi(y) = prod_k chi(y_k, ybar_k).
double separated_state(const ChiEvaluator& chi, const cvec& y);

// Node-polynomial precomputation shared by inverse_vars and the position
// state integrands: R(z) = sum_r k_r prod_{s != r}(z - z_s) over an
// arbitrary node set.
class SovKernel {
 public:
  explicit SovKernel(cvec nodes);

  const cvec& nodes() const { return nodes_; }
  // coefficients (ascending) of R(z); length = nodes.size()
  cvec numerator(const cvec& k) const;
  // roots of R after trimming `constraints` top coefficients (they vanish
  // on the delta support); returns roots and the leading coefficient.
  struct Separated {
    cvec y;
    cplx lead;
  };
  Separated separate(const cvec& k, int constraints) const;

 private:
  cvec nodes_;
  std::vector<cvec> node_poly_;  // prod_{s != r}(z - z_s), ascending coeffs
};

}  // namespace langsov
