#pragma once

#include "langsov/types.hpp"

namespace langsov {

// Roots of p(y) = sum_m coeffs[m] y^m (ascending degree).  Degrees <= 3 use
// closed forms, higher degrees the balanced companion matrix; every root is
// polished by Newton steps.  Throws DegreeZero / LeadingCoefficientZero.
cvec poly_roots(const cvec& coeffs);

// Evaluate p and p' at y (Horner).
cplx poly_eval(const cvec& coeffs, cplx y);
cplx poly_eval_deriv(const cvec& coeffs, cplx y);

// Group roots into clusters of radius `radius`; returns multiplicities
// aligned with the (deduplicated) representative list.
struct RootCluster {
  cplx value;
  int multiplicity;
};
std::vector<RootCluster> cluster_roots(const cvec& roots, double radius = 1e-8);

// Canonical ordering used everywhere a root list is serialized:
// lexicographic by (Re, Im).
void sort_canonical(cvec& v);

}  // namespace langsov
