#pragma once

#include "langsov/reality.hpp"

namespace langsov {

// Search box for the free accessory coordinates, the same bounds applied to
// every complex coordinate.
struct SearchBox {
  double re_min = -10, re_max = 10, im_min = -10, im_max = 10;
};

struct FoundOper {
  OperPotential oper;
  RealityReport report;
};

struct SearchDiagnostics {
  int64_t objective_evaluations = 0;
  int starts = 0;
  int converged_starts = 0;
  double lipschitz_estimate = 0.0;  // max observed |d obstruction| / |d free|
};

// Multistart Nelder-Mead over the free coordinates followed by a
// Levenberg-Marquardt polish of the stacked pairing residual.  Every
// returned oper has obstruction < tol; the list is deduplicated (distance
// 1e-4 in free coordinates) and sorted lexicographically by (Re, Im).
// An empty result is not an error.
std::vector<FoundOper> search_real_opers(const PunctureConfig& config,
                                         const WeightVector& weights, const SearchBox& box,
                                         double tol, int multistart, uint64_t seed,
                                         SearchDiagnostics* diag = nullptr);

// Obstruction as a function of the free accessory coordinates.
double obstruction_at(const cvec& free, const PunctureConfig& config,
                      const WeightVector& weights, double transport_tol = 1e-11);

}  // namespace langsov
