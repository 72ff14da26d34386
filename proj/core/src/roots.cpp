#include "langsov/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace langsov {

cplx poly_eval(const cvec& c, cplx y) {
  cplx acc = 0.0;
  for (size_t m = c.size(); m-- > 0;) acc = acc * y + c[m];
  return acc;
}

cplx poly_eval_deriv(const cvec& c, cplx y) {
  cplx acc = 0.0;
  for (size_t m = c.size(); m-- > 1;) acc = acc * y + double(m) * c[m];
  return acc;
}

void sort_canonical(cvec& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

namespace {

void newton_polish(const cvec& c, cvec& roots) {
  for (cplx& r : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx p = poly_eval(c, r);
      cplx dp = poly_eval_deriv(c, r);
      if (std::abs(dp) < 1e-300) break;
      cplx step = p / dp;
      if (!is_finite(step) || std::abs(step) > 1.0 + std::abs(r)) break;
      r -= step;
    }
  }
}

cvec roots_companion(const cvec& c) {
  const int n = int(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
  cvec out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

}  // namespace

cvec poly_roots(const cvec& coeffs) {
  cvec c = coeffs;
  while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
  if (c.size() <= 1) throw NumericError("DegreeZero", "polynomial has no roots");
  double cmax = 0.0;
  for (cplx a : c) cmax = std::max(cmax, std::abs(a));
  if (std::abs(c.back()) < 1e-14 * cmax)
    throw NumericError("LeadingCoefficientZero", "leading coefficient vanishes");

  const int deg = int(c.size()) - 1;
  cvec out;
  if (deg == 1) {
    out = {-c[0] / c[1]};
  } else if (deg == 2) {
    cplx a = c[2], b = c[1], d = c[0];
    cplx s = std::sqrt(b * b - 4.0 * a * d);
    // pick the sign that avoids cancellation
    cplx q = (std::real(std::conj(b) * s) >= 0.0) ? -0.5 * (b + s) : -0.5 * (b - s);
    if (std::abs(q) > 0.0) {
      out = {q / a, d / q};
    } else {
      out = {cplx(0.0), cplx(0.0)};
    }
  } else {
    out = roots_companion(c);
  }
  newton_polish(c, out);
  sort_canonical(out);
  return out;
}

std::vector<RootCluster> cluster_roots(const cvec& roots, double radius) {
  std::vector<RootCluster> clusters;
  for (cplx r : roots) {
    bool merged = false;
    for (auto& cl : clusters) {
      if (std::abs(cl.value - r) <= radius) {
        cl.value = (cl.value * double(cl.multiplicity) + r) / double(cl.multiplicity + 1);
        ++cl.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({r, 1});
  }
  return clusters;
}

}  // namespace langsov
