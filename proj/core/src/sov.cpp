#include "langsov/sov.hpp"

#include <cmath>

#include "langsov/roots.hpp"

namespace langsov {

cvec kappa(const PunctureConfig& config, const cvec& y) {
  const cvec& z = config.z;
  cvec out(z.size());
  for (size_t r = 0; r < z.size(); ++r) {
    cplx num = 1.0;
    for (cplx yk : y) {
      if (std::abs(z[r] - yk) < 1e-12)
        throw NumericError("AtPuncture", "separated variable at a puncture");
      num *= (z[r] - yk);
    }
    cplx den = 1.0;
    for (size_t s = 0; s < z.size(); ++s)
      if (s != r) den *= (z[r] - z[s]);
    out[r] = num / den;
  }
  return out;
}

MomentumPoint forward_vars(const SklyaninPoint& pt, const PunctureConfig& config) {
  if (std::abs(pt.rho) == 0.0)
    throw NumericError("DegenerateLeadingCoefficient", "rho must be nonzero");
  auto kap = kappa(config, pt.y);
  MomentumPoint mp;
  mp.k.resize(kap.size());
  for (size_t r = 0; r < kap.size(); ++r) mp.k[r] = pt.rho * kap[r];
  return mp;
}

SovKernel::SovKernel(cvec nodes) : nodes_(std::move(nodes)) {
  node_poly_.resize(nodes_.size());
  for (size_t r = 0; r < nodes_.size(); ++r) {
    cvec p = {1.0};
    for (size_t s = 0; s < nodes_.size(); ++s) {
      if (s == r) continue;
      cvec next(p.size() + 1, cplx(0.0));
      for (size_t m = 0; m < p.size(); ++m) {
        next[m + 1] += p[m];
        next[m] -= nodes_[s] * p[m];
      }
      p = next;
    }
    node_poly_[r] = p;
  }
}

cvec SovKernel::numerator(const cvec& k) const {
  cvec acc(nodes_.size(), cplx(0.0));
  for (size_t r = 0; r < nodes_.size(); ++r)
    for (size_t m = 0; m < acc.size(); ++m) acc[m] += k[r] * node_poly_[r][m];
  return acc;
}

SovKernel::Separated SovKernel::separate(const cvec& k, int constraints) const {
  cvec num = numerator(k);
  for (int c = 0; c < constraints; ++c) num.pop_back();  // vanish on the delta support
  Separated sep;
  sep.lead = num.back();
  if (std::abs(sep.lead) == 0.0)
    throw NumericError("DegenerateLeadingCoefficient", "leading coefficient vanishes");
  sep.y = poly_roots(num);
  return sep;
}

SklyaninPoint inverse_vars(const MomentumPoint& mp, const PunctureConfig& config,
                           double ctol) {
  double kmax = 0.0;
  cplx ksum = 0.0;
  for (cplx kr : mp.k) {
    kmax = std::max(kmax, std::abs(kr));
    ksum += kr;
  }
  if (kmax == 0.0) throw NumericError("ConstraintViolated", "zero momentum vector");
  if (std::abs(ksum) > ctol * kmax)
    throw NumericError("ConstraintViolated", "sum k_r does not vanish");
  SovKernel kernel(config.z);
  auto sep = kernel.separate(mp.k, 1);
  SklyaninPoint pt;
  pt.y = sep.y;
  pt.rho = sep.lead;
  return pt;
}

double sklyanin_density(const PunctureConfig& config, const cvec& y) {
  auto kap = kappa(config, y);
  double dens = 1.0;
  const cvec& z = config.z;
  for (size_t r = 0; r < z.size(); ++r)
    for (size_t s = r + 1; s < z.size(); ++s) dens *= std::norm(z[r] - z[s]);
  for (size_t k = 0; k < y.size(); ++k)
    for (size_t l = k + 1; l < y.size(); ++l) dens *= std::norm(y[k] - y[l]);
  for (const cplx& kr : kap) dens /= std::norm(kr);
  return dens;
}

double sov_jacobian_closed_form(const PunctureConfig& config, const cvec& y) {
  auto kap = kappa(config, y);
  const cvec& z = config.z;
  double val = 1.0;
  for (size_t k = 0; k < y.size(); ++k)
    for (size_t l = k + 1; l < y.size(); ++l) val *= std::norm(y[k] - y[l]);
  for (size_t r = 0; r < z.size(); ++r)
    for (size_t s = r + 1; s < z.size(); ++s) val /= std::norm(z[r] - z[s]);
  // |kappa_{n-1}|^{2(n-2)}, n counting the puncture at infinity
  double kn = std::norm(kap.back());
  for (size_t p = 0; p + 1 < z.size(); ++p) val /= kn;
  return val;
}

double jacobian_check(const PunctureConfig& config, const cvec& y) {
  const size_t d = y.size();
  const size_t nf = config.n_finite();
  if (d + 2 != nf)
    throw NumericError("ConfigError", "separated point has wrong dimension");
  auto lambda = [&](const cvec& yy) {
    auto kap = kappa(config, yy);
    cvec lam(d);
    for (size_t r = 0; r < d; ++r) lam[r] = kap[r + 1] / kap[nf - 1];
    return lam;
  };
  // complex central differences of the holomorphic chart
  double scale = 0.0;
  for (cplx yk : y) scale = std::max(scale, std::abs(yk));
  const double h = 1e-5 * (1.0 + scale);
  Eigen::MatrixXcd jac(d, d);
  for (size_t k = 0; k < d; ++k) {
    cvec yp = y, ym = y;
    yp[k] += h;
    ym[k] -= h;
    auto lp = lambda(yp), lm = lambda(ym);
    for (size_t r = 0; r < d; ++r) jac(long(r), long(k)) = (lp[r] - lm[r]) / (2.0 * h);
  }
  double fd = std::norm(jac.determinant());  // real Jacobian = |det_C|^2
  if (!std::isfinite(fd) || fd == 0.0)
    throw NumericError("NearSingularJacobian", "chart Jacobian degenerate");
  double closed = sov_jacobian_closed_form(config, y);
  return std::abs(fd - closed) / std::max(fd, closed);
}

cplx twisted_weight(const PunctureConfig& config, const WeightVector& weights, int sector,
                    const cvec& k) {
  cplx w = 1.0;
  for (size_t r = 0; r < k.size(); ++r) {
    if (std::abs(k[r]) == 0.0) throw NumericError("ZeroComponent", "k_r vanishes");
    w *= mod_pow(k[r], 2.0 * weights.j[r] + 2.0);
  }
  cplx rho = 0.0;
  for (size_t r = 0; r < k.size(); ++r) rho += config.z[r] * k[r];
  if (std::abs(rho) == 0.0) throw NumericError("ZeroComponent", "rho(k) vanishes");
  w *= mod_pow(rho, -2.0 * (weights.j_sector(sector) + 1.0));
  return w;
}

double separated_state(const ChiEvaluator& chi, const cvec& y) {
  double phi = 1.0;
  for (cplx yk : y) phi *= chi.value(yk);
  return phi;
}

}  // namespace langsov
