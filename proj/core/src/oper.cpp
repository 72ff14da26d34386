#include "langsov/oper.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace langsov {

bool WeightVector::resonant(cplx j, double tol) {
  cplx two_j_plus_1 = 2.0 * j + 1.0;
  return std::abs(two_j_plus_1.imag()) < tol &&
         std::abs(two_j_plus_1.real() - std::round(two_j_plus_1.real())) < tol;
}

WeightVector::WeightVector(cvec weights, bool allow_resonant_)
    : j(std::move(weights)), allow_resonant(allow_resonant_) {
  if (j.empty()) throw NumericError("ConfigError", "empty weight vector");
  if (!allow_resonant) {
    for (cplx w : j)
      if (resonant(w))
        throw NumericError("ResonantWeight",
                           "2j+1 integer within 1e-9; set the resonance override to proceed");
  }
}

cplx WeightVector::big_j(int i) const {
  cplx s = 0.0;
  for (size_t r = 0; r + 1 < j.size(); ++r) s += j[r];
  return s - j_sector(i);
}

PunctureConfig::PunctureConfig(cvec punctures, bool infinity)
    : z(std::move(punctures)), infinity_puncture(infinity) {
  if (n_total() < 4) throw NumericError("ConfigError", "need at least 4 punctures");
  for (size_t r = 0; r < z.size(); ++r)
    for (size_t s = r + 1; s < z.size(); ++s)
      if (std::abs(z[r] - z[s]) < 1e-6)
        throw NumericError("ConfigError", "punctures closer than 1e-6");
}

double PunctureConfig::min_separation() const {
  double d = 1e300;
  for (size_t r = 0; r < z.size(); ++r)
    for (size_t s = r + 1; s < z.size(); ++s) d = std::min(d, std::abs(z[r] - z[s]));
  return d;
}

cplx PunctureConfig::centroid() const {
  cplx c = 0.0;
  for (cplx p : z) c += p;
  return c / double(z.size());
}

double PunctureConfig::spread() const {
  double d = 0.0;
  for (size_t r = 0; r < z.size(); ++r)
    for (size_t s = r + 1; s < z.size(); ++s) d = std::max(d, std::abs(z[r] - z[s]));
  return d;
}

cplx OperPotential::eval(cplx y) const {
  cplx t = 0.0;
  for (size_t r = 0; r < config.z.size(); ++r) {
    cplx d = y - config.z[r];
    if (std::abs(d) < 1e-12) throw NumericError("AtPuncture", "t(y) evaluated at a puncture");
    t += weights.delta(r) / (d * d) + E[r] / d;
  }
  return t;
}

cplx OperPotential::eval_hatted(cplx w) const {
  if (std::abs(w) < 1e-12) {
    // limit value from the Laurent data: delta_n/w^2 + E_inf/w + ... is
    // singular; the caller wants regular points only
    throw NumericError("AtPuncture", "t_hat(w) evaluated at w = 0");
  }
  cplx y = 1.0 / w;
  cplx w2 = w * w;
  return eval(y) / (w2 * w2);
}

double OperPotential::constraint_residual() const {
  cplx s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (size_t r = 0; r < config.z.size(); ++r) {
    s0 += E[r];
    s1 += config.z[r] * E[r] + weights.delta(r);
    s2 += config.z[r] * config.z[r] * E[r] + 2.0 * weights.delta(r) * config.z[r];
  }
  double res = std::abs(s0);
  if (config.infinity_puncture) {
    res = std::max(res, std::abs(s1 - weights.delta(weights.size() - 1)));
  } else {
    res = std::max(res, std::abs(s1));
    res = std::max(res, std::abs(s2));
  }
  return res;
}

std::pair<cplx, cplx> OperPotential::infinity_data() const {
  cplx d_inf = 0.0, e_inf = 0.0;
  for (size_t r = 0; r < config.z.size(); ++r) {
    d_inf += config.z[r] * E[r] + weights.delta(r);
    e_inf += config.z[r] * config.z[r] * E[r] + 2.0 * weights.delta(r) * config.z[r];
  }
  return {d_inf, e_inf};
}

cvec OperPotential::laurent_tail(size_t r, int order) const {
  cvec tau(size_t(order) + 1, cplx(0.0));
  tau[0] = E[r];
  for (size_t s = 0; s < config.z.size(); ++s) {
    if (s == r) continue;
    cplx d = config.z[s] - config.z[r];
    cplx invd = 1.0 / d;
    cplx p1 = invd;  // 1/(z_s - z_r)^{m+1}
    for (int m = 0; m < order; ++m) {
      p1 *= invd;  // now 1/(z_s-z_r)^{m+2}
      tau[size_t(m) + 1] += weights.delta(s) * double(m + 1) * p1 - E[s] * p1 * d;
    }
  }
  return tau;
}

cvec OperPotential::laurent_tail_infinity(int order) const {
  // t_hat(w) = sum_r [ delta_r w^{-2} / (1 - z_r w)^2 + E_r w^{-3} / (1 - z_r w) ]
  // with sum E_r = 0; coefficient of w^p (p >= -1):
  //   sum_r [ (p+3) delta_r z_r^{p+2} + E_r z_r^{p+3} ].
  cvec tau(size_t(order) + 1, cplx(0.0));
  for (size_t r = 0; r < config.z.size(); ++r) {
    cplx zp = config.z[r];  // z^{p+2} for p = -1
    for (int p = -1; p < order; ++p) {
      tau[size_t(p) + 1] += double(p + 3) * weights.delta(r) * zp + E[r] * zp * config.z[r];
      zp *= config.z[r];
    }
  }
  return tau;
}

cvec OperPotential::taylor(cplx c, int order) const {
  cvec t(size_t(order) + 1, cplx(0.0));
  for (size_t r = 0; r < config.z.size(); ++r) {
    cplx d = config.z[r] - c;
    cplx invd = 1.0 / d;
    cplx p1 = invd;  // 1/(z_r-c)^{p+1}
    for (int p = 0; p <= order; ++p) {
      cplx p2 = p1 * invd;  // 1/(z_r-c)^{p+2}
      t[size_t(p)] += weights.delta(r) * double(p + 1) * p2 - E[r] * p1;
      p1 = p2;
    }
  }
  return t;
}

OperPotential embed_accessory(const cvec& free, const PunctureConfig& config,
                              const WeightVector& weights) {
  const size_t nf = config.n_finite();
  if (weights.size() != config.n_total())
    throw NumericError("ConfigError", "weight count must match puncture count");
  const size_t nc = config.infinity_puncture ? 2 : 3;  // constrained residues
  if (free.size() + nc != nf)
    throw NumericError("ConfigError", "free coordinate count must be n_total - 3");

  // Right-hand side of the moment constraints.
  cplx sum_delta = 0.0, sum_zdelta = 0.0;
  for (size_t r = 0; r < nf; ++r) {
    sum_delta += weights.delta(r);
    sum_zdelta += config.z[r] * weights.delta(r);
  }
  cvec rhs(nc);
  rhs[0] = 0.0;
  rhs[1] = config.infinity_puncture ? weights.delta(weights.size() - 1) - sum_delta
                                    : -sum_delta;
  if (nc == 3) rhs[2] = -2.0 * sum_zdelta;
  // subtract the contribution of the free residues
  for (size_t r = 0; r < free.size(); ++r) {
    rhs[0] -= free[r];
    rhs[1] -= config.z[r] * free[r];
    if (nc == 3) rhs[2] -= config.z[r] * config.z[r] * free[r];
  }

  Eigen::MatrixXcd vand(nc, nc);
  for (size_t col = 0; col < nc; ++col) {
    cplx zc = config.z[free.size() + col];
    cplx p = 1.0;
    for (size_t row = 0; row < nc; ++row) {
      vand(long(row), long(col)) = p;
      p *= zc;
    }
  }
  Eigen::VectorXcd b(nc);
  for (size_t i = 0; i < nc; ++i) b[long(i)] = rhs[i];
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(vand);
  if (!lu.isInvertible())
    throw NumericError("SingularConstraintSystem", "coincident trailing punctures");
  Eigen::VectorXcd sol = lu.solve(b);

  OperPotential oper{config, weights, cvec(nf), free};
  for (size_t r = 0; r < free.size(); ++r) oper.E[r] = free[r];
  for (size_t i = 0; i < nc; ++i) oper.E[free.size() + i] = sol[long(i)];
  return oper;
}

}  // namespace langsov
