#include "langsov/frobenius.hpp"

#include <cmath>

namespace langsov {
namespace {

// Coefficients of x^rho (1 + sum_{m>=1} c_m x^m) solving s'' = t s with
// t = delta/x^2 + sum_{m>=-1} tau_m x^m (indicial rho(rho-1) = delta):
//   c_q q (2 rho + q - 1) = sum_{p=0}^{q-1} tau_{q-2-p} c_p.
cvec recurrence(cplx rho, const cvec& tau, int order) {
  cvec c(size_t(order) + 1, cplx(0.0));
  c[0] = 1.0;
  for (int q = 1; q <= order; ++q) {
    cplx den = double(q) * (2.0 * rho + double(q - 1));
    if (std::abs(den) < 1e-8)
      throw NumericError("RecurrenceBreakdown",
                         "indicial denominator vanishes (resonant weight)");
    cplx acc = 0.0;
    for (int p = 0; p < q; ++p) acc += tau[size_t(q - 1 - p)] * c[size_t(p)];
    c[size_t(q)] = acc / den;
  }
  return c;
}

double tail_estimate(const cvec& c, double radius) {
  // geometric extrapolation from the last coefficients
  const size_t n = c.size() - 1;
  double last = std::abs(c[n]) * std::pow(radius, double(n));
  double prev = std::abs(c[n - 1]) * std::pow(radius, double(n - 1));
  double ratio = prev > 0 ? std::min(0.9, last / prev) : 0.5;
  return last * ratio / (1.0 - ratio) + last;
}

}  // namespace

std::pair<cplx, cplx> FrobeniusPair::eval(int i, cplx x) const {
  const cvec& c = (i == 1) ? a : b;
  const cplx rho = (i == 1) ? exponent1 : exponent2;
  cplx s = 0.0, ds = 0.0;  // series and its x-derivative
  for (size_t m = c.size(); m-- > 1;) {
    s = s * x + c[m];
    ds = ds * x + double(m) * c[m];
  }
  s = s * x + c[0];
  cplx xr = std::pow(x, rho);
  return {xr * s, xr / x * (rho * s + x * ds)};
}

cplx FrobeniusPair::series_value(int i, cplx x) const {
  const cvec& c = (i == 1) ? a : b;
  cplx s = 0.0;
  for (size_t m = c.size(); m-- > 0;) s = s * x + c[m];
  return s;
}

FrobeniusPair frobenius_series(const OperPotential& oper, size_t r, int order) {
  const size_t nf = oper.config.n_finite();
  const bool at_infinity = (r == nf);
  if (at_infinity && !oper.config.infinity_puncture)
    throw NumericError("ConfigError", "no puncture at infinity in this configuration");
  if (!at_infinity && r >= nf) throw NumericError("ConfigError", "puncture index out of range");

  cplx j = at_infinity ? oper.weights.j.back() : oper.weights.j[r];
  // The override flag only admits resonant weights into potentials; a local
  // series basis at such a puncture would need logarithms either way.
  if (WeightVector::resonant(j))
    throw NumericError("ResonantWeight", "Frobenius series needs logarithms at 2j+1 integer");

  double dist = 1e300;
  if (at_infinity) {
    for (cplx z : oper.config.z)
      if (std::abs(z) > 1e-12) dist = std::min(dist, 1.0 / std::abs(z));
  } else {
    for (size_t s = 0; s < nf; ++s)
      if (s != r) dist = std::min(dist, std::abs(oper.config.z[s] - oper.config.z[r]));
    if (oper.config.infinity_puncture) {
      // infinity is at local coordinate infinity; no constraint
    } else {
      // infinity ordinary: series radius still set by the other punctures
    }
  }
  const double r_loc = 0.2 * dist;

  FrobeniusPair fp;
  fp.puncture = int(r);
  fp.exponent1 = -j;
  fp.exponent2 = 1.0 + j;
  fp.r_loc = r_loc;

  int N = std::max(order, 8);
  const int cap = 240;
  for (;;) {
    cvec tau = at_infinity ? oper.laurent_tail_infinity(N) : oper.laurent_tail(r, N);
    fp.a = recurrence(fp.exponent1, tau, N);
    fp.b = recurrence(fp.exponent2, tau, N);
    double t1 = tail_estimate(fp.a, r_loc / 2);
    double t2 = tail_estimate(fp.b, r_loc / 2);
    fp.tail_bound = std::max(t1, t2);
    if (fp.tail_bound < 1e-12 || N >= cap) break;
    N = std::min(cap, N * 2);
  }
  return fp;
}

}  // namespace langsov
