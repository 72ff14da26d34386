#include "langsov/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace langsov {

Mat2 MonodromyRep::ordered_product() const {
  Mat2 p = Mat2::Identity();
  for (const auto& m : M) p = m * p;
  return p;
}

double MonodromyRep::trace_imag_max() const {
  double t = 0.0;
  for (const auto& m : generators()) t = std::max(t, std::abs(std::imag(m.trace())));
  t = std::max(t, std::abs(std::imag(M_inf.trace())));
  return t;
}

Mat2 monodromy_matrix(const OperPotential& oper, const PathSpec& loop, double tol) {
  if (std::abs(loop.start() - loop.end()) > 1e-9)
    throw NumericError("ConfigError", "monodromy loop is not closed");
  auto t_eval = [&oper](cplx y) { return oper.ode_q(y); };
  return transport_ode(t_eval, loop, tol);
}

namespace {

using ldc = std::complex<long double>;
using LdMat2 = Eigen::Matrix<ldc, 2, 2>;

LdMat2 widen(const Mat2& m) {
  LdMat2 w;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) w(i, k) = ldc(m(i, k).real(), m(i, k).imag());
  return w;
}

Mat2 narrow(const LdMat2& m) {
  Mat2 w;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) w(i, k) = cplx(double(m(i, k).real()), double(m(i, k).imag()));
  return w;
}

LdMat2 ld_inverse(const LdMat2& m) {
  LdMat2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

std::vector<double> lasso_radii(const PunctureConfig& config) {
  const cvec& z = config.z;
  std::vector<double> rad(z.size());
  for (size_t r = 0; r < z.size(); ++r) {
    double d = 1e300;
    for (size_t s = 0; s < z.size(); ++s)
      if (s != r) d = std::min(d, std::abs(z[r] - z[s]));
    rad[r] = 0.3 * d;
  }
  return rad;
}

double stem_clearance(cplx x0, const cvec& z, const std::vector<double>& rad) {
  double worst = 1e300;
  for (size_t r = 0; r < z.size(); ++r) {
    cplx dir = z[r] - x0;
    double len = std::abs(dir);
    for (size_t s = 0; s < z.size(); ++s) {
      if (s == r) continue;
      double t = std::clamp((std::conj(dir) * (z[s] - x0)).real() / (len * len), 0.0, 1.0);
      double d = std::abs(z[s] - (x0 + t * dir));
      worst = std::min(worst, d / rad[s]);
    }
  }
  return worst;
}

// Angular slot order seen from x0: increasing arg relative to the cluster
// direction.  Slot 0 is the rightmost factor of the ordered product.
std::vector<size_t> slot_order(const cvec& z, cplx x0, cplx c0) {
  std::vector<size_t> order(z.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::arg((z[a] - x0) / (c0 - x0)) < std::arg((z[b] - x0) / (c0 - x0));
  });
  return order;
}

int inversion_count(const std::vector<size_t>& order) {
  int inv = 0;
  for (size_t i = 0; i < order.size(); ++i)
    for (size_t k = i + 1; k < order.size(); ++k)
      if (order[i] > order[k]) ++inv;
  return inv;
}

}  // namespace

cplx default_basepoint(const PunctureConfig& config) {
  const cvec& z = config.z;
  cplx c = config.centroid();
  double rmax = 0.0;
  for (cplx p : z) rmax = std::max(rmax, std::abs(p - c));
  double h = std::max(1.4 * rmax, 0.7 * config.spread());
  if (h == 0.0) h = 1.0;
  auto rad = lasso_radii(config);
  // candidates above and below the cluster; prefer clear stems and an
  // angular order close to the index order (fewer braid conjugations)
  cplx best = c - cplx(0, h);
  double best_score = -1e9;
  for (int side : {-1, +1}) {
    for (int k = -6; k <= 6; ++k) {
      cplx cand = c + cplx(0.22 * k * h, side * h);
      double clear = stem_clearance(cand, z, rad);
      int inv = inversion_count(slot_order(z, cand, c));
      double score = std::min(clear, 2.0) - 0.35 * inv;
      if (score > best_score) {
        best_score = score;
        best = cand;
      }
    }
  }
  return best;
}

MonodromyRep monodromy_rep(const OperPotential& oper, double tol) {
  return monodromy_rep(oper, default_basepoint(oper.config), tol);
}

MonodromyRep monodromy_rep(const OperPotential& oper, cplx x0, double tol) {
  const cvec& z = oper.config.z;
  const size_t m = z.size();
  for (cplx p : z)
    if (std::abs(p - x0) < 1e-9)
      throw NumericError("ConfigError", "basepoint coincides with a puncture");
  auto rad = lasso_radii(oper.config);
  auto t_eval = [&oper](cplx y) { return oper.ode_q(y); };
  cplx c0 = oper.config.centroid();

  auto order = slot_order(z, x0, c0);

  MonodromyRep rep;
  rep.basepoint = x0;
  rep.loops.resize(m);
  rep.M_gen.resize(m);
  std::vector<LdMat2> slot_mat(m);
  std::vector<size_t> slot_punct(m);

  for (size_t s = 0; s < m; ++s) {
    size_t r = order[s];
    double phi = std::arg(x0 - z[r]);
    cplx entry = z[r] + rad[r] * std::exp(cplx(0, phi));
    PathSpec stem = PathSpec::from(x0);
    stem.line_to(entry);
    Mat2 S = transport_ode(t_eval, stem, tol);
    Mat2 C = transport_ode(t_eval, PathSpec::circle(z[r], rad[r], phi), tol);
    Mat2 raw = sl2_inverse(S) * C * S;
    raw /= std::sqrt(raw.determinant());
    rep.M_gen[r] = raw;
    slot_mat[s] = widen(raw);
    slot_punct[s] = r;
    rep.loops[r] = stem.then(PathSpec::circle(z[r], rad[r], phi)).then(stem.reversed());
  }

  // Reorder the slots to puncture-index order.  An adjacent swap
  // (A at slot s, B at slot s+1) -> (B, B A B^{-1}) preserves the ordered
  // product and keeps each matrix in its puncture's conjugacy class.  The
  // conjugations amplify roundoff quadratically in the matrix norms, hence
  // the extended precision here.
  for (size_t pass = 0; pass + 1 < m; ++pass) {
    for (size_t s = 0; s + 1 < m; ++s) {
      if (slot_punct[s] > slot_punct[s + 1]) {
        LdMat2 A = slot_mat[s], B = slot_mat[s + 1];
        slot_mat[s] = B;
        slot_mat[s + 1] = B * A * ld_inverse(B);
        std::swap(slot_punct[s], slot_punct[s + 1]);
      }
    }
  }
  rep.M.resize(m);
  std::vector<LdMat2> indexed(m);
  for (size_t s = 0; s < m; ++s) {
    indexed[slot_punct[s]] = slot_mat[s];
    rep.M[slot_punct[s]] = narrow(slot_mat[s]);
  }

  // loop around infinity: the big clockwise circle through the basepoint
  double h = std::abs(x0 - c0);
  Mat2 minf = transport_ode(t_eval, PathSpec::circle(c0, h, std::arg(x0 - c0), -1.0), tol);
  minf /= std::sqrt(minf.determinant());
  rep.M_inf = minf;

  LdMat2 prod = widen(rep.M_inf);
  for (size_t s = m; s-- > 0;) prod = prod * indexed[s];
  // prod = M_inf * M_{m-1} * ... * M_1 evaluated right-to-left above
  LdMat2 eye = LdMat2::Identity();
  double res_plus = double((prod - eye).cwiseAbs().maxCoeff());
  double res_minus = double((prod + eye).cwiseAbs().maxCoeff());
  rep.sign = res_plus <= res_minus ? +1 : -1;
  rep.product_residual = std::min(res_plus, res_minus);

  rep.max_det_error = std::abs(rep.M_inf.determinant() - 1.0);
  for (const auto& mat : rep.M)
    rep.max_det_error = std::max(rep.max_det_error, std::abs(mat.determinant() - 1.0));
  return rep;
}

}  // namespace langsov
