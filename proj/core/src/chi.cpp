#include "langsov/chi.hpp"

#include <algorithm>
#include <cmath>

namespace langsov {

struct ChiEvaluator::Patch {
  cplx center;
  double use_radius = 0.0;
  FrobeniusPair fp;
  Mat2 h_local = Mat2::Zero();
};

struct ChiEvaluator::Disk {
  cplx center;
  cvec u1, u2;  // Taylor germ basis at the center
  Mat2 h_local = Mat2::Zero();
};

struct ChiEvaluator::Atlas {
  std::vector<Patch> patches;
  Patch inf_patch;
  double r_far = 0.0;

  struct Cell {
    cplx center;
    double half = 0.0;
    int child0 = -1;  // four children child0..child0+3, or -1 for leaf
    int disk = -1;
  };
  std::vector<Cell> cells;
  std::vector<Disk> disks;

  int find_disk(cplx y) const {
    if (cells.empty()) return -1;
    int idx = 0;
    for (;;) {
      const Cell& c = cells[size_t(idx)];
      if (c.child0 < 0) return c.disk;
      int q = (y.real() >= c.center.real() ? 1 : 0) + (y.imag() >= c.center.imag() ? 2 : 0);
      idx = c.child0 + q;
    }
  }
};

namespace {

// Taylor coefficients of the germ basis u'' = t u at an ordinary point:
// u1(0)=1, u1'(0)=0 and u2(0)=0, u2'(0)=1.
void taylor_germ(const cvec& t_coeff, int order, cvec& u1, cvec& u2) {
  u1.assign(size_t(order) + 1, cplx(0.0));
  u2.assign(size_t(order) + 1, cplx(0.0));
  u1[0] = 1.0;
  u2[1] = 1.0;
  for (int m = 0; m + 2 <= order; ++m) {
    cplx acc1 = 0.0, acc2 = 0.0;
    for (int p = 0; p <= m && p < int(t_coeff.size()); ++p) {
      acc1 += t_coeff[size_t(p)] * u1[size_t(m - p)];
      acc2 += t_coeff[size_t(p)] * u2[size_t(m - p)];
    }
    double den = double(m + 1) * double(m + 2);
    u1[size_t(m) + 2] = acc1 / den;
    u2[size_t(m) + 2] = acc2 / den;
  }
}

cplx horner(const cvec& c, cplx x) {
  cplx acc = 0.0;
  for (size_t m = c.size(); m-- > 0;) acc = acc * x + c[m];
  return acc;
}

}  // namespace

double ChiEvaluator::quad_form(const Mat2& h, cplx v1, cplx v2) const {
  return h(0, 0).real() * std::norm(v1) + h(1, 1).real() * std::norm(v2) +
         2.0 * std::real(h(0, 1) * v1 * std::conj(v2));
}

cplx ChiEvaluator::default_reference(const PunctureConfig& config) {
  return config.centroid() + cplx(0, 0.37) * config.spread();
}

ChiEvaluator::ChiEvaluator(OperPotential oper, MonodromyRep rep, HermitianPairing pairing,
                           cplx y_ref, double tol, bool normalize)
    : oper_(std::move(oper)), rep_(std::move(rep)), y_ref_(y_ref) {
  // Continuation acts on germs by s -> T^t s, so chi = s^T H s~ is
  // single-valued iff T H T^dag = H; the invariant pairing satisfies
  // M^T H M~ = H instead, and for invertible H the adjugate of its
  // conjugate satisfies the first condition.
  Mat2 k = pairing.H.conjugate();
  Mat2 hc;
  hc << k(1, 1), -k(0, 1), -k(1, 0), k(0, 0);
  if (hc.norm() < 1e-12)
    throw NumericError("PairingDegenerate", "invariant pairing is degenerate");
  h_chi_ = normalize ? Mat2(hc / hc.norm()) : hc;

  auto atlas = std::make_shared<Atlas>();
  const cvec& z = oper_.config.z;
  auto q_eval = [this](cplx y) { return oper_.ode_q(y); };
  const cplx x0 = rep_.basepoint;

  // Frobenius patches at the finite punctures
  atlas->patches.resize(z.size());
  for (size_t r = 0; r < z.size(); ++r) {
    Patch& p = atlas->patches[r];
    p.center = z[r];
    p.fp = frobenius_series(oper_, r, 12);
    p.use_radius = 0.5 * p.fp.r_loc;
    double match = 0.6 * p.fp.r_loc;
    double phi = std::arg(x0 - z[r]);
    cplx xm = match * std::exp(cplx(0, phi));
    PathSpec path = route_segment(x0, z[r] + xm, z, 0.45 * p.fp.r_loc);
    Mat2 germ = transport_ode(q_eval, path, tol);
    auto [f1, d1] = p.fp.eval(1, xm);
    auto [f2, d2] = p.fp.eval(2, xm);
    Mat2 local;
    local << f1, f2, d1, d2;
    Mat2 conn = local.inverse() * germ;
    p.h_local = conn * h_chi_ * conn.adjoint();
  }

  // Patch at infinity in the w = 1/y chart (only with an infinity puncture;
  // in the all-finite picture infinity is an ordinary point and the far
  // field uses an ordinary Taylor disk in w via the same machinery).
  double zmax = 0.0;
  for (cplx p : z) zmax = std::max(zmax, std::abs(p));
  if (oper_.config.infinity_puncture) {
    Patch& p = atlas->inf_patch;
    p.fp = frobenius_series(oper_, z.size(), 12);
    p.use_radius = 0.5 * p.fp.r_loc;
    atlas->r_far = 1.0 / p.use_radius;
    double match = 0.6 * p.fp.r_loc;
    cplx wm = match * std::exp(cplx(0, std::arg(1.0 / x0)));
    cplx ym = 1.0 / wm;
    PathSpec path = route_segment(x0, ym, z, 0.4 * oper_.config.min_separation());
    Mat2 germ = transport_ode(q_eval, path, tol);
    // chart transform u(w) = w s(1/w):  u = w s,  u' = s - s'/w
    Mat2 ug;
    for (int a = 0; a < 2; ++a) {
      cplx s = germ(0, a), ds = germ(1, a);
      ug(0, a) = wm * s;
      ug(1, a) = s - ds / wm;
    }
    auto [f1, d1] = p.fp.eval(1, wm);
    auto [f2, d2] = p.fp.eval(2, wm);
    Mat2 local;
    local << f1, f2, d1, d2;
    Mat2 conn = local.inverse() * ug;
    p.h_local = conn * h_chi_ * conn.adjoint();
  } else {
    // infinity ordinary: Taylor germ of the hatted equation at w = 0
    Patch& p = atlas->inf_patch;
    p.use_radius = 0.1 / std::max(zmax, 1e-9);
    atlas->r_far = 1.0 / p.use_radius;
    p.fp.exponent1 = 0.0;
    p.fp.exponent2 = 1.0;
    cvec that = oper_.laurent_tail_infinity(64);
    // delta_n = 0 and E_inf = 0 here, so that[0] (the w^{-1} term) vanishes
    cvec tw(that.begin() + 1, that.end());
    taylor_germ(tw, 48, p.fp.a, p.fp.b);
    cplx wm = 0.6 * p.use_radius * std::exp(cplx(0, std::arg(1.0 / x0)));
    cplx ym = 1.0 / wm;
    PathSpec path = route_segment(x0, ym, z, 0.4 * oper_.config.min_separation());
    Mat2 germ = transport_ode(q_eval, path, tol);
    Mat2 ug;
    for (int a = 0; a < 2; ++a) {
      cplx s = germ(0, a), ds = germ(1, a);
      ug(0, a) = wm * s;
      ug(1, a) = s - ds / wm;
    }
    cplx f1 = horner(p.fp.a, wm), f2 = horner(p.fp.b, wm);
    cvec da(p.fp.a.size() - 1), db(p.fp.b.size() - 1);
    for (size_t m = 1; m < p.fp.a.size(); ++m) da[m - 1] = double(m) * p.fp.a[m];
    for (size_t m = 1; m < p.fp.b.size(); ++m) db[m - 1] = double(m) * p.fp.b[m];
    Mat2 local;
    local << f1, f2, horner(da, wm), horner(db, wm);
    Mat2 conn = local.inverse() * ug;
    p.h_local = conn * h_chi_ * conn.adjoint();
  }

  // Quadtree of Taylor disks over the bulk
  cplx c0 = oper_.config.centroid();
  double box_half = 1.05 * (atlas->r_far + std::abs(c0));
  double min_half = 0.01 * oper_.config.min_separation();
  auto clearance = [&z](cplx c) {
    double d = 1e300;
    for (cplx p : z) d = std::min(d, std::abs(c - p));
    return d;
  };
  auto patch_floor = [&](cplx c) {
    // use radius of the nearest puncture patch
    double d = 1e300;
    size_t best = 0;
    for (size_t r = 0; r < z.size(); ++r)
      if (std::abs(c - z[r]) < d) d = std::abs(c - z[r]), best = r;
    return atlas->patches[best].use_radius;
  };

  struct Pending {
    int cell;
  };
  atlas->cells.push_back({c0, box_half, -1, -1});
  std::vector<int> stack = {0};
  std::vector<int> leaf_cells;
  while (!stack.empty()) {
    int ci = stack.back();
    stack.pop_back();
    cplx cc = atlas->cells[size_t(ci)].center;
    double half = atlas->cells[size_t(ci)].half;
    double clear = clearance(cc);
    bool outside_far = std::abs(cc) - half * 1.5 > atlas->r_far;
    if (half > 0.3 * clear && half > min_half && !outside_far) {
      int base = int(atlas->cells.size());
      atlas->cells[size_t(ci)].child0 = base;
      double h2 = half / 2;
      for (int q = 0; q < 4; ++q) {
        cplx off((q & 1) ? h2 : -h2, (q & 2) ? h2 : -h2);
        atlas->cells.push_back({cc + off, h2, -1, -1});
        stack.push_back(base + q);
      }
      continue;
    }
    if (outside_far) continue;              // far field handled by the w chart
    if (clear < 0.5 * patch_floor(cc)) continue;  // deep inside a patch core
    leaf_cells.push_back(ci);
  }

  // Germs at the disk centers: hop from the nearest already-computed germ.
  std::sort(leaf_cells.begin(), leaf_cells.end(), [&](int a, int b) {
    return std::abs(atlas->cells[size_t(a)].center - x0) <
           std::abs(atlas->cells[size_t(b)].center - x0);
  });
  std::vector<cplx> done_pos;
  std::vector<Mat2> done_germ;
  done_pos.push_back(x0);
  done_germ.push_back(Mat2::Identity());
  atlas->disks.reserve(leaf_cells.size());
  const int taylor_order = 40;
  for (int ci : leaf_cells) {
    cplx c = atlas->cells[size_t(ci)].center;
    size_t nearest = 0;
    double dmin = 1e300;
    for (size_t i = 0; i < done_pos.size(); ++i) {
      double d = std::abs(done_pos[i] - c);
      if (d < dmin) dmin = d, nearest = i;
    }
    cplx from = done_pos[nearest];
    double seg_clear = 0.4 * std::min(clearance(from) + 0.0, clearance(c));
    PathSpec hop = route_segment(from, c, z, seg_clear);
    Mat2 germ = transport_ode(q_eval, hop, tol) * done_germ[nearest];
    done_pos.push_back(c);
    done_germ.push_back(germ);

    Disk d;
    d.center = c;
    cvec tc = oper_.taylor(c, taylor_order);
    taylor_germ(tc, taylor_order, d.u1, d.u2);
    d.h_local = germ * h_chi_ * germ.adjoint();
    atlas->cells[size_t(ci)].disk = int(atlas->disks.size());
    atlas->disks.push_back(std::move(d));
  }
  atlas_ = atlas;

  // Normalize chi(y_ref) = 1 (> 0 in particular).
  if (!normalize) return;
  double v = value(y_ref_);
  if (std::abs(v) < 1e-12)
    throw NumericError("ZeroAtReference", "chi vanishes at the normalization point");
  double scale = 1.0 / v;
  auto mutable_atlas = std::const_pointer_cast<Atlas>(atlas_);
  for (auto& p : mutable_atlas->patches) p.h_local *= scale;
  mutable_atlas->inf_patch.h_local *= scale;
  for (auto& d : mutable_atlas->disks) d.h_local *= scale;
  h_chi_ *= scale;
}

double ChiEvaluator::value(cplx y) const {
  const Atlas& a = *atlas_;
  for (const auto& p : a.patches) {
    cplx x = y - p.center;
    double ax = std::abs(x);
    if (ax < p.use_radius) {
      if (ax < 1e-300) return 0.0;
      auto [f1, d1] = p.fp.eval(1, x);
      auto [f2, d2] = p.fp.eval(2, x);
      (void)d1;
      (void)d2;
      return quad_form(p.h_local, f1, f2);
    }
  }
  if (std::abs(y) > a.r_far) return std::norm(y) * value_hatted(1.0 / y);
  int di = a.find_disk(y);
  if (di < 0) {
    // interstice next to a patch core: evaluate with the nearest patch
    size_t best = 0;
    double dmin = 1e300;
    for (size_t r = 0; r < a.patches.size(); ++r) {
      double d = std::abs(y - a.patches[r].center);
      if (d < dmin) dmin = d, best = r;
    }
    const auto& p = a.patches[best];
    auto [f1, d1] = p.fp.eval(1, y - p.center);
    auto [f2, d2] = p.fp.eval(2, y - p.center);
    (void)d1;
    (void)d2;
    return quad_form(p.h_local, f1, f2);
  }
  const Disk& d = a.disks[size_t(di)];
  cplx dx = y - d.center;
  return quad_form(d.h_local, horner(d.u1, dx), horner(d.u2, dx));
}

double ChiEvaluator::value_hatted(cplx w) const {
  const Atlas& a = *atlas_;
  double aw = std::abs(w);
  if (aw < a.inf_patch.use_radius) {
    const Patch& p = a.inf_patch;
    if (oper_.config.infinity_puncture) {
      if (aw < 1e-300) return 0.0;
      auto [f1, d1] = p.fp.eval(1, w);
      auto [f2, d2] = p.fp.eval(2, w);
      (void)d1;
      (void)d2;
      return quad_form(p.h_local, f1, f2);
    }
    return quad_form(p.h_local, horner(p.fp.a, w), horner(p.fp.b, w));
  }
  if (aw < 1e-300) return 0.0;
  cplx y = 1.0 / w;
  return std::norm(w) * value(y);
}

double ChiEvaluator::loop_consistency() const {
  double worst = 0.0;
  for (const auto& m : rep_.generators()) {
    Mat2 drift = m * h_chi_ * m.adjoint() - h_chi_;
    worst = std::max(worst, drift.norm() / h_chi_.norm());
  }
  Mat2 drift = rep_.M_inf * h_chi_ * rep_.M_inf.adjoint() - h_chi_;
  worst = std::max(worst, drift.norm() / h_chi_.norm());
  return worst;
}

ChiEvaluator::ConnectionFit ChiEvaluator::connection_constants(size_t r) const {
  const bool at_infinity = (r == oper_.config.n_finite());
  const Atlas& a = *atlas_;
  const Patch& p = at_infinity ? a.inf_patch : a.patches[r];
  cplx j = at_infinity ? oper_.weights.j.back() : oper_.weights.j[r];
  if (std::abs(2.0 * j + 1.0) < 1e-3)
    throw NumericError("FitIllConditioned", "local exponents nearly coincide");
  const double rl = at_infinity && !oper_.config.infinity_puncture
                        ? p.use_radius  // no two-exponent structure without a puncture
                        : p.fp.r_loc;
  if (at_infinity && !oper_.config.infinity_puncture)
    throw NumericError("FitIllConditioned", "no puncture at infinity in this configuration");

  const int M = 48;
  auto chi_avg = [&](double rho) {
    double acc = 0.0;
    for (int m = 0; m < M; ++m) {
      cplx x = rho * std::exp(cplx(0, 2.0 * kPi * (m + 0.5) / M));
      acc += at_infinity ? value_hatted(x) : value(p.center + x);
    }
    return acc / M;
  };
  auto model_avg = [&](double rho) {
    // angular averages of phi_2 phi~_1 (the + branch) and phi_1 phi~_2
    cplx gp = 0.0, gm = 0.0;
    for (int m = 0; m < M; ++m) {
      cplx x = rho * std::exp(cplx(0, 2.0 * kPi * (m + 0.5) / M));
      auto [f1, d1] = p.fp.eval(1, x);
      auto [f2, d2] = p.fp.eval(2, x);
      (void)d1;
      (void)d2;
      gp += f2 * std::conj(f1);
      gm += f1 * std::conj(f2);
    }
    return std::pair<cplx, cplx>(gp / double(M), gm / double(M));
  };

  const double radii[3] = {rl / 2, rl / 4, rl / 8};
  Eigen::Matrix<cplx, 3, 2> G;
  Eigen::Vector3cd A;
  for (int k = 0; k < 3; ++k) {
    auto [gp, gm] = model_avg(radii[k]);
    G(k, 0) = gp;
    G(k, 1) = gm;
    A(k) = chi_avg(radii[k]);
  }
  Eigen::Vector2cd sol =
      (G.adjoint() * G).ldlt().solve(G.adjoint() * A);

  ConnectionFit fit;
  fit.c_plus = sol(0);
  fit.c_minus = sol(1);
  double rho_v = rl / 3;
  auto [gp, gm] = model_avg(rho_v);
  cplx pred = sol(0) * gp + sol(1) * gm;
  double ref = std::abs(chi_avg(rho_v));
  fit.reconstruction_error = std::abs(pred - chi_avg(rho_v)) / (ref > 0 ? ref : 1.0);
  return fit;
}

}  // namespace langsov
