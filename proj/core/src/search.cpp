#include "langsov/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "langsov/rng.hpp"

namespace langsov {
namespace {

cvec unpack(const Eigen::VectorXd& x) {
  cvec f(size_t(x.size()) / 2);
  for (size_t k = 0; k < f.size(); ++k) f[k] = cplx(x[long(2 * k)], x[long(2 * k + 1)]);
  return f;
}

Eigen::VectorXd pack(const cvec& f) {
  Eigen::VectorXd x(2 * long(f.size()));
  for (size_t k = 0; k < f.size(); ++k) {
    x[long(2 * k)] = f[k].real();
    x[long(2 * k + 1)] = f[k].imag();
  }
  return x;
}

// Stacked residual L(free) h_min(free): zero exactly at real opers.
Eigen::VectorXd pairing_residual(const cvec& free, const PunctureConfig& config,
                                 const WeightVector& weights, double tol) {
  auto oper = embed_accessory(free, config, weights);
  auto rep = monodromy_rep(oper, tol);
  auto report = reality_obstruction(rep);
  const auto& gens = rep.generators();
  Eigen::VectorXd out(4 * long(gens.size()));
  const Mat2& h = report.pairing.H;
  for (size_t r = 0; r < gens.size(); ++r) {
    Mat2 img = gens[r].transpose() * h * gens[r].conjugate() - h;
    out[long(4 * r + 0)] = img(0, 0).real();
    out[long(4 * r + 1)] = img(1, 1).real();
    out[long(4 * r + 2)] = std::sqrt(2.0) * img(0, 1).real();
    out[long(4 * r + 3)] = std::sqrt(2.0) * img(0, 1).imag();
  }
  return out;
}

struct NelderMead {
  // minimizes f over R^m within loose bounds; returns best point
  template <typename F>
  static std::pair<Eigen::VectorXd, double> run(F&& f, Eigen::VectorXd x0, double scale,
                                                int max_iter) {
    const int m = int(x0.size());
    std::vector<Eigen::VectorXd> pts(size_t(m) + 1, x0);
    std::vector<double> val(size_t(m) + 1);
    for (int i = 1; i <= m; ++i) pts[size_t(i)][i - 1] += scale;
    for (int i = 0; i <= m; ++i) val[size_t(i)] = f(pts[size_t(i)]);
    for (int it = 0; it < max_iter; ++it) {
      // order
      std::vector<int> idx(size_t(m) + 1);
      for (int i = 0; i <= m; ++i) idx[size_t(i)] = i;
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return val[size_t(a)] < val[size_t(b)]; });
      std::vector<Eigen::VectorXd> p2;
      std::vector<double> v2;
      for (int i = 0; i <= m; ++i) {
        p2.push_back(pts[size_t(idx[size_t(i)])]);
        v2.push_back(val[size_t(idx[size_t(i)])]);
      }
      pts = p2;
      val = v2;
      if (val[0] < 1e-13 || (val[size_t(m)] - val[0]) < 1e-14 * (1.0 + val[0])) break;
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < m; ++i) centroid += pts[size_t(i)];
      centroid /= double(m);
      Eigen::VectorXd xr = centroid + (centroid - pts[size_t(m)]);
      double fr = f(xr);
      if (fr < val[0]) {
        Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[size_t(m)]);
        double fe = f(xe);
        if (fe < fr) {
          pts[size_t(m)] = xe;
          val[size_t(m)] = fe;
        } else {
          pts[size_t(m)] = xr;
          val[size_t(m)] = fr;
        }
      } else if (fr < val[size_t(m) - 1]) {
        pts[size_t(m)] = xr;
        val[size_t(m)] = fr;
      } else {
        Eigen::VectorXd xc = centroid + 0.5 * (pts[size_t(m)] - centroid);
        double fc = f(xc);
        if (fc < val[size_t(m)]) {
          pts[size_t(m)] = xc;
          val[size_t(m)] = fc;
        } else {
          for (int i = 1; i <= m; ++i) {
            pts[size_t(i)] = pts[0] + 0.5 * (pts[size_t(i)] - pts[0]);
            val[size_t(i)] = f(pts[size_t(i)]);
          }
        }
      }
    }
    int best = 0;
    for (int i = 1; i <= m; ++i)
      if (val[size_t(i)] < val[size_t(best)]) best = i;
    return {pts[size_t(best)], val[size_t(best)]};
  }
};

}  // namespace

double obstruction_at(const cvec& free, const PunctureConfig& config,
                      const WeightVector& weights, double transport_tol) {
  auto oper = embed_accessory(free, config, weights);
  auto rep = monodromy_rep(oper, transport_tol);
  return reality_obstruction(rep).obstruction;
}

std::vector<FoundOper> search_real_opers(const PunctureConfig& config,
                                         const WeightVector& weights, const SearchBox& box,
                                         double tol, int multistart, uint64_t seed,
                                         SearchDiagnostics* diag) {
  if (tol < 1e-10) tol = 1e-10;
  const int d = config.sov_dim();
  const int m = 2 * d;
  SearchDiagnostics local_diag;
  SearchDiagnostics& dg = diag ? *diag : local_diag;
  dg.starts = multistart;

  Eigen::VectorXd last_x;
  double last_f = 0.0;
  bool have_last = false;
  auto objective = [&](const Eigen::VectorXd& x) {
    double f = obstruction_at(unpack(x), config, weights, 1e-10);
    ++dg.objective_evaluations;
    if (have_last) {
      double dx = (x - last_x).norm();
      if (dx > 1e-12)
        dg.lipschitz_estimate = std::max(dg.lipschitz_estimate, std::abs(f - last_f) / dx);
    }
    last_x = x;
    last_f = f;
    have_last = true;
    return f;
  };

  Philox rng(seed, stream_id("search.starts"));
  std::vector<FoundOper> found;

  // Pre-scan: oversample the box, keep the lowest values with a diversity
  // radius, and start the simplex there.  The objective is meaningful only
  // where the monodromy norms stay moderate, so downhill seeds matter.
  const int oversample = 40;
  std::vector<std::pair<double, Eigen::VectorXd>> seeds;
  for (int i = 0; i < multistart * oversample; ++i) {
    Eigen::VectorXd x0(m);
    for (int k = 0; k < d; ++k) {
      auto u = rng.uniform2(uint64_t(i) * uint64_t(d) + uint64_t(k));
      x0[2 * k] = box.re_min + u[0] * (box.re_max - box.re_min);
      x0[2 * k + 1] = box.im_min + u[1] * (box.im_max - box.im_min);
    }
    double f;
    try {
      f = obstruction_at(unpack(x0), config, weights, 1e-8);
    } catch (const NumericError&) {
      continue;
    }
    ++dg.objective_evaluations;
    seeds.emplace_back(f, x0);
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Eigen::VectorXd> starts;
  const double diversity = 0.35;
  for (const auto& [f, x0] : seeds) {
    if (int(starts.size()) >= multistart) break;
    bool close = false;
    for (const auto& s : starts)
      if ((s - x0).lpNorm<Eigen::Infinity>() < diversity) close = true;
    if (!close) starts.push_back(x0);
  }

  for (const Eigen::VectorXd& x0 : starts) {
    auto [x_nm, f_nm] = NelderMead::run(objective, x0, 0.22, 140);
    if (f_nm > 0.02) continue;  // no basin nearby

    // Levenberg-Marquardt polish of the stacked residual
    Eigen::VectorXd x = x_nm;
    double lambda = 1e-3;
    double fcur = f_nm;
    for (int it = 0; it < 40 && fcur > 0.2 * tol; ++it) {
      Eigen::VectorXd r0 = pairing_residual(unpack(x), config, weights, 1e-11);
      const double h = 1e-6;
      Eigen::MatrixXd jac(r0.size(), m);
      for (int kk = 0; kk < m; ++kk) {
        Eigen::VectorXd xp = x;
        xp[kk] += h;
        jac.col(kk) = (pairing_residual(unpack(xp), config, weights, 1e-11) - r0) / h;
      }
      dg.objective_evaluations += m + 1;
      bool stepped = false;
      for (int tries = 0; tries < 8; ++tries) {
        Eigen::MatrixXd a = jac.transpose() * jac;
        a.diagonal().array() += lambda * (1.0 + a.diagonal().maxCoeff());
        Eigen::VectorXd step = a.ldlt().solve(-jac.transpose() * r0);
        Eigen::VectorXd xn = x + step;
        double fn = objective(xn);
        if (fn < fcur) {
          x = xn;
          fcur = fn;
          lambda = std::max(lambda * 0.3, 1e-12);
          stepped = true;
          break;
        }
        lambda *= 8.0;
      }
      if (!stepped) break;
    }
    if (fcur >= tol) continue;

    // final report at tight transport tolerance
    cvec free = unpack(x);
    bool in_box = true;
    for (cplx c : free)
      in_box = in_box && c.real() > box.re_min - 0.5 && c.real() < box.re_max + 0.5 &&
               c.imag() > box.im_min - 0.5 && c.imag() < box.im_max + 0.5;
    if (!in_box) continue;
    auto oper = embed_accessory(free, config, weights);
    auto rep = monodromy_rep(oper, 1e-12);
    auto report = reality_obstruction(rep);
    if (report.obstruction >= tol) continue;
    // certification: the singular value is trustworthy only while the
    // pairing map stays well scaled
    double mnorm = 0.0;
    for (const auto& g : rep.generators()) mnorm = std::max(mnorm, g.cwiseAbs().maxCoeff());
    if (mnorm * mnorm * 1e-15 > 0.1 * tol) continue;
    bool dup = false;
    for (const auto& g : found) {
      double dist = 0.0;
      for (size_t k = 0; k < free.size(); ++k)
        dist = std::max(dist, std::abs(free[k] - g.oper.free[k]));
      if (dist < 1e-4) dup = true;
    }
    if (dup) continue;
    ++dg.converged_starts;
    found.push_back({std::move(oper), report});
  }

  std::sort(found.begin(), found.end(), [](const FoundOper& a, const FoundOper& b) {
    for (size_t k = 0; k < a.oper.free.size(); ++k) {
      if (a.oper.free[k].real() != b.oper.free[k].real())
        return a.oper.free[k].real() < b.oper.free[k].real();
      if (a.oper.free[k].imag() != b.oper.free[k].imag())
        return a.oper.free[k].imag() < b.oper.free[k].imag();
    }
    return false;
  });
  return found;
}

}  // namespace langsov
