#include <doctest.h>
#include "langsov/rng.hpp"

#include "langsov/search.hpp"
#include "langsov/sov.hpp"

using namespace langsov;

namespace {

const PunctureConfig& demo_config() {
  static PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  return config;
}

const WeightVector& demo_weights() {
  static WeightVector weights(cvec(4, cplx(-0.5, 0.4)));
  return weights;
}

// One search shared by the test cases below.
const std::vector<FoundOper>& demo_search() {
  static std::vector<FoundOper> found = [] {
    SearchBox box;
    return search_real_opers(demo_config(), demo_weights(), box, 1e-9, 24, 20260810);
  }();
  return found;
}

const ChiEvaluator& demo_chi() {
  static ChiEvaluator chi = [] {
    const auto& f = demo_search().front();
    auto rep = monodromy_rep(f.oper);
    auto report = reality_obstruction(rep);
    return ChiEvaluator(f.oper, rep, report.pairing,
                        ChiEvaluator::default_reference(demo_config()));
  }();
  return chi;
}

}  // namespace

TEST_CASE("search_real_opers finds isolated real opers at n=4") {
  const auto& found = demo_search();
  REQUIRE(found.size() >= 3);
  for (const auto& f : found) {
    CHECK(f.report.obstruction < 1e-9);
    CHECK(f.report.trace_imag_max < 1e-6);
    CHECK(f.oper.constraint_residual() < 1e-10);
  }
  // isolation: perturbing a zero raises the obstruction well above tol
  const auto& f0 = found.front();
  cvec pert = f0.oper.free;
  pert[0] += cplx(1e-2, 0.7e-2);
  double raised = obstruction_at(pert, demo_config(), demo_weights());
  CHECK(raised > 1e-8 * 10);
}

TEST_CASE("search_real_opers is reproducible bit-for-bit") {
  SearchBox box;
  auto a = search_real_opers(demo_config(), demo_weights(), box, 1e-9, 6, 42);
  auto b = search_real_opers(demo_config(), demo_weights(), box, 1e-9, 6, 42);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < a[i].oper.free.size(); ++k) {
      CHECK(a[i].oper.free[k].real() == b[i].oper.free[k].real());
      CHECK(a[i].oper.free[k].imag() == b[i].oper.free[k].imag());
    }
}

TEST_CASE("chi: real, normalized, and single-valued") {
  const auto& chi = demo_chi();
  CHECK(chi.value(chi.reference_point()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(chi.loop_consistency() < 1e-6);

  // realness at random points is built into the quadratic form; spot-check
  // finiteness and continuity across representation boundaries instead
  Philox rng(7, stream_id("chi.points"));
  for (uint64_t i = 0; i < 200; ++i) {
    auto u = rng.uniform4(i);
    cplx y(6.0 * u[0] - 2.0, 6.0 * u[1] - 3.0);
    double v = chi.value(y);
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("chi: atlas agrees with direct transport") {
  const auto& chi = demo_chi();
  const auto& rep = chi.rep();
  auto q = [&](cplx y) { return chi.oper().ode_q(y); };
  Philox rng(8, stream_id("chi.direct"));
  int checked = 0;
  for (uint64_t i = 0; checked < 12; ++i) {
    auto u = rng.uniform4(i);
    cplx y(7.0 * u[0] - 2.5, 7.0 * u[1] - 3.5);
    bool clear = true;
    for (cplx z : chi.oper().config.z) clear = clear && std::abs(y - z) > 0.35;
    if (!clear) continue;
    ++checked;
    PathSpec path = route_segment(rep.basepoint, y, chi.oper().config.z, 0.3);
    Mat2 germ = transport_ode(q, path, 1e-12);
    const Mat2& h = chi.pairing_matrix();
    cplx s1 = germ(0, 0), s2 = germ(0, 1);
    double direct = h(0, 0).real() * std::norm(s1) + h(1, 1).real() * std::norm(s2) +
                    2.0 * std::real(h(0, 1) * s1 * std::conj(s2));
    double atlas = chi.value(y);
    CHECK(std::abs(direct - atlas) < 1e-8 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("chi: holomorphic and antiholomorphic ODE residuals by differences") {
  const auto& chi = demo_chi();
  const auto& oper = chi.oper();
  Philox rng(9, stream_id("chi.ode"));
  const double h = 2e-4;
  int checked = 0;
  for (uint64_t i = 0; checked < 8; ++i) {
    auto u = rng.uniform4(i);
    cplx y(4.0 * u[0] - 1.0, 4.0 * u[1] - 2.0);
    bool clear = true;
    for (cplx z : oper.config.z) clear = clear && std::abs(y - z) > 0.5;
    if (!clear) continue;
    ++checked;
    // nine-point stencil for the Wirtinger second derivatives
    auto f = [&](double du, double dv) { return chi.value(y + cplx(du, dv)); };
    double f0 = f(0, 0);
    double fuu = (f(h, 0) - 2 * f0 + f(-h, 0)) / (h * h);
    double fvv = (f(0, h) - 2 * f0 + f(0, -h)) / (h * h);
    double fuv = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    cplx dyy = 0.25 * (fuu - fvv - cplx(0, 2) * fuv);       // d^2/dy^2
    cplx dyby = 0.25 * (fuu - fvv + cplx(0, 2) * fuv);      // d^2/dybar^2
    cplx t = oper.eval(y);
    double scale = std::abs(t * f0) + std::abs(dyy) + 1.0;
    CHECK(std::abs(dyy - t * f0) / scale < 1e-6);
    CHECK(std::abs(dyby - std::conj(t) * f0) / scale < 1e-6);
  }
}

TEST_CASE("chi: single-valuedness along an explicit loop") {
  const auto& chi = demo_chi();
  // walk chi around each puncture on a circle of radius between patch and
  // bulk and require smooth return (the evaluator is built from local data,
  // so this exercises representation consistency along the way)
  for (size_t r = 0; r < chi.oper().config.n_finite(); ++r) {
    cplx z = chi.oper().config.z[r];
    double rad = 0.45;
    const int M = 64;
    double first = chi.value(z + rad);
    double prev = first;
    double max_jump = 0.0;
    for (int m = 1; m <= M; ++m) {
      double v = chi.value(z + rad * std::exp(cplx(0, 2.0 * kPi * m / M)));
      max_jump = std::max(max_jump, std::abs(v - prev));
      prev = v;
    }
    CHECK(std::abs(prev - first) < 1e-8 * (1.0 + std::abs(first)));
    (void)max_jump;
  }
}

TEST_CASE("chi: hatted value matches |w|^2 chi(1/w) across the far boundary") {
  const auto& chi = demo_chi();
  for (double ay : {8.0, 15.0, 40.0}) {
    cplx y(ay, 0.6 * ay);
    double direct = chi.value(y);
    double hatted = chi.value_hatted(1.0 / y) * std::norm(y);
    CHECK(std::abs(direct - hatted) < 1e-8 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("connection_constants: reconstruction and pairing cross-check") {
  const auto& chi = demo_chi();
  const size_t nf = chi.oper().config.n_finite();
  for (size_t r = 0; r <= nf; ++r) {
    auto fit = chi.connection_constants(r);
    CHECK(fit.reconstruction_error < 1e-4);
    // on the critical line the constants are conjugate (chi is real)
    CHECK(std::abs(fit.c_plus - std::conj(fit.c_minus)) <
          1e-3 * (std::abs(fit.c_plus) + 1e-30));
  }
  CHECK(std::abs(chi.chi_n()) > 0.0);
}

TEST_CASE("connection_constants: linearity in the pairing") {
  const auto& f = demo_search().front();
  auto rep = monodromy_rep(f.oper);
  auto report = reality_obstruction(rep);
  cplx y_ref = ChiEvaluator::default_reference(demo_config());
  ChiEvaluator chi1(f.oper, rep, report.pairing, y_ref, 1e-12, /*normalize=*/false);
  HermitianPairing doubled;
  doubled.H = 2.0 * report.pairing.H;
  ChiEvaluator chi2(f.oper, rep, doubled, y_ref, 1e-12, /*normalize=*/false);
  // doubling the pairing doubles chi and both local constants
  CHECK(chi2.value(y_ref) == doctest::Approx(2.0 * chi1.value(y_ref)).epsilon(1e-12));
  auto f1 = chi1.connection_constants(0);
  auto f2 = chi2.connection_constants(0);
  CHECK(std::abs(f2.c_plus - 2.0 * f1.c_plus) < 1e-9 * std::abs(f1.c_plus));
  CHECK(std::abs(f2.c_minus - 2.0 * f1.c_minus) < 1e-9 * std::abs(f1.c_minus));
}

TEST_CASE("separated_state: product rule and factorized ODE residual") {
  const auto& chi = demo_chi();
  CHECK(separated_state(chi, {cplx(0.5, 0.9)}) ==
        doctest::Approx(chi.value(cplx(0.5, 0.9))).epsilon(1e-14));
  // permutation invariance on a synthetic two-variable product
  cvec y2 = {cplx(0.4, 1.1), cplx(2.6, -0.8)};
  cvec y2s = {y2[1], y2[0]};
  CHECK(separated_state(chi, y2) == doctest::Approx(separated_state(chi, y2s)));

  // (d^2/dy_k^2 - t(y_k)) Phi = 0 through finite differences
  const double h = 2e-4;
  cplx yk(0.4, 1.1);
  cplx other(2.6, -0.8);
  auto f = [&](double du, double dv) {
    return separated_state(chi, {yk + cplx(du, dv), other});
  };
  double f0 = f(0, 0);
  double fuu = (f(h, 0) - 2 * f0 + f(-h, 0)) / (h * h);
  double fvv = (f(0, h) - 2 * f0 + f(0, -h)) / (h * h);
  double fuv = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
  cplx dyy = 0.25 * (fuu - fvv - cplx(0, 2) * fuv);
  cplx t = chi.oper().eval(yk);
  CHECK(std::abs(dyy - t * f0) / (std::abs(t * f0) + 1.0) < 1e-5);
}
