#include <doctest.h>
#include "langsov/transport.hpp"

#include "langsov/frobenius.hpp"
#include "langsov/oper.hpp"
#include "langsov/rng.hpp"

using namespace langsov;

namespace {

OperPotential demo_oper_e1() {
  // n = 4, z = (0,1,2), all delta = 0 (resonant weights, override on),
  // free = (1): the linear solve gives E = (1, -2, 1).
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  WeightVector weights({cplx(0), cplx(0), cplx(0), cplx(0)}, /*allow_resonant=*/true);
  return embed_accessory({cplx(1.0)}, config, weights);
}

WeightVector critical_weights(int n, double s = 0.4) {
  cvec j(size_t(n), cplx(-0.5, s));
  return WeightVector(j);
}

}  // namespace

TEST_CASE("delta_from_weight") {
  CHECK(std::abs(delta_from_weight(cplx(0))) == 0.0);
  CHECK(std::abs(delta_from_weight(cplx(-1))) == 0.0);
  cplx d = delta_from_weight(cplx(-0.5, 0.4));
  CHECK(std::abs(d - cplx(-0.25 - 0.16, 0.0)) < 1e-15);
}

TEST_CASE("embed_accessory: closed-form n=4 example") {
  auto oper = demo_oper_e1();
  REQUIRE(oper.E.size() == 3);
  CHECK(std::abs(oper.E[0] - 1.0) < 1e-12);
  CHECK(std::abs(oper.E[1] + 2.0) < 1e-12);
  CHECK(std::abs(oper.E[2] - 1.0) < 1e-12);
  CHECK(oper.constraint_residual() < 1e-10);
}

TEST_CASE("embed_accessory: zero free coordinates give zero residues") {
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  WeightVector weights({cplx(0), cplx(0), cplx(0), cplx(0)}, true);
  auto oper = embed_accessory({cplx(0.0)}, config, weights);
  for (cplx e : oper.E) CHECK(std::abs(e) < 1e-14);
}

TEST_CASE("embed_accessory: constraint residuals on random opers, both pictures") {
  Philox rng(5, stream_id("oper.random"));
  for (int trial = 0; trial < 10; ++trial) {
    auto u = rng.uniform4(uint64_t(trial));
    // infinity picture, n = 5 (4 finite punctures)
    PunctureConfig config({cplx(0), cplx(1), cplx(2.0 + u[0]), cplx(0.5, 1.0 + u[1])});
    auto weights = critical_weights(5);
    cvec free = {cplx(2 * u[2] - 1, 2 * u[3] - 1), cplx(u[0] - 0.5, u[1] - 0.5)};
    auto oper = embed_accessory(free, config, weights);
    CHECK(oper.constraint_residual() < 1e-10);
    // reading back the free coordinates is the identity
    for (size_t k = 0; k < free.size(); ++k) CHECK(std::abs(oper.E[k] - free[k]) < 1e-14);
    auto [d_inf, e_inf] = oper.infinity_data();
    CHECK(std::abs(d_inf - weights.delta(4)) < 1e-10);
    (void)e_inf;

    // all-finite picture, 4 punctures, infinity ordinary
    PunctureConfig cfg_fin({cplx(0), cplx(1), cplx(2.0 + u[0]), cplx(0.5, 1.0 + u[1])},
                           /*infinity=*/false);
    auto w4 = critical_weights(4);
    auto oper_fin = embed_accessory({free[0]}, cfg_fin, w4);
    CHECK(oper_fin.constraint_residual() < 1e-10);
    // y^4 t(y) must stay bounded far out
    cplx big(7.3e3, -5.1e3);
    cplx t = oper_fin.eval(big);
    CHECK(std::abs(t) * std::pow(std::abs(big), 3.0) < 1e3);
  }
}

TEST_CASE("eval_potential: partial fraction values and Laurent behaviour") {
  auto oper = demo_oper_e1();
  cplx y(3.7, 1.1);
  cplx direct = 1.0 / y - 2.0 / (y - 1.0) + 1.0 / (y - 2.0);
  CHECK(std::abs(oper.eval(y) - direct) < 1e-14);

  // (y - z_r)^2 t -> delta_r: with delta = 0 here, check the simple pole instead
  cplx near1 = cplx(1) + cplx(1e-7, 0);
  CHECK(std::abs((near1 - cplx(1)) * oper.eval(near1) + 2.0) < 1e-5);

  // y^3 t(y) -> 2 (Laurent oracle for E = (1,-2,1))
  cplx far(1e4, 3e3);
  CHECK(std::abs(far * far * far * oper.eval(far) - 2.0) < 1e-3);

  auto [d_inf, e_inf] = oper.infinity_data();
  CHECK(std::abs(d_inf) < 1e-12);
  CHECK(std::abs(e_inf - 2.0) < 1e-12);
  // numeric far-field limit |y^2 t - delta_inf| at |y| = 1e4
  cplx y4(1e4, 0.0);
  CHECK(std::abs(y4 * y4 * oper.eval(y4) - d_inf) < 1e-3);
}

TEST_CASE("eval_potential: relabeling invariance") {
  PunctureConfig ca({cplx(0), cplx(1), cplx(2)});
  PunctureConfig cb({cplx(2), cplx(0), cplx(1)});
  WeightVector wa({cplx(-0.5, 0.4), cplx(-0.5, 0.2), cplx(-0.5, 0.7), cplx(-0.5, 0.3)});
  WeightVector wb({cplx(-0.5, 0.7), cplx(-0.5, 0.4), cplx(-0.5, 0.2), cplx(-0.5, 0.3)});
  auto oa = embed_accessory({cplx(0.3, -0.2)}, ca, wa);
  // same oper with punctures relabeled: permute (z, delta, E) together
  OperPotential ob{cb, wb, {oa.E[2], oa.E[0], oa.E[1]}, {}};
  cplx y(0.4, 2.2);
  CHECK(std::abs(oa.eval(y) - ob.eval(y)) < 1e-13);
}

TEST_CASE("eval_potential: puncture guard") {
  auto oper = demo_oper_e1();
  CHECK_THROWS_AS(oper.eval(cplx(1.0, 0.0)), NumericError);
}

TEST_CASE("laurent and taylor data agree with direct evaluation") {
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  auto weights = critical_weights(4);
  auto oper = embed_accessory({cplx(0.7, 0.1)}, config, weights);

  // Laurent at puncture 1: t = delta/x^2 + sum tau_m x^m, x = y - 1
  auto tau = oper.laurent_tail(1, 12);
  cplx x(0.05, 0.03);
  cplx series = weights.delta(1) / (x * x);
  cplx xp = 1.0 / x;
  for (size_t m = 0; m < tau.size(); ++m) {
    series += tau[m] * xp;
    xp *= x;
  }
  CHECK(std::abs(series - oper.eval(cplx(1) + x)) < 1e-10);

  // Taylor at an ordinary point
  auto tc = oper.taylor(cplx(0.5, -0.8), 20);
  cplx dx(0.04, -0.02), acc = 0.0, dp = 1.0;
  for (size_t p = 0; p < tc.size(); ++p) {
    acc += tc[p] * dp;
    dp *= dx;
  }
  CHECK(std::abs(acc - oper.eval(cplx(0.5, -0.8) + dx)) < 1e-12);

  // chart at infinity: t_hat(w) = w^-4 t(1/w) matches its Laurent data
  auto tinf = oper.laurent_tail_infinity(12);
  cplx w(0.02, 0.015);
  cplx that = weights.delta(3) / (w * w);
  cplx wp = 1.0 / w;
  for (size_t m = 0; m < tinf.size(); ++m) {
    that += tinf[m] * wp;
    wp *= w;
  }
  CHECK(std::abs(that - oper.eval_hatted(w)) / std::abs(that) < 1e-9);
}

TEST_CASE("resonance guard on weights") {
  CHECK_THROWS_AS(WeightVector({cplx(-0.5), cplx(-0.5, 0.4), cplx(-0.5, 0.4), cplx(-0.5, 0.4)}),
                  NumericError);
  CHECK_NOTHROW(WeightVector({cplx(-0.5), cplx(-0.5, 0.4), cplx(-0.5, 0.4), cplx(-0.5, 0.4)},
                             /*allow_resonant=*/true));
}

TEST_CASE("frobenius_series: indicial exponents and hand-rolled recurrence") {
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  auto weights = critical_weights(4);
  auto oper = embed_accessory({cplx(1.0)}, config, weights);

  auto fp = frobenius_series(oper, 0, 16);
  cplx j = weights.j[0], delta = weights.delta(0);
  // exponents solve the indicial equation rho(rho-1) = delta of s'' = t s
  for (cplx rho : {fp.exponent1, fp.exponent2})
    CHECK(std::abs(rho * (rho - 1.0) - delta) < 1e-12);
  CHECK(std::abs(fp.exponent1 + j) < 1e-14);
  CHECK(std::abs(fp.exponent2 - (1.0 + j)) < 1e-14);

  // order-3 coefficients against an independent recurrence
  auto tau = oper.laurent_tail(0, 4);
  auto hand = [&](cplx rho) {
    cplx D1 = (rho + 1.0) * rho - delta;
    cplx c1 = tau[0] / D1;
    cplx D2 = (rho + 2.0) * (rho + 1.0) - delta;
    cplx c2 = (tau[1] + tau[0] * c1) / D2;
    cplx D3 = (rho + 3.0) * (rho + 2.0) - delta;
    cplx c3 = (tau[2] + tau[1] * c1 + tau[0] * c2) / D3;
    return cvec{c1, c2, c3};
  };
  auto ha = hand(fp.exponent1);
  auto hb = hand(fp.exponent2);
  for (int m = 1; m <= 3; ++m) {
    CHECK(std::abs(fp.a[size_t(m)] - ha[size_t(m - 1)]) < 1e-12);
    CHECK(std::abs(fp.b[size_t(m)] - hb[size_t(m - 1)]) < 1e-12);
  }
}

TEST_CASE("frobenius_series: local basis evolves consistently with transport") {
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  auto weights = critical_weights(4);
  auto oper = embed_accessory({cplx(0.4, -0.6)}, config, weights);
  auto fp = frobenius_series(oper, 1, 24);
  double rad = 0.5 * fp.r_loc;
  cplx z1 = config.z[1];
  // germs at two points of the circle |y - z_1| = rad, connected by transport
  cplx xa = rad * std::exp(cplx(0, 0.3));
  double sweep = 1.1;
  cplx xb = rad * std::exp(cplx(0, 0.3 + sweep));
  PathSpec arc = PathSpec::from(z1 + xa);
  arc.arc(z1, rad, 0.3, sweep);
  Mat2 T = transport_ode([&](cplx y) { return oper.ode_q(y); }, arc);
  for (int i : {1, 2}) {
    auto [va, da] = fp.eval(i, xa);
    auto [vb, db] = fp.eval(i, xb);
    Eigen::Vector2cd germ_a(va, da), germ_b(vb, db);
    Eigen::Vector2cd moved = T * germ_a;
    CHECK((moved - germ_b).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + germ_b.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("frobenius_series: infinity chart basis evolves with the hatted potential") {
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  auto weights = critical_weights(4);
  auto oper = embed_accessory({cplx(0.4, -0.6)}, config, weights);
  auto fp = frobenius_series(oper, 3, 24);  // index n_finite = infinity patch
  double rad = 0.5 * fp.r_loc;
  cplx wa = rad * std::exp(cplx(0, -0.2)), wb = rad * std::exp(cplx(0, 0.7));
  PathSpec arc = PathSpec::from(wa);
  arc.arc(cplx(0), rad, -0.2, 0.9);
  // hatted equation u'' = t_hat u in the w chart
  Mat2 T = transport_ode([&](cplx w) { return -oper.eval_hatted(w); }, arc);
  for (int i : {1, 2}) {
    auto [va, da] = fp.eval(i, wa);
    auto [vb, db] = fp.eval(i, wb);
    Eigen::Vector2cd moved = T * Eigen::Vector2cd(va, da);
    CHECK((moved - Eigen::Vector2cd(vb, db)).cwiseAbs().maxCoeff() <
          1e-9 * (1.0 + std::abs(vb) + std::abs(db)));
  }
}

TEST_CASE("frobenius_series: resonant weight rejected") {
  PunctureConfig config({cplx(0), cplx(1), cplx(2)});
  WeightVector weights({cplx(-0.5), cplx(-0.5, 0.4), cplx(-0.5, 0.4), cplx(-0.5, 0.4)}, true);
  auto oper = embed_accessory({cplx(1.0)}, config, weights);
  CHECK_THROWS_AS(frobenius_series(oper, 0, 8), NumericError);
}
