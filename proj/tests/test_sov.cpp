#include <doctest.h>

#include "langsov/roots.hpp"
#include "langsov/rng.hpp"
#include "langsov/sov.hpp"

using namespace langsov;

namespace {

PunctureConfig demo_config() { return PunctureConfig({cplx(0), cplx(1), cplx(2)}); }

cvec random_y(uint64_t seed, size_t d, double lo = -2.5, double hi = 3.5) {
  Philox rng(seed, stream_id("sov.random_y"));
  cvec y(d);
  for (size_t k = 0; k < d; ++k) {
    auto u = rng.uniform2(k);
    y[k] = cplx(lo + u[0] * (hi - lo), -1.5 + 3.0 * u[1]);
  }
  return y;
}

PunctureConfig random_config(uint64_t seed, size_t n_finite) {
  Philox rng(seed, stream_id("sov.random_config"));
  cvec z = {cplx(0), cplx(1), cplx(2)};
  for (size_t r = 3; r < n_finite; ++r) {
    auto u = rng.uniform2(r);
    z.push_back(cplx(3.5 * u[0] - 0.3, 2.2 * u[1] + 0.5));
  }
  return PunctureConfig(z);
}

}  // namespace

TEST_CASE("kappa: direct values and the degree-count identity") {
  auto kap = kappa(demo_config(), {cplx(3.0)});
  REQUIRE(kap.size() == 3);
  CHECK(std::abs(kap[0] - cplx(-1.5)) < 1e-14);
  CHECK(std::abs(kap[1] - cplx(2.0)) < 1e-14);
  CHECK(std::abs(kap[2] - cplx(-0.5)) < 1e-14);
  CHECK(std::abs(kap[0] + kap[1] + kap[2]) < 1e-14);

  for (uint64_t seed = 1; seed <= 8; ++seed) {
    for (size_t nf : {3u, 4u, 5u}) {
      auto config = random_config(seed, nf);
      auto y = random_y(seed * 13 + nf, nf - 2);
      auto k = kappa(config, y);
      cplx sum = 0.0;
      double scale = 0.0;
      for (cplx kr : k) {
        sum += kr;
        scale = std::max(scale, std::abs(kr));
      }
      CHECK(std::abs(sum) < 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("kappa: vanishes linearly as y approaches a puncture") {
  auto config = demo_config();
  double eps = 1e-6;
  auto kap = kappa(config, {cplx(1.0) + eps});
  CHECK(std::abs(kap[1]) < 2.0 * eps);
  CHECK(std::abs(kap[1]) > 0.5 * eps);
}

TEST_CASE("forward_vars: scaling, rho recovery, and the zero-rho guard") {
  auto config = demo_config();
  SklyaninPoint pt{{cplx(0.7, 0.4)}, cplx(2.0, -1.0)};
  auto mp = forward_vars(pt, config);
  CHECK(std::abs(mp.rho(config) - pt.rho) < 1e-12 * std::abs(pt.rho));
  cplx lambda(0.3, 1.9);
  SklyaninPoint scaled = pt;
  scaled.rho *= lambda;
  auto mp2 = forward_vars(scaled, config);
  for (size_t r = 0; r < mp.k.size(); ++r)
    CHECK(std::abs(mp2.k[r] - lambda * mp.k[r]) < 1e-12 * std::abs(mp.k[r]));

  SklyaninPoint bad{{cplx(0.7, 0.4)}, cplx(0.0)};
  CHECK_THROWS_AS(forward_vars(bad, config), NumericError);
}

TEST_CASE("inverse_vars: worked n=4 example") {
  auto config = demo_config();
  MomentumPoint mp{{cplx(-3), cplx(1), cplx(2)}};
  auto pt = inverse_vars(mp, config);
  CHECK(std::abs(pt.rho - 5.0) < 1e-12);
  REQUIRE(pt.y.size() == 1);
  CHECK(std::abs(pt.y[0] - cplx(1.2)) < 1e-12);
  // substitute back: rho kappa_1(6/5) = -3
  auto kap = kappa(config, pt.y);
  CHECK(std::abs(pt.rho * kap[0] - mp.k[0]) < 1e-12);
}

TEST_CASE("inverse_vars: roundtrip up to permutation and the constraint guard") {
  for (uint64_t seed = 3; seed <= 10; ++seed) {
    for (size_t nf : {3u, 4u, 5u}) {
      auto config = random_config(seed, nf);
      auto y = random_y(seed * 7 + nf, nf - 2);
      SklyaninPoint pt{y, cplx(1.3, 0.8)};
      auto mp = forward_vars(pt, config);
      auto back = inverse_vars(mp, config);
      CHECK(std::abs(back.rho - pt.rho) < 1e-9 * std::abs(pt.rho));
      cvec sorted = y;
      sort_canonical(sorted);
      REQUIRE(back.y.size() == sorted.size());
      for (size_t k = 0; k < sorted.size(); ++k)
        CHECK(std::abs(back.y[k] - sorted[k]) < 1e-8 * (1.0 + std::abs(sorted[k])));
      // forward of the inverse reproduces k
      auto mp2 = forward_vars(back, config);
      for (size_t r = 0; r < mp.k.size(); ++r)
        CHECK(std::abs(mp2.k[r] - mp.k[r]) < 1e-9 * (1.0 + std::abs(mp.k[r])));
    }
  }
  auto config = demo_config();
  MomentumPoint bad{{cplx(-3.0 + 1e-2), cplx(1), cplx(2)}};
  CHECK_THROWS_AS(inverse_vars(bad, config), NumericError);
}

TEST_CASE("sklyanin_density: direct n=4 value and symmetry") {
  auto config = demo_config();
  double dens = sklyanin_density(config, {cplx(3.0)});
  CHECK(std::abs(dens - 16.0 / 9.0) < 1e-12);

  auto config5 = random_config(5, 4);
  cvec y = random_y(21, 2);
  cvec swapped = {y[1], y[0]};
  CHECK(sklyanin_density(config5, y) ==
        doctest::Approx(sklyanin_density(config5, swapped)).epsilon(1e-12));

  // density diverges like |y - z_r|^{-2}
  double d1 = sklyanin_density(config, {cplx(1.0) + 1e-4});
  double d2 = sklyanin_density(config, {cplx(1.0) + 0.5e-4});
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("jacobian_check: measure identity at random points for n = 4, 5, 6") {
  int idx = 0;
  for (size_t nf : {3u, 4u, 5u}) {
    for (int trial = 0; trial < 34; ++trial) {
      auto config = random_config(uint64_t(300 + idx), nf);
      auto y = random_y(uint64_t(900 + idx), nf - 2);
      ++idx;
      double rel = jacobian_check(config, y);
      CHECK(rel < 1e-6);
    }
  }
}

TEST_CASE("jacobian_check: |det| invariant under exchanging two y's") {
  auto config = random_config(77, 4);
  cvec y = random_y(78, 2);
  cvec swapped = {y[1], y[0]};
  double a = sov_jacobian_closed_form(config, y);
  double b = sov_jacobian_closed_form(config, swapped);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("twisted_weight: unit case, sector ratio, spot value") {
  auto config = demo_config();
  // all j_r = -1 and j_{n,i} = -1 makes every exponent vanish
  WeightVector wm1({cplx(-1), cplx(-1), cplx(-1), cplx(-1)}, true);
  cvec k = {cplx(0.3, 0.2), cplx(-1.1, 0.5), cplx(0.9, -0.4)};
  CHECK(std::abs(twisted_weight(config, wm1, 0, k) - 1.0) < 1e-12);

  WeightVector w({cplx(-0.5, 0.4), cplx(-0.5, 0.3), cplx(-0.5, 0.2), cplx(-0.5, 0.6)});
  cplx w0 = twisted_weight(config, w, 0, k);
  cplx w1 = twisted_weight(config, w, 1, k);
  cplx rho = MomentumPoint{k}.rho(config);
  cplx expect = mod_pow(rho, -2.0 * (2.0 * w.j[3] + 1.0));
  CHECK(std::abs(w0 / w1 - expect) < 1e-12 * std::abs(expect));

  // spot value assembled independently
  cplx spot = std::exp((2.0 * w.j[0] + 2.0) * std::log(std::abs(k[0]))) *
              std::exp((2.0 * w.j[1] + 2.0) * std::log(std::abs(k[1]))) *
              std::exp((2.0 * w.j[2] + 2.0) * std::log(std::abs(k[2]))) *
              std::exp(-2.0 * (w.j[3] + 1.0) * std::log(std::abs(rho)));
  CHECK(std::abs(w0 - spot) < 1e-12 * std::abs(spot));

  cvec kz = {cplx(0.0), cplx(1.0), cplx(-1.0)};
  CHECK_THROWS_AS(twisted_weight(config, w, 0, kz), NumericError);
}
