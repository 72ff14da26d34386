#include "langsov/special.hpp"

#include <cmath>

namespace langsov {
namespace {

// Lanczos coefficients, g = 7, 9 terms (Godfrey's set).
constexpr double kG = 7.0;
constexpr double kC[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

bool near_nonpositive_integer(cplx z, double tol) {
  if (z.real() > 0.5) return false;
  double nearest = std::round(z.real());
  return nearest <= 0.0 && std::abs(z.real() - nearest) < tol &&
         std::abs(z.imag()) < tol;
}

cplx lanczos_log_gamma(cplx z) {
  // Requires Re z >= 0.5.
  cplx x = kC[0];
  for (int i = 1; i < 9; ++i) x += kC[i] / (z + double(i - 1));
  cplx t = z + kG - 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx complex_log_gamma(cplx z) {
  if (near_nonpositive_integer(z, 1e-12))
    throw NumericError("PoleAtNonPositiveInteger",
                       "gamma pole near z = " + std::to_string(z.real()));
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  // Reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z).
  // Use log-sin in a form stable for large |Im z|.
  cplx lg1mz = lanczos_log_gamma(1.0 - z);
  cplx logsin;
  if (z.imag() > 10.0) {
    // sin(pi z) = (exp(i pi z) - exp(-i pi z)) / (2i), dominated by exp(-i pi z)
    logsin = cplx(0, -1) * kPi * z + std::log((std::exp(cplx(0, 2) * kPi * z) - 1.0) / cplx(0, 2));
  } else if (z.imag() < -10.0) {
    logsin = cplx(0, 1) * kPi * z + std::log((1.0 - std::exp(cplx(0, -2) * kPi * z)) / cplx(0, 2));
  } else {
    logsin = std::log(std::sin(kPi * z));
  }
  return std::log(cplx(kPi)) - logsin - lg1mz;
}

cplx complex_gamma(cplx z) {
  if (near_nonpositive_integer(z, 1e-12))
    throw NumericError("PoleAtNonPositiveInteger",
                       "gamma pole near z = " + std::to_string(z.real()));
  if (z.real() >= 0.5) return std::exp(lanczos_log_gamma(z));
  // Reflection formula keeps accuracy left of the critical strip.
  return kPi / (std::sin(kPi * z) * std::exp(lanczos_log_gamma(1.0 - z)));
}

cplx gamma_ratio(cplx a, cplx b) {
  return std::exp(complex_log_gamma(a) - complex_log_gamma(b));
}

}  // namespace langsov
