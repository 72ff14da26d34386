#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace langsov {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

// Thrown by numerical routines when a precondition fails.  The `code`
// names the failure class used in CLI exit-status mapping.
struct NumericError : std::runtime_error {
  std::string code;
  NumericError(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// |z|^a for complex exponent a, defined through the modulus alone:
// exp(a*log|z|).  Single-valued in z by construction.
inline cplx mod_pow(cplx z, cplx a) {
  double m = std::abs(z);
  if (m == 0.0) throw NumericError("ZeroComponent", "mod_pow at z=0");
  return std::exp(a * std::log(m));
}

inline double sq(double x) { return x * x; }

}  // namespace langsov
