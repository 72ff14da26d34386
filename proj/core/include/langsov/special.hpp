#pragma once

#include "langsov/types.hpp"

namespace langsov {

// Gamma function on the complex plane (Lanczos, g=7).  Relative error is
// below 1e-12 for |z| <= 20 away from the poles at 0, -1, -2, ...
cplx complex_gamma(cplx z);

// log Gamma, principal branch continued along the Lanczos evaluation.
cplx complex_log_gamma(cplx z);

// Ratio Gamma(a)/Gamma(b) through log-gamma, avoids overflow for large |a|,|b|.
cplx gamma_ratio(cplx a, cplx b);

}  // namespace langsov
