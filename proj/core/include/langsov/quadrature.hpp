#pragma once

#include <functional>
#include <string>

#include "langsov/rng.hpp"
#include "langsov/types.hpp"

namespace langsov {

struct QuadratureSpec {
  enum class Mode { MonteCarlo, TensorGrid };
  Mode mode = Mode::MonteCarlo;
  int64_t sample_count = 100000;
  uint64_t seed = 1;
  std::vector<int> stratification;  // per-dimension grid sizes (TensorGrid)
  std::string importance = "flat";  // profile tag, consumed by state builders

  QuadratureSpec with_samples(int64_t n) const {
    QuadratureSpec s = *this;
    s.sample_count = n;
    return s;
  }
  QuadratureSpec with_seed(uint64_t sd) const {
    QuadratureSpec s = *this;
    s.seed = sd;
    return s;
  }
};

struct IntegralEstimate {
  cplx value = 0.0;
  double std_error = 0.0;
  int64_t samples = 0;
  int64_t nonfinite = 0;
};

// Worker count: min(hardware, LANGSOV_THREADS if set).
int worker_count();

// Deterministic block-parallel reduction: `eval(i)` is called for sample
// indices 0..n-1, per-block partial sums are accumulated serially in index
// order and blocks are combined in block order, so the result is
// bit-identical for any worker count.  Returns (mean, standard error).
IntegralEstimate reduce_mean(int64_t n, const std::function<cplx(int64_t)>& eval);

// Integral of f over the box [lo, hi]^m.  MonteCarlo mode samples uniformly
// with the spec's counter-based stream; TensorGrid mode uses the midpoint
// product rule with a coarse/fine Richardson error estimate.
IntegralEstimate integrate(const std::function<cplx(const std::vector<double>&)>& f,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           const QuadratureSpec& spec);

}  // namespace langsov
