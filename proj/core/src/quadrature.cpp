#include "langsov/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace langsov {

int worker_count() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("LANGSOV_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) hw = std::min(hw, cap);
  }
  return hw;
}

namespace {
constexpr int64_t kBlock = 8192;

struct BlockSums {
  cplx sum = 0.0;
  double sum_sq = 0.0;  // |f|^2 accumulator for the error estimate
  int64_t nonfinite = 0;
};

BlockSums run_block(int64_t lo, int64_t hi, const std::function<cplx(int64_t)>& eval) {
  BlockSums b;
  for (int64_t i = lo; i < hi; ++i) {
    cplx v = eval(i);
    if (!is_finite(v)) {
      ++b.nonfinite;
      continue;
    }
    b.sum += v;
    b.sum_sq += std::norm(v);
  }
  return b;
}

}  // namespace

IntegralEstimate reduce_mean(int64_t n, const std::function<cplx(int64_t)>& eval) {
  const int64_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<BlockSums> blocks(static_cast<size_t>(nblocks));
  const int workers = std::min<int64_t>(worker_count(), std::max<int64_t>(1, nblocks));

  if (workers <= 1) {
    for (int64_t bidx = 0; bidx < nblocks; ++bidx)
      blocks[size_t(bidx)] =
          run_block(bidx * kBlock, std::min(n, (bidx + 1) * kBlock), eval);
  } else {
    std::atomic<int64_t> next{0};
    auto work = [&] {
      for (;;) {
        int64_t bidx = next.fetch_add(1);
        if (bidx >= nblocks) return;
        blocks[size_t(bidx)] =
            run_block(bidx * kBlock, std::min(n, (bidx + 1) * kBlock), eval);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  cplx total = 0.0;
  double total_sq = 0.0;
  int64_t nonfinite = 0;
  for (const auto& b : blocks) {  // fixed block order: bit-stable
    total += b.sum;
    total_sq += b.sum_sq;
    nonfinite += b.nonfinite;
  }
  if (nonfinite * 1000 > n)
    throw NumericError("NonFiniteSampleRate", "more than 0.1% non-finite samples");

  IntegralEstimate est;
  est.samples = n;
  est.nonfinite = nonfinite;
  const int64_t m = n - nonfinite;
  if (m > 0) {
    est.value = total / double(m);
    double var = total_sq / double(m) - std::norm(est.value);
    est.std_error = var > 0 ? std::sqrt(var / double(m)) : 0.0;
  }
  return est;
}

IntegralEstimate integrate(const std::function<cplx(const std::vector<double>&)>& f,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           const QuadratureSpec& spec) {
  const size_t dim = lo.size();
  if (dim == 0 || hi.size() != dim)
    throw NumericError("BudgetExceeded", "empty or mismatched domain box");
  double volume = 1.0;
  for (size_t d = 0; d < dim; ++d) volume *= (hi[d] - lo[d]);

  if (spec.mode == QuadratureSpec::Mode::MonteCarlo) {
    if (spec.sample_count < 1)
      throw NumericError("BudgetExceeded", "sample_count must be >= 1");
    Philox rng(spec.seed, stream_id("integrate.box"));
    auto eval = [&](int64_t i) {
      std::vector<double> x(dim);
      for (size_t d = 0; d < dim; d += 2) {
        auto u = rng.uniform2(uint64_t(i) * ((dim + 1) / 2) + d / 2);
        x[d] = lo[d] + u[0] * (hi[d] - lo[d]);
        if (d + 1 < dim) x[d + 1] = lo[d + 1] + u[1] * (hi[d + 1] - lo[d + 1]);
      }
      return f(x);
    };
    IntegralEstimate est = reduce_mean(spec.sample_count, eval);
    est.value *= volume;
    est.std_error *= volume;
    return est;
  }

  // Tensor grid: midpoint rule; error from comparison with the half grid.
  std::vector<int> npts(dim, 32);
  for (size_t d = 0; d < dim && d < spec.stratification.size(); ++d)
    if (spec.stratification[d] > 0) npts[d] = spec.stratification[d];
  auto run_grid = [&](const std::vector<int>& np) {
    int64_t total = 1;
    for (size_t d = 0; d < dim; ++d) total *= np[d];
    cplx acc = 0.0;
    std::vector<double> x(dim);
    for (int64_t idx = 0; idx < total; ++idx) {
      int64_t rem = idx;
      for (size_t d = 0; d < dim; ++d) {
        int id = int(rem % np[d]);
        rem /= np[d];
        x[d] = lo[d] + (id + 0.5) * (hi[d] - lo[d]) / np[d];
      }
      acc += f(x);
    }
    return acc * (volume / double(total));
  };
  IntegralEstimate est;
  est.value = run_grid(npts);
  std::vector<int> half(dim);
  for (size_t d = 0; d < dim; ++d) half[d] = std::max(1, npts[d] / 2);
  est.std_error = std::abs(est.value - run_grid(half));
  int64_t total = 1;
  for (size_t d = 0; d < dim; ++d) total *= npts[d];
  est.samples = total;
  return est;
}

}  // namespace langsov
