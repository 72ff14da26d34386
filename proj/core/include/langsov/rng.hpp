#pragma once

#include <array>
#include <cstdint>
#include <cmath>

#include "langsov/types.hpp"

namespace langsov {

// Counter-based generator (Philox-4x32-10).  A draw is a pure function of
// (seed, stream, counter), so any sample index can be generated on any
// worker without shared state and reductions can run in fixed index order.
class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream) : key_{static_cast<uint32_t>(seed),
                                                static_cast<uint32_t>(seed >> 32)},
                                           stream_(stream) {}

  // Four 32-bit words for counter value `ctr`.
  std::array<uint32_t, 4> block(uint64_t ctr) const {
    std::array<uint32_t, 4> x = {static_cast<uint32_t>(ctr),
                                 static_cast<uint32_t>(ctr >> 32),
                                 static_cast<uint32_t>(stream_),
                                 static_cast<uint32_t>(stream_ >> 32)};
    uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = 0xD2511F53ull * x[0];
      const uint64_t p1 = 0xCD9E8D57ull * x[2];
      uint32_t h0 = static_cast<uint32_t>(p0 >> 32), l0 = static_cast<uint32_t>(p0);
      uint32_t h1 = static_cast<uint32_t>(p1 >> 32), l1 = static_cast<uint32_t>(p1);
      x = {h1 ^ x[1] ^ k0, l1, h0 ^ x[3] ^ k1, l0};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return x;
  }

  // Uniform doubles in [0,1), 53-bit mantissae, lanes 0..3 of one block.
  std::array<double, 2> uniform2(uint64_t ctr) const {
    auto b = block(ctr);
    uint64_t u0 = (uint64_t(b[0]) << 32) | b[1];
    uint64_t u1 = (uint64_t(b[2]) << 32) | b[3];
    return {double(u0 >> 11) * 0x1.0p-53, double(u1 >> 11) * 0x1.0p-53};
  }

  std::array<double, 4> uniform4(uint64_t ctr) const {
    auto a = uniform2(2 * ctr);
    auto b = uniform2(2 * ctr + 1);
    return {a[0], a[1], b[0], b[1]};
  }

  // Standard complex Gaussian (independent N(0,1/sqrt(2)) parts scaled to
  // unit variance per real component), Box-Muller on one block.
  cplx gaussian(uint64_t ctr) const {
    auto u = uniform2(ctr);
    double r = std::sqrt(-2.0 * std::log1p(u[0] - 1.0));  // log(1-u) stays finite
    double th = 2.0 * kPi * u[1];
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  std::array<uint32_t, 2> key_;
  uint64_t stream_;
};

// FNV-1a, used to derive stream ids from purpose strings and to hash configs.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t stream_id(const char* purpose) {
  size_t n = 0;
  while (purpose[n]) ++n;
  return fnv1a(purpose, n);
}

}  // namespace langsov
