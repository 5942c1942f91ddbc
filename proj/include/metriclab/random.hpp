// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace metriclab {

/// Deterministic random stream (xorshift-multiplied counter). Avoids the
/// standard distributions on purpose: report bytes must not depend on the
/// standard library version.
class RandomStream {
public:
  explicit RandomStream(uint64_t seed) : state_(seed) {
    next();  // decorrelate adjacent seeds
  }

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double u01() { return (double)(next() >> 11) * 0x1.0p-53; }

  /// uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// uniform integer in [0, n)
  uint64_t below(uint64_t n) { return next() % n; }

  /// standard normal via Box-Muller
  double normal() {
    double u = u01(), v = u01();
    if (u <= 0) u = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

  std::vector<double> normalVector(int dim) {
    std::vector<double> x(dim);
    for (auto& v : x) v = normal();
    return x;
  }

private:
  uint64_t state_;
};

} // namespace metriclab
