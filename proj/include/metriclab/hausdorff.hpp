// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "metriclab/metric_space.hpp"

namespace metriclab {

/// Hausdorff distance between two non-empty subsets of one space:
/// max of the two one-sided sup-inf distances.
template <class S>
S hausdorff(const Space<S>& M, const std::vector<int>& A, const std::vector<int>& B) {
  if (A.empty() || B.empty()) throw Error("EmptySubset", "both subsets must be non-empty");
  for (int i : A)
    if (i < 0 || i >= M.n) throw Error("IndexOutOfRange", "subset A index out of range");
  for (int i : B)
    if (i < 0 || i >= M.n) throw Error("IndexOutOfRange", "subset B index out of range");
  auto oneSided = [&](const std::vector<int>& from, const std::vector<int>& to) {
    S worst(0);
    for (int a : from) {
      S best = M.at(a, to[0]);
      for (size_t k = 1; k < to.size(); ++k) {
        const S& v = M.at(a, to[k]);
        if (v < best) best = v;
      }
      if (best > worst) worst = best;
    }
    return worst;
  };
  S ab = oneSided(A, B);
  S ba = oneSided(B, A);
  return ab < ba ? ba : ab;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Maximal delta-separated subset, built greedily in seeded-random point
/// order. The result is delta-separated and every point of M lies within
/// strictly less than delta of it.
inline std::vector<int> max_separated_net(const MetricSpace& M, double delta, uint64_t seed) {
  if (!(delta > 0)) throw Error("NonPositiveDelta", "delta must be positive");
  std::vector<int> order(M.n);
  for (int i = 0; i < M.n; ++i) order[i] = i;
  std::mt19937_64 rng(splitmix64(seed));
  for (int i = M.n - 1; i > 0; --i) {
    int j = (int)(rng() % (uint64_t)(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<int> net;
  for (int p : order) {
    bool ok = true;
    for (int q : net)
      if (M.at(p, q) < delta) {
        ok = false;
        break;
      }
    if (ok) net.push_back(p);
  }
  std::sort(net.begin(), net.end());
  return net;
}

} // namespace metriclab
