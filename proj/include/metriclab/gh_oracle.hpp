// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "metriclab/correspondence.hpp"
#include "metriclab/metric_space.hpp"

namespace metriclab::oracle {

/// Exhaustive reference route: enumerates every correspondence (all boolean
/// matrices without empty rows or columns) and takes half the minimal
/// distortion. Independent of the branch-and-bound path; usable up to ~4x4.
template <class S>
struct EnumerationResult {
  S value;
  Correspondence witness;
  uint64_t enumerated;
};

template <class S>
EnumerationResult<S> gh_enumerate(const Space<S>& M, const Space<S>& N) {
  const int nA = M.n, nB = N.n;
  if (nA > 5 || nB > 5)
    throw Error("SizeLimit", "enumeration oracle is limited to 5-point spaces");
  const uint32_t full = (1u << nB) - 1;
  std::vector<uint32_t> rows(nA, 1);
  EnumerationResult<S> res{S(0), Correspondence::full(nA, nB), 0};
  bool first = true;

  std::vector<std::pair<int, int>> pairs;
  auto evaluate = [&]() {
    uint32_t unionMask = 0;
    for (int a = 0; a < nA; ++a) unionMask |= rows[a];
    if (unionMask != full) return;  // some column uncovered
    ++res.enumerated;
    pairs.clear();
    for (int a = 0; a < nA; ++a)
      for (int b = 0; b < nB; ++b)
        if (rows[a] & (1u << b)) pairs.push_back({a, b});
    S dist(0);
    for (size_t x = 0; x < pairs.size(); ++x)
      for (size_t y = x; y < pairs.size(); ++y) {
        S gap = ScalarOps<S>::abs(M.at(pairs[x].first, pairs[y].first) -
                                  N.at(pairs[x].second, pairs[y].second));
        if (gap > dist) dist = gap;
      }
    if (first || dist < res.value * S(2)) {
      res.value = dist / S(2);
      Correspondence w = Correspondence::empty(nA, nB);
      for (auto& [a, b] : pairs) w.set(a, b);
      res.witness = w;
      first = false;
    }
  };

  // odometer over nonempty row masks
  while (true) {
    evaluate();
    int pos = 0;
    while (pos < nA) {
      if (rows[pos] < full) {
        ++rows[pos];
        break;
      }
      rows[pos] = 1;
      ++pos;
    }
    if (pos == nA) break;
  }
  return res;
}

} // namespace metriclab::oracle
