// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>
#include <vector>

#include "metriclab/metric_space.hpp"

namespace metriclab {

/// Total binary relation between two point sets: every row and every column
/// is related to at least one partner.
struct Correspondence {
  int nA = 0, nB = 0;
  std::vector<uint8_t> rel;  // row-major nA*nB

  bool at(int a, int b) const { return rel[(size_t)a * nB + b] != 0; }
  void set(int a, int b, bool v = true) { rel[(size_t)a * nB + b] = v ? 1 : 0; }

  static Correspondence empty(int nA, int nB) {
    Correspondence c;
    c.nA = nA;
    c.nB = nB;
    c.rel.assign((size_t)nA * nB, 0);
    return c;
  }
  static Correspondence full(int nA, int nB) {
    Correspondence c = empty(nA, nB);
    std::fill(c.rel.begin(), c.rel.end(), 1);
    return c;
  }
  static Correspondence identity(int n) {
    Correspondence c = empty(n, n);
    for (int i = 0; i < n; ++i) c.set(i, i);
    return c;
  }
  static Correspondence fromBijection(const std::vector<int>& pi) {
    Correspondence c = empty((int)pi.size(), (int)pi.size());
    for (int i = 0; i < (int)pi.size(); ++i) c.set(i, pi[i]);
    return c;
  }

  bool total() const {
    for (int a = 0; a < nA; ++a) {
      bool any = false;
      for (int b = 0; b < nB; ++b) any = any || at(a, b);
      if (!any) return false;
    }
    for (int b = 0; b < nB; ++b) {
      bool any = false;
      for (int a = 0; a < nA; ++a) any = any || at(a, b);
      if (!any) return false;
    }
    return true;
  }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> p;
    for (int a = 0; a < nA; ++a)
      for (int b = 0; b < nB; ++b)
        if (at(a, b)) p.push_back({a, b});
    return p;
  }
};

/// sup over related (m,n),(m',n') of |d_M(m,m') - d_N(n,n')|.
template <class S>
S distortion(const Correspondence& r, const Space<S>& m, const Space<S>& n) {
  if (r.nA != m.n || r.nB != n.n)
    throw Error("DimensionMismatch", "correspondence does not match the spaces");
  auto ps = r.pairs();
  S best(0);
  for (size_t x = 0; x < ps.size(); ++x)
    for (size_t y = x; y < ps.size(); ++y) {
      S gap = ScalarOps<S>::abs(m.at(ps[x].first, ps[y].first) - n.at(ps[x].second, ps[y].second));
      if (gap > best) best = gap;
    }
  return best;
}

using Bijection = std::vector<int>;
using PairMap = std::vector<std::pair<int, int>>;
using Witness = std::variant<Correspondence, Bijection, PairMap>;

/// A computed distance value, the witness that attains it, and whether the
/// search that produced it was complete.
template <class S>
struct Certificate {
  S value{};
  Witness witness;
  bool exact = false;
  uint64_t nodes = 0;  // search nodes expanded
};

} // namespace metriclab
