// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

#include "metriclab/correspondence.hpp"
#include "metriclab/metric_space.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace metriclab {

struct SearchOptions {
  std::optional<uint64_t> budget;  // node limit; default depends on size
  bool parallel = false;           // OpenMP root-split (float mode only)
  const Correspondence* seedWitness = nullptr;  // known good incumbent, if any
};

/// Complete-search guarantees. Larger instances run under a node budget and
/// may come back with exact=false (the value is then a certified upper bound).
inline constexpr int kGhExhaustiveMaxSide = 7;
inline constexpr int kBijectionExhaustiveMaxN = 9;
inline constexpr uint64_t kDefaultBudget = 50'000'000;

namespace detail {

// Correspondences are searched as row assignments sigma : A -> B followed by
// one covering row per still-uncovered column. Every correspondence contains
// such a sub-relation of no larger distortion, so the minimum is unchanged.
template <class S>
struct GhSearch {
  const Space<S>& A;
  const Space<S>& B;
  uint64_t budget;
  uint64_t nodes = 0;
  bool exhausted = false;

  std::vector<int> rowOrder;             // rows by descending distance spread
  std::vector<std::pair<int, int>> cur;  // pairs (a, b) along the current path
  S bestD;
  std::vector<std::pair<int, int>> bestPairs;

  // parallel mode: pruning bound shared across threads
  std::atomic<double>* sharedBest = nullptr;

  GhSearch(const Space<S>& a, const Space<S>& b, uint64_t budget_)
      : A(a), B(b), budget(budget_), bestD(S(0)) {
    rowOrder.resize(A.n);
    std::iota(rowOrder.begin(), rowOrder.end(), 0);
    std::vector<S> spread(A.n, S(0));
    for (int i = 0; i < A.n; ++i) {
      S hi(0), lo(0);
      bool first = true;
      for (int j = 0; j < A.n; ++j) {
        if (j == i) continue;
        if (first || A.at(i, j) > hi) hi = A.at(i, j);
        if (first || A.at(i, j) < lo) lo = A.at(i, j);
        first = false;
      }
      spread[i] = hi - lo;
    }
    std::stable_sort(rowOrder.begin(), rowOrder.end(),
                     [&](int x, int y) { return spread[y] < spread[x]; });
  }

  S incCost(int a, int b) const {
    S m(0);
    for (const auto& [a2, b2] : cur) {
      S gap = ScalarOps<S>::abs(A.at(a, a2) - B.at(b, b2));
      if (gap > m) m = gap;
    }
    return m;
  }

  bool better(const S& cand) {
    if (sharedBest) {
      double cd = ScalarOps<S>::toDouble(cand);
      double cur = sharedBest->load(std::memory_order_relaxed);
      while (cd < cur && !sharedBest->compare_exchange_weak(cur, cd, std::memory_order_relaxed)) {
      }
    }
    return cand < bestD;
  }

  bool pruned(const S& partial) const {
    if (sharedBest) {
      // other threads may have found a tighter incumbent
      double sb = sharedBest->load(std::memory_order_relaxed);
      if (ScalarOps<S>::toDouble(partial) >= sb) return true;
    }
    return !(partial < bestD);
  }

  void record(const S& d) {
    if (better(d)) {
      bestD = d;
      bestPairs = cur;
    }
  }

  // cheapest extensions first: the incumbent tightens early and the sorted
  // order lets a pruned candidate cut the whole remainder of the loop
  std::vector<std::pair<S, int>> orderedCandidates(int fixed, bool fixedIsRow) const {
    int count = fixedIsRow ? B.n : A.n;
    std::vector<std::pair<S, int>> cand;
    cand.reserve(count);
    for (int o = 0; o < count; ++o)
      cand.push_back({fixedIsRow ? incCost(fixed, o) : incCost(o, fixed), o});
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    return cand;
  }

  // phase 2: cover the columns sigma missed, in ascending column order
  void coverColumns(size_t idx, const std::vector<int>& missing, const S& partial) {
    if (exhausted) return;
    if (idx == missing.size()) {
      record(partial);
      return;
    }
    int b = missing[idx];
    for (const auto& [inc, a] : orderedCandidates(b, false)) {
      if (++nodes > budget) {
        exhausted = true;
        return;
      }
      S next = partial < inc ? inc : partial;
      if (pruned(next)) break;
      cur.push_back({a, b});
      coverColumns(idx + 1, missing, next);
      cur.pop_back();
      if (exhausted) return;
    }
  }

  void assignRows(int depth, const S& partial, std::vector<uint8_t>& covered) {
    if (exhausted) return;
    if (depth == A.n) {
      std::vector<int> missing;
      for (int b = 0; b < B.n; ++b)
        if (!covered[b]) missing.push_back(b);
      coverColumns(0, missing, partial);
      return;
    }
    int a = rowOrder[depth];
    for (const auto& [inc, b] : orderedCandidates(a, true)) {
      if (++nodes > budget) {
        exhausted = true;
        return;
      }
      S next = partial < inc ? inc : partial;
      if (pruned(next)) break;
      cur.push_back({a, b});
      bool was = covered[b];
      covered[b] = 1;
      assignRows(depth + 1, next, covered);
      covered[b] = was;
      cur.pop_back();
      if (exhausted) return;
    }
  }

  // deterministic greedy pass used to seed the incumbent
  std::pair<S, std::vector<std::pair<int, int>>> greedy() const {
    std::vector<std::pair<int, int>> g;
    std::vector<uint8_t> covered(B.n, 0);
    S cost(0);
    auto inc = [&](int a, int b) {
      S m(0);
      for (const auto& [a2, b2] : g) {
        S gap = ScalarOps<S>::abs(A.at(a, a2) - B.at(b, b2));
        if (gap > m) m = gap;
      }
      return m;
    };
    for (int k = 0; k < A.n; ++k) {
      int a = rowOrder[k];
      int bestB = 0;
      S bestInc = inc(a, 0);
      for (int b = 1; b < B.n; ++b) {
        S c = inc(a, b);
        if (c < bestInc) {
          bestInc = c;
          bestB = b;
        }
      }
      g.push_back({a, bestB});
      covered[bestB] = 1;
      if (bestInc > cost) cost = bestInc;
    }
    for (int b = 0; b < B.n; ++b) {
      if (covered[b]) continue;
      int bestA = 0;
      S bestInc = inc(0, b);
      for (int a = 1; a < A.n; ++a) {
        S c = inc(a, b);
        if (c < bestInc) {
          bestInc = c;
          bestA = a;
        }
      }
      g.push_back({bestA, b});
      if (bestInc > cost) cost = bestInc;
    }
    return {cost, g};
  }

  void seedIncumbent() {
    // full correspondence first: distortion max(diam A, diam B), always valid
    S diam(0);
    for (int i = 0; i < A.n; ++i)
      for (int j = i + 1; j < A.n; ++j)
        if (A.at(i, j) > diam) diam = A.at(i, j);
    for (int i = 0; i < B.n; ++i)
      for (int j = i + 1; j < B.n; ++j)
        if (B.at(i, j) > diam) diam = B.at(i, j);
    bestD = diam;
    Correspondence full = Correspondence::full(A.n, B.n);
    bestPairs = full.pairs();
    auto [gc, gp] = greedy();
    if (gc < bestD) {
      bestD = gc;
      bestPairs = gp;
    }
  }

  void run() {
    std::vector<uint8_t> covered(B.n, 0);
    assignRows(0, S(0), covered);
  }
};

template <class S>
Certificate<S> packGhResult(const GhSearch<S>& s, int nA, int nB) {
  Certificate<S> cert;
  cert.value = s.bestD / S(2);
  Correspondence w = Correspondence::empty(nA, nB);
  for (const auto& [a, b] : s.bestPairs) w.set(a, b);
  cert.witness = w;
  cert.exact = !s.exhausted;
  cert.nodes = s.nodes;
  return cert;
}

} // namespace detail

/// Gromov-Hausdorff distance of two finite spaces: half the minimal
/// correspondence distortion, with the attaining correspondence as witness.
/// exact=false marks a budget-stopped search; the value is then still a valid
/// upper bound. In parallel mode the value matches the serial search but the
/// witness may be any optimum found first.
template <class S>
Certificate<S> gh_exact(const Space<S>& M, const Space<S>& N, const SearchOptions& opt = {}) {
  uint64_t budget = opt.budget ? *opt.budget
                               : (std::max(M.n, N.n) <= kGhExhaustiveMaxSide
                                      ? std::numeric_limits<uint64_t>::max()
                                      : kDefaultBudget);
  detail::GhSearch<S> search(M, N, budget);
  search.seedIncumbent();
  if (opt.seedWitness && opt.seedWitness->nA == M.n && opt.seedWitness->nB == N.n &&
      opt.seedWitness->total()) {
    S d = distortion(*opt.seedWitness, M, N);
    if (d < search.bestD) {
      search.bestD = d;
      search.bestPairs = opt.seedWitness->pairs();
    }
  }

#ifdef _OPENMP
  if (opt.parallel && !ScalarOps<S>::exact && M.n > 1) {
    // split the first row's column choices across threads; the shared bound
    // only tightens pruning, so the final minimum is the serial one
    std::atomic<double> shared(ScalarOps<S>::toDouble(search.bestD));
    int firstRow = search.rowOrder[0];
    std::vector<detail::GhSearch<S>> locals;
    locals.reserve(N.n);
    for (int b = 0; b < N.n; ++b) locals.push_back(search);
    std::atomic<uint64_t> totalNodes(0);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < N.n; ++b) {
      detail::GhSearch<S>& loc = locals[b];
      loc.sharedBest = &shared;
      loc.budget = std::numeric_limits<uint64_t>::max();
      std::vector<uint8_t> covered(N.n, 0);
      loc.cur.push_back({firstRow, b});
      covered[b] = 1;
      loc.assignRows(1, S(0), covered);
      totalNodes.fetch_add(loc.nodes, std::memory_order_relaxed);
    }
    int bestIdx = -1;
    for (int b = 0; b < N.n; ++b) {
      if (locals[b].bestPairs.empty()) continue;
      if (bestIdx < 0 || locals[b].bestD < locals[bestIdx].bestD) bestIdx = b;
    }
    if (bestIdx >= 0 && locals[bestIdx].bestD < search.bestD) {
      search.bestD = locals[bestIdx].bestD;
      search.bestPairs = locals[bestIdx].bestPairs;
    }
    search.nodes = totalNodes.load();
    search.exhausted = false;
    return detail::packGhResult(search, M.n, N.n);
  }
#endif
  search.run();
  return detail::packGhResult(search, M.n, N.n);
}

/// Every correspondence of distortion below the threshold contains one of the
/// returned (row-assignment plus column-cover) relations, itself below the
/// threshold. Cell-wise properties of all sub-threshold witnesses can
/// therefore be refuted on this family.
inline std::vector<Correspondence> gh_witnesses_below(const MetricSpace& M, const MetricSpace& N,
                                                      double threshold, size_t cap = 100000) {
  struct Collector {
    const MetricSpace& A;
    const MetricSpace& B;
    double threshold;
    size_t cap;
    std::vector<std::pair<int, int>> cur;
    std::vector<Correspondence> out;

    double incCost(int a, int b) const {
      double m = 0;
      for (const auto& [a2, b2] : cur) {
        double gap = std::fabs(A.at(a, a2) - B.at(b, b2));
        if (gap > m) m = gap;
      }
      return m;
    }
    void coverCols(size_t idx, const std::vector<int>& missing) {
      if (idx == missing.size()) {
        if (out.size() >= cap)
          throw Error("WitnessFamilyTooLarge", "more sub-threshold witnesses than the cap");
        Correspondence c = Correspondence::empty(A.n, B.n);
        for (const auto& [a, b] : cur) c.set(a, b);
        out.push_back(std::move(c));
        return;
      }
      int b = missing[idx];
      for (int a = 0; a < A.n; ++a) {
        if (incCost(a, b) >= threshold) continue;
        cur.push_back({a, b});
        coverCols(idx + 1, missing);
        cur.pop_back();
      }
    }
    void assignRows(int a, std::vector<uint8_t>& covered) {
      if (a == A.n) {
        std::vector<int> missing;
        for (int b = 0; b < B.n; ++b)
          if (!covered[b]) missing.push_back(b);
        coverCols(0, missing);
        return;
      }
      for (int b = 0; b < B.n; ++b) {
        if (incCost(a, b) >= threshold) continue;
        cur.push_back({a, b});
        bool was = covered[b];
        covered[b] = 1;
        assignRows(a + 1, covered);
        covered[b] = was;
        cur.pop_back();
      }
    }
  };
  Collector c{M, N, threshold, cap, {}, {}};
  std::vector<uint8_t> covered(N.n, 0);
  c.assignRows(0, covered);
  return c.out;
}

namespace detail {

// assignment search over bijections with a bottleneck objective; costFn maps
// an (assigned-pair, assigned-pair) interaction to the pairwise cost
template <class S, class CostFn>
struct BijectionSearch {
  const Space<S>& A;
  const Space<S>& B;
  CostFn cost;
  uint64_t budget;
  uint64_t nodes = 0;
  bool exhausted = false;

  std::vector<int> rowOrder;
  std::vector<int> assign;  // assign[k] = column of rowOrder[k]
  std::vector<uint8_t> used;
  S bestC;
  std::vector<int> bestPi;  // bestPi[a] = b
  bool haveBest = false;

  BijectionSearch(const Space<S>& a, const Space<S>& b, CostFn f, uint64_t budget_)
      : A(a), B(b), cost(f), budget(budget_), bestC(S(0)) {
    rowOrder.resize(A.n);
    std::iota(rowOrder.begin(), rowOrder.end(), 0);
    std::vector<S> spread(A.n, S(0));
    for (int i = 0; i < A.n; ++i) {
      S hi(0), lo(0);
      bool first = true;
      for (int j = 0; j < A.n; ++j) {
        if (j == i) continue;
        if (first || A.at(i, j) > hi) hi = A.at(i, j);
        if (first || A.at(i, j) < lo) lo = A.at(i, j);
        first = false;
      }
      spread[i] = hi - lo;
    }
    std::stable_sort(rowOrder.begin(), rowOrder.end(),
                     [&](int x, int y) { return spread[y] < spread[x]; });
    used.assign(B.n, 0);
  }

  S incCost(int depth, int b) const {
    S m(0);
    int a = rowOrder[depth];
    for (int k = 0; k < depth; ++k) {
      S c = cost(A.at(a, rowOrder[k]), B.at(b, assign[k]));
      if (c > m) m = c;
    }
    return m;
  }

  // admissible bound: every unassigned row still has to pick some free column
  S rowLowerBound(int depth) const {
    S lb(0);
    for (int k = depth; k < A.n; ++k) {
      int a = rowOrder[k];
      bool any = false;
      S rowMin(0);
      for (int b = 0; b < B.n; ++b) {
        if (used[b]) continue;
        S m(0);
        for (int j = 0; j < depth; ++j) {
          S c = cost(A.at(a, rowOrder[j]), B.at(b, assign[j]));
          if (c > m) m = c;
        }
        if (!any || m < rowMin) {
          rowMin = m;
          any = true;
        }
      }
      if (any && rowMin > lb) lb = rowMin;
    }
    return lb;
  }

  void dfs(int depth, const S& partial) {
    if (exhausted) return;
    if (depth == A.n) {
      if (!haveBest || partial < bestC) {
        bestC = partial;
        haveBest = true;
        bestPi.assign(A.n, -1);
        for (int k = 0; k < A.n; ++k) bestPi[rowOrder[k]] = assign[k];
      }
      return;
    }
    std::vector<std::pair<S, int>> cand;
    cand.reserve(B.n);
    for (int b = 0; b < B.n; ++b)
      if (!used[b]) cand.push_back({incCost(depth, b), b});
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [inc, b] : cand) {
      if (++nodes > budget) {
        exhausted = true;
        return;
      }
      S next = partial < inc ? inc : partial;
      if (haveBest && !(next < bestC)) break;
      assign.push_back(b);
      used[b] = 1;
      if (!haveBest || rowLowerBound(depth + 1) < bestC) dfs(depth + 1, next);
      used[b] = 0;
      assign.pop_back();
      if (exhausted) return;
    }
  }

  void seedGreedy() {
    std::vector<int> pi(A.n, -1);
    std::vector<uint8_t> taken(B.n, 0);
    std::vector<int> chosen;
    S c(0);
    for (int k = 0; k < A.n; ++k) {
      int a = rowOrder[k];
      int bestB = -1;
      S bestInc(0);
      for (int b = 0; b < B.n; ++b) {
        if (taken[b]) continue;
        S m(0);
        for (int j = 0; j < k; ++j) {
          S cc = cost(A.at(a, rowOrder[j]), B.at(b, chosen[j]));
          if (cc > m) m = cc;
        }
        if (bestB < 0 || m < bestInc) {
          bestInc = m;
          bestB = b;
        }
      }
      taken[bestB] = 1;
      chosen.push_back(bestB);
      pi[a] = bestB;
      if (bestInc > c) c = bestInc;
    }
    bestC = c;
    bestPi = pi;
    haveBest = true;
  }
};

} // namespace detail

/// Best bijection under the additive bottleneck objective: value is half the
/// minimal max pair gap. Requires equal point counts.
template <class S>
Certificate<S> gh_bijection(const Space<S>& M, const Space<S>& N, const SearchOptions& opt = {}) {
  if (M.n != N.n) throw Error("SizeMismatch", "gh_bijection needs equal point counts");
  uint64_t budget =
      opt.budget ? *opt.budget
                 : (M.n <= kBijectionExhaustiveMaxN ? std::numeric_limits<uint64_t>::max()
                                                    : kDefaultBudget);
  auto gap = [](const S& dm, const S& dn) { return ScalarOps<S>::abs(dm - dn); };
  detail::BijectionSearch<S, decltype(gap)> search(M, N, gap, budget);
  search.seedGreedy();
  search.dfs(0, S(0));
  Certificate<S> cert;
  cert.value = search.bestC / S(2);
  cert.witness = search.bestPi;
  cert.exact = !search.exhausted;
  cert.nodes = search.nodes;
  return cert;
}

/// Lipschitz distance: min over bijections of log max(Lip T, Lip T^-1).
/// Unequal point counts admit no bijection, so the value is +infinity.
inline Certificate<double> lipschitz_exact(const MetricSpace& M, const MetricSpace& N,
                                           const SearchOptions& opt = {}) {
  Certificate<double> cert;
  if (M.n != N.n) {
    cert.value = std::numeric_limits<double>::infinity();
    cert.witness = Bijection{};
    cert.exact = true;
    return cert;
  }
  uint64_t budget =
      opt.budget ? *opt.budget
                 : (M.n <= kBijectionExhaustiveMaxN ? std::numeric_limits<uint64_t>::max()
                                                    : kDefaultBudget);
  auto ratio = [](double dm, double dn) {
    double r = dn / dm;
    return r < 1.0 / r ? 1.0 / r : r;
  };
  detail::BijectionSearch<double, decltype(ratio)> search(M, N, ratio, budget);
  search.seedGreedy();
  if (M.n == 1) {
    // single bijection, no pairs
    cert.value = 0;
    cert.witness = Bijection{0};
    cert.exact = true;
    return cert;
  }
  search.dfs(0, 0.0);
  cert.value = std::log(search.bestC);
  cert.witness = search.bestPi;
  cert.exact = !search.exhausted;
  cert.nodes = search.nodes;
  return cert;
}

} // namespace metriclab
