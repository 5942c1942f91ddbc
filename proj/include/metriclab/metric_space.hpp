// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "metriclab/errors.hpp"
#include "metriclab/rational.hpp"

namespace metriclab {

/// Triangle checks are O(n^3); inputs beyond this are rejected outright.
inline constexpr int kMaxPoints = 200;

/// A finite metric space: n points with an exact symmetric distance matrix.
/// Instantiated with double (float mode) or Rat (exact mode). Values are
/// immutable after construction and safe to share across threads.
template <class S>
struct Space {
  int n = 0;
  std::vector<S> d;                 // row-major n*n
  std::vector<std::string> labels;  // empty, or one label per point

  const S& at(int i, int j) const { return d[(size_t)i * n + j]; }
  S& at(int i, int j) { return d[(size_t)i * n + j]; }

  static Space zero(int n) {
    Space s;
    s.n = n;
    s.d.assign((size_t)n * n, S(0));
    return s;
  }
};

using MetricSpace = Space<double>;
using RationalSpace = Space<Rat>;

/// Bounds of the class M_p^q: nonzero distances confined to [p, q].
template <class S>
struct ClassBounds {
  std::optional<S> p;  // minimum nonzero distance
  std::optional<S> q;  // maximum distance
};

template <class S>
struct WeightedGraph {
  struct Edge {
    int i, j;
    S w;
  };
  int n = 0;
  std::vector<Edge> edges;
};

namespace detail {

template <class S>
void checkMetricAxioms(const Space<S>& s, bool enforceSizeLimit) {
  const S tol = ScalarOps<S>::tol();
  const int n = s.n;
  if (n <= 0) throw Error("EmptySpace", "a metric space needs at least one point");
  if (enforceSizeLimit && n > kMaxPoints)
    throw Error("SizeLimit", "matrix has " + std::to_string(n) + " points, limit is " +
                                 std::to_string(kMaxPoints));
  for (int i = 0; i < n; ++i) {
    if (ScalarOps<S>::abs(s.at(i, i)) > tol)
      throw Error("NonZeroDiagonal", "d[" + std::to_string(i) + "][" + std::to_string(i) + "] != 0");
    for (int j = i + 1; j < n; ++j) {
      if (ScalarOps<S>::abs(s.at(i, j) - s.at(j, i)) > tol)
        throw Error("NotSymmetric",
                    "d[" + std::to_string(i) + "][" + std::to_string(j) + "] != d[j][i]");
      if (!(s.at(i, j) > tol))
        throw Error("NonPositiveOffDiagonal",
                    "d[" + std::to_string(i) + "][" + std::to_string(j) + "] <= 0");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (s.at(i, k) > s.at(i, j) + s.at(j, k) + tol)
          throw Error("TriangleViolation", "d(" + std::to_string(i) + "," + std::to_string(k) +
                                               ") > d(i," + std::to_string(j) + ") + d(j,k)");
      }
    }
}

} // namespace detail

/// Validates a square matrix as a finite metric (symmetry, zero diagonal,
/// positivity, triangle inequality within the mode tolerance).
template <class S>
Space<S> validate_metric(const std::vector<std::vector<S>>& m,
                         std::vector<std::string> labels = {}) {
  Space<S> s;
  s.n = (int)m.size();
  for (const auto& row : m)
    if ((int)row.size() != s.n)
      throw Error("NotSquare", "matrix rows must all have length n");
  s.d.reserve((size_t)s.n * s.n);
  for (const auto& row : m)
    for (const auto& v : row) s.d.push_back(v);
  s.labels = std::move(labels);
  if (!s.labels.empty() && (int)s.labels.size() != s.n)
    throw Error("BadLabels", "label count does not match point count");
  detail::checkMetricAxioms(s, true);
  return s;
}

/// Re-checks an already constructed space. Gadget outputs may exceed the
/// user-input size guard, so only the axioms are enforced here.
template <class S>
void validate_space(const Space<S>& s) {
  detail::checkMetricAxioms(s, false);
}

/// true iff every nonzero distance lies within the bounds that are present.
template <class S>
bool in_class(const Space<S>& s, const ClassBounds<S>& c) {
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j) {
      const S& v = s.at(i, j);
      if (c.p && v < *c.p) return false;
      if (c.q && v > *c.q) return false;
    }
  return true;
}

template <class S>
Space<S> scale(const Space<S>& s, const S& c) {
  if (!(c > S(0))) throw Error("NonPositiveScale", "scale factor must be positive");
  Space<S> out = s;
  for (auto& v : out.d) v = v * c;
  return out;
}

/// Capped shortest-path completion: d(i,j) = min(dist_G(i,j), cap), with cap
/// for pairs in different components. Dijkstra per source.
template <class S>
Space<S> graph_metric(const WeightedGraph<S>& g, const S& cap) {
  if (!(cap > S(0))) throw Error("NonPositiveCap", "cap must be positive");
  if (g.n <= 0) throw Error("EmptySpace", "graph has no vertices");
  std::vector<std::vector<std::pair<int, S>>> adj(g.n);
  std::vector<std::vector<bool>> seen(g.n, std::vector<bool>(g.n, false));
  for (const auto& e : g.edges) {
    if (e.i < 0 || e.i >= g.n || e.j < 0 || e.j >= g.n)
      throw Error("BadEdge", "edge endpoint out of range");
    if (e.i == e.j) throw Error("BadEdge", "self loop");
    if (seen[e.i][e.j]) throw Error("BadEdge", "duplicate edge");
    seen[e.i][e.j] = seen[e.j][e.i] = true;
    if (!(e.w > S(0))) throw Error("BadEdge", "non-positive weight");
    adj[e.i].push_back({e.j, e.w});
    adj[e.j].push_back({e.i, e.w});
  }
  Space<S> out = Space<S>::zero(g.n);
  std::vector<char> done(g.n);
  std::vector<std::optional<S>> dist(g.n);
  for (int src = 0; src < g.n; ++src) {
    std::fill(done.begin(), done.end(), 0);
    std::fill(dist.begin(), dist.end(), std::nullopt);
    dist[src] = S(0);
    using QE = std::pair<S, int>;
    auto cmp = [](const QE& a, const QE& b) { return b.first < a.first; };
    std::priority_queue<QE, std::vector<QE>, decltype(cmp)> pq(cmp);
    pq.push({S(0), src});
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (done[v]) continue;
      done[v] = 1;
      for (const auto& [w, len] : adj[v]) {
        S cand = dv + len;
        if (!dist[w] || cand < *dist[w]) {
          dist[w] = cand;
          pq.push({cand, w});
        }
      }
    }
    for (int j = 0; j < g.n; ++j) {
      if (j == src) continue;
      out.at(src, j) = (dist[j] && *dist[j] < cap) ? *dist[j] : cap;
    }
  }
  return out;
}

} // namespace metriclab
