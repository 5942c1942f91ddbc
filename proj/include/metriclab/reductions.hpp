// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "metriclab/correspondence.hpp"
#include "metriclab/metric_space.hpp"
#include "metriclab/norms.hpp"

namespace metriclab::reductions {

/// Gadget constructors refuse outputs beyond this; exact GH search downstream
/// is exponential.
inline constexpr int kMaxGadgetPoints = 500;

struct SeparationGadgetParams {
  double p = 1.0;  // added separation
  int copies = 2;  // truncation of the countable factor
};

/// d~((i,a),(j,b)) = d(i,j) + p for distinct points. Output lands in M_p, and
/// in M_p^{q+p} when the input lies in M^q. Point (i,a) gets index i*copies+a.
MetricSpace separate(const MetricSpace& M, const SeparationGadgetParams& params);

/// The boundedness gadget M_5 -> M^3: original points plus the path points
/// p_{i,j,k}, k in I_{i,j} = { k : |k| < d(i,j)/2 }, with the direct distances
/// d'(m_i, p_{i,j,k}) = d(i,j)/2 + k, d'(p_{i,j,k}, p_{i,j,k'}) = |k - k'|,
/// d'(m_i, m_j) = d(i,j), completed by the capped graph metric at 3.
MetricSpace bound(const MetricSpace& M);

/// index bookkeeping for bound(): which output point is which
struct BoundGadgetLayout {
  int inputPoints = 0;
  struct PathPoint {
    int i, j, k;  // i < j, k in I_{i,j}
  };
  std::vector<PathPoint> pathPoints;  // output index = inputPoints + position

  int indexOf(int i, int j, int k) const;  // -1 when absent
};
BoundGadgetLayout bound_layout(const MetricSpace& M);

/// The explicit correspondence between bound(M) and bound(N) induced by a
/// bijection pi with pairwise gaps below 2 (originals to originals, path
/// points aligned by level, surplus path points absorbed by the nearer
/// endpoint). Its distortion is at most the maximal pairwise gap of pi.
Correspondence bound_forward_witness(const MetricSpace& M, const MetricSpace& N,
                                     const std::vector<int>& pi);

struct LevelGadgetParams {
  int kMin = 0;
  int kMax = 0;
};

/// The level gadget behind the Lipschitz-to-GH reduction, on levels
/// kMin..kMax plus the anchor point: d~((i,k),(j,l)) = |10k - 10l| +
/// min{1, 2^min(k,l) d(i,j)}, d~((i,k), anchor) = |10k + 4| + 1.
/// Point (i,k) gets index (k - kMin)*n + i; the anchor is last.
MetricSpace lipschitz_gadget(const MetricSpace& M, const LevelGadgetParams& params);

/// Same construction restricted to non-positive levels (kMax must be 0).
MetricSpace hl_gadget(const MetricSpace& M, const LevelGadgetParams& params);

inline int level_gadget_index(const MetricSpace& M, const LevelGadgetParams& p, int i, int k) {
  return (k - p.kMin) * M.n + i;
}
inline int level_gadget_anchor(const MetricSpace& M, const LevelGadgetParams& p) {
  return M.n * (p.kMax - p.kMin + 1);
}

/// Exact rational, kept exact so path lengths stay comparable.
struct Rational {
  long long num = 0;
  long long den = 1;
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
};

struct BmGadgetParams {
  std::vector<std::vector<double>> vectors;  // distinct nonzero, closed under negation
  std::vector<double> c;          // c_7, c_8, ...; empty = derived geometric grid
  std::vector<Rational> rationals;  // explicit scalar set; empty = derived from the list
  bool deriveRationals = true;      // when true and rationals empty, scan the list
};

struct BmGadgetLayout {
  int vectorCount = 0;
  std::vector<std::string> labels;
  std::vector<double> cUsed;
  std::vector<Rational> rationalsUsed;  // ordered as mapped to pi = 2, 3, ...
};

/// The Banach-Mazur gadget: vectors at mutual distance 15, the K^m_{a,b}
/// paths with K = max{2, min{3, c_m nu(a-b)}}, the f-paths encoding scalar
/// multiplication (7 then 10s), the x-triangles encoding addition (all 5s),
/// completed by the capped graph metric at 15.
MetricSpace bm_gadget(const norms::NormOracle& nu, const BmGadgetParams& params,
                      BmGadgetLayout* layout = nullptr);

struct KadetsGadgetParams {
  std::vector<std::vector<double>> spherePoints;  // unit vectors, closed under negation
  std::vector<std::vector<int>> families;         // non-empty index subsets
};

/// The Kadets gadget: sphere points keep their norm distances; the family
/// points sit at 10 + ||x_i - x_k|| from the sphere, 15 + ||sum_F x|| / |F|
/// within one family and 20 across families.
MetricSpace kadets_gadget(const norms::NormOracle& nu, const KadetsGadgetParams& params);

} // namespace metriclab::reductions
