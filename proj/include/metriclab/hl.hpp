// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "metriclab/correspondence.hpp"
#include "metriclab/hausdorff.hpp"
#include "metriclab/metric_space.hpp"

namespace metriclab {

inline constexpr int kHlExhaustiveMaxCells = 49;
inline constexpr uint64_t kHlSearchBudget = 500'000;

/// Both HL(eps) inequalities for the related pairs (i,j), (i2,j2).
inline bool hl_pair_ok(const MetricSpace& M, const MetricSpace& N, double eps, int i, int j,
                       int i2, int j2) {
  double d = M.at(i, i2), e = N.at(j, j2);
  if (e > d + eps * std::max(1.0, d) + kTauEq) return false;
  if (d > e + eps * std::max(1.0, e) + kTauEq) return false;
  return true;
}

/// Verifies that R witnesses HL(eps)-closeness of M and N.
inline bool hl_witnesses(const MetricSpace& M, const MetricSpace& N, double eps,
                         const Correspondence& R) {
  if (R.nA != M.n || R.nB != N.n) return false;
  if (!R.total()) return false;
  auto ps = R.pairs();
  for (size_t x = 0; x < ps.size(); ++x)
    for (size_t y = x; y < ps.size(); ++y)
      if (!hl_pair_ok(M, N, eps, ps[x].first, ps[x].second, ps[y].first, ps[y].second))
        return false;
  return true;
}

struct HlWitnessResult {
  std::optional<Correspondence> witness;
  bool complete = false;  // true when "absent" is definitive
};

namespace detail {

struct HlSearch {
  const MetricSpace& M;
  const MetricSpace& N;
  double eps;
  uint64_t budget;
  uint64_t nodes = 0;
  bool exhausted = false;
  std::vector<std::pair<int, int>> cur;
  std::optional<Correspondence> found;

  bool compatible(int i, int j) const {
    for (const auto& [i2, j2] : cur)
      if (!hl_pair_ok(M, N, eps, i, j, i2, j2)) return false;
    return true;
  }

  void coverCols(size_t idx, const std::vector<int>& missing) {
    if (found || exhausted) return;
    if (idx == missing.size()) {
      Correspondence w = Correspondence::empty(M.n, N.n);
      for (const auto& [a, b] : cur) w.set(a, b);
      found = w;
      return;
    }
    int j = missing[idx];
    for (int i = 0; i < M.n; ++i) {
      if (++nodes > budget) {
        exhausted = true;
        return;
      }
      if (!compatible(i, j)) continue;
      cur.push_back({i, j});
      coverCols(idx + 1, missing);
      cur.pop_back();
      if (found || exhausted) return;
    }
  }

  void assignRows(int i, std::vector<uint8_t>& covered) {
    if (found || exhausted) return;
    if (i == M.n) {
      std::vector<int> missing;
      for (int j = 0; j < N.n; ++j)
        if (!covered[j]) missing.push_back(j);
      coverCols(0, missing);
      return;
    }
    for (int j = 0; j < N.n; ++j) {
      if (++nodes > budget) {
        exhausted = true;
        return;
      }
      if (!compatible(i, j)) continue;
      cur.push_back({i, j});
      bool was = covered[j];
      covered[j] = 1;
      assignRows(i + 1, covered);
      covered[j] = was;
      cur.pop_back();
      if (found || exhausted) return;
    }
  }
};

} // namespace detail

/// Searches for a correspondence witnessing HL(eps)-closeness. Complete for
/// nA*nB within the exhaustive threshold; a bounded search beyond that, which
/// is sound (any returned witness verifies) but may miss one.
inline HlWitnessResult hl_close(const MetricSpace& M, const MetricSpace& N, double eps) {
  if (!(eps > 0)) throw Error("NonPositiveEps", "eps must be positive");
  bool exhaustiveRegime = (int64_t)M.n * N.n <= kHlExhaustiveMaxCells;
  detail::HlSearch search{
      M,  N, eps, exhaustiveRegime ? std::numeric_limits<uint64_t>::max() : kHlSearchBudget,
      0,  false, {}, {}};
  std::vector<uint8_t> covered(N.n, 0);
  search.assignRows(0, covered);
  HlWitnessResult res;
  if (search.found && hl_witnesses(M, N, eps, *search.found)) res.witness = search.found;
  res.complete = !search.exhausted;
  return res;
}

/// phi_2 of the HL-by-correspondences lemma: the certified upper bound on the
/// Hausdorff-Lipschitz distance produced from one HL(eps) witness.
inline double hl_phi2(double eps) {
  double s = std::sqrt(eps);
  return 2 * eps + 2 * s + std::log(1 + std::max(eps, s)) + eps * std::max(1.0, eps + s);
}

/// The materialized derivation behind hl_upper_from_witness: the net, the
/// selector, and the margin of every intermediate bound (bound - observed).
struct HlUpperReport {
  double phi2 = 0;
  double delta = 0;
  std::vector<int> netM;
  PairMap selector;           // net point -> chosen partner in N
  double netCorrMargin = 0;   // 2*delta - distortion of the M<->net correspondence
  double coverMargin = 0;     // (delta + eps*max{1,delta}) - worst distance of N to the image net
  double imageCorrMargin = 0; // 2*(delta + eps*max{1,delta}) - distortion of the N<->image net one
  double lipSelectorMargin = 0;     // max{1+eps, 1+eps/delta} - Lip(r)
  double lipSelectorInvMargin = 0;  // (1 + max{eps, sqrt(eps)}) - Lip(r^-1)
  bool allHold = false;
};

inline HlUpperReport hl_upper_from_witness(const MetricSpace& M, const MetricSpace& N, double eps,
                                           const Correspondence& R, uint64_t netSeed = 0) {
  if (!hl_witnesses(M, N, eps, R))
    throw Error("WitnessInvalid", "correspondence does not witness HL(eps)-closeness");
  HlUpperReport rep;
  rep.phi2 = hl_phi2(eps);
  double delta = eps + std::sqrt(eps);
  rep.delta = delta;
  rep.netM = max_separated_net(M, delta, netSeed);

  // selector r: first related partner of each net point
  for (int i : rep.netM) {
    int r = -1;
    for (int j = 0; j < N.n; ++j)
      if (R.at(i, j)) {
        r = j;
        break;
      }
    rep.selector.push_back({i, r});
  }

  // rho_GH(M, net) <= delta: the nearest-net correspondence has distortion < 2 delta
  {
    double worst = 0;
    std::vector<std::pair<int, int>> corr;  // (point of M, net slot)
    for (int x = 0; x < M.n; ++x)
      for (size_t s = 0; s < rep.netM.size(); ++s)
        if (M.at(x, rep.netM[s]) < delta) corr.push_back({x, (int)s});
    for (size_t a = 0; a < corr.size(); ++a)
      for (size_t b = a; b < corr.size(); ++b) {
        double gap = std::fabs(M.at(corr[a].first, corr[b].first) -
                               M.at(rep.netM[corr[a].second], rep.netM[corr[b].second]));
        worst = std::max(worst, gap);
      }
    rep.netCorrMargin = 2 * delta - worst;
  }

  // every point of N is within delta + eps*max{1,delta} of the image net;
  // the nearest-image correspondence then witnesses the second GH bound
  {
    double bound = delta + eps * std::max(1.0, delta);
    double worst = 0;
    std::vector<std::pair<int, int>> corr;  // (point of N, selector slot)
    for (int j = 0; j < N.n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (size_t s = 0; s < rep.selector.size(); ++s) {
        double v = N.at(j, rep.selector[s].second);
        best = std::min(best, v);
        if (v < bound) corr.push_back({j, (int)s});
      }
      worst = std::max(worst, best);
    }
    rep.coverMargin = bound - worst;
    double corrWorst = 0;
    for (size_t a = 0; a < corr.size(); ++a)
      for (size_t b = a; b < corr.size(); ++b) {
        double gap = std::fabs(N.at(corr[a].first, corr[b].first) -
                               N.at(rep.selector[corr[a].second].second,
                                    rep.selector[corr[b].second].second));
        corrWorst = std::max(corrWorst, gap);
      }
    rep.imageCorrMargin = 2 * bound - corrWorst;
  }

  // bi-Lipschitz constants of the selector between the two nets
  {
    double lipR = 1, lipRinv = 1;
    for (size_t a = 0; a < rep.selector.size(); ++a)
      for (size_t b = a + 1; b < rep.selector.size(); ++b) {
        double d = M.at(rep.selector[a].first, rep.selector[b].first);
        double e = N.at(rep.selector[a].second, rep.selector[b].second);
        if (e <= 0)
          throw Error("WitnessInvalid", "selector image collapses two net points");
        lipR = std::max(lipR, e / d);
        lipRinv = std::max(lipRinv, d / e);
      }
    rep.lipSelectorMargin = std::max(1 + eps, 1 + eps / delta) - lipR;
    rep.lipSelectorInvMargin = (1 + std::max(eps, std::sqrt(eps))) - lipRinv;
  }

  rep.allHold = rep.netCorrMargin >= -kTauEq && rep.coverMargin >= -kTauEq &&
                rep.imageCorrMargin >= -kTauEq && rep.lipSelectorMargin >= -kTauEq &&
                rep.lipSelectorInvMargin >= -kTauEq;
  return rep;
}

} // namespace metriclab
