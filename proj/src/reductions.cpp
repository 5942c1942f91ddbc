// SPDX-License-Identifier: Apache-2.0
#include "metriclab/reductions.hpp"

#include <algorithm>
#include <numeric>

namespace metriclab::reductions {

MetricSpace separate(const MetricSpace& M, const SeparationGadgetParams& params) {
  if (!(params.p > 0)) throw Error("NonPositiveSeparation", "p must be positive");
  if (params.copies < 2) throw Error("BadParams", "copies must be at least 2");
  long long total = (long long)M.n * params.copies;
  if (total > kMaxGadgetPoints)
    throw Error("GadgetTooLarge", "separation gadget would have " + std::to_string(total) +
                                      " points");
  MetricSpace out = MetricSpace::zero((int)total);
  for (int i = 0; i < M.n; ++i)
    for (int a = 0; a < params.copies; ++a)
      for (int j = 0; j < M.n; ++j)
        for (int b = 0; b < params.copies; ++b) {
          int u = i * params.copies + a, v = j * params.copies + b;
          if (u == v) continue;
          out.at(u, v) = M.at(i, j) + params.p;
        }
  out.labels.resize(out.n);
  for (int i = 0; i < M.n; ++i)
    for (int a = 0; a < params.copies; ++a)
      out.labels[i * params.copies + a] = "(" + std::to_string(i) + "," + std::to_string(a) + ")";
  return out;
}

int BoundGadgetLayout::indexOf(int i, int j, int k) const {
  for (size_t a = 0; a < pathPoints.size(); ++a)
    if (pathPoints[a].i == i && pathPoints[a].j == j && pathPoints[a].k == k)
      return inputPoints + (int)a;
  return -1;
}

BoundGadgetLayout bound_layout(const MetricSpace& M) {
  BoundGadgetLayout layout;
  layout.inputPoints = M.n;
  for (int i = 0; i < M.n; ++i)
    for (int j = i + 1; j < M.n; ++j) {
      // I_{i,j} = { k in Z : |k| < d(i,j)/2 }; at least 5 elements on M_5
      double half = M.at(i, j) / 2.0;
      int top = (int)std::floor(half);
      if ((double)top >= half) --top;  // |k| strictly below d/2
      for (int k = -top; k <= top; ++k) layout.pathPoints.push_back({i, j, k});
    }
  return layout;
}

MetricSpace bound(const MetricSpace& M) {
  if (!in_class(M, ClassBounds<double>{5.0, std::nullopt}))
    throw Error("InputNotInM5", "bound() needs all nonzero distances >= 5");
  BoundGadgetLayout layout = bound_layout(M);
  long long total = layout.inputPoints + (long long)layout.pathPoints.size();
  if (total > kMaxGadgetPoints)
    throw Error("GadgetTooLarge",
                "bound gadget would have " + std::to_string(total) + " points");

  WeightedGraph<double> g;
  g.n = (int)total;
  for (int i = 0; i < M.n; ++i)
    for (int j = i + 1; j < M.n; ++j) g.edges.push_back({i, j, M.at(i, j)});
  // group path points by their (i, j) lens for the within-lens edges
  for (size_t a = 0; a < layout.pathPoints.size(); ++a) {
    const auto& p = layout.pathPoints[a];
    int idx = layout.inputPoints + (int)a;
    double half = M.at(p.i, p.j) / 2.0;
    g.edges.push_back({p.i, idx, half + p.k});
    g.edges.push_back({p.j, idx, half - p.k});
    for (size_t b = a + 1; b < layout.pathPoints.size(); ++b) {
      const auto& q = layout.pathPoints[b];
      if (q.i != p.i || q.j != p.j) break;  // layout is lens-contiguous
      g.edges.push_back({idx, layout.inputPoints + (int)b, (double)std::abs(q.k - p.k)});
    }
  }
  MetricSpace out = graph_metric(g, 3.0);
  out.labels.resize(out.n);
  for (int i = 0; i < M.n; ++i) out.labels[i] = "m" + std::to_string(i);
  for (size_t a = 0; a < layout.pathPoints.size(); ++a) {
    const auto& p = layout.pathPoints[a];
    out.labels[layout.inputPoints + a] = "p(" + std::to_string(p.i) + "," + std::to_string(p.j) +
                                         "," + std::to_string(p.k) + ")";
  }
  return out;
}

Correspondence bound_forward_witness(const MetricSpace& M, const MetricSpace& N,
                                     const std::vector<int>& pi) {
  if (M.n != N.n || (int)pi.size() != M.n)
    throw Error("SizeMismatch", "bound_forward_witness needs equal sizes and a bijection");
  BoundGadgetLayout lm = bound_layout(M), ln = bound_layout(N);
  Correspondence R = Correspondence::empty(lm.inputPoints + (int)lm.pathPoints.size(),
                                           ln.inputPoints + (int)ln.pathPoints.size());
  auto strictHalf = [](double d) {
    int top = (int)std::floor(d / 2.0);
    if ((double)top >= d / 2.0) --top;
    return top;
  };
  for (int i = 0; i < M.n; ++i) R.set(i, pi[i]);
  for (int i = 0; i < M.n; ++i)
    for (int j = i + 1; j < M.n; ++j) {
      bool flip = pi[j] < pi[i];
      int na = std::min(pi[i], pi[j]), nb = std::max(pi[i], pi[j]);
      int topM = strictHalf(M.at(i, j)), topN = strictHalf(N.at(na, nb));
      for (int k = -topM; k <= topM; ++k) {
        int mIdx = lm.indexOf(i, j, k);
        if (std::abs(k) <= topN) {
          R.set(mIdx, ln.indexOf(na, nb, flip ? -k : k));
        } else {
          // surplus path point, absorbed by the image of the near endpoint
          R.set(mIdx, k < 0 ? pi[i] : pi[j]);
        }
      }
      for (int l = -topN; l <= topN; ++l) {
        if (std::abs(l) <= topM) continue;
        int nIdx = ln.indexOf(na, nb, l);
        // negative levels sit near n_{na}; relate to the original mapping there
        bool nearLow = l < 0;
        int mOriginal = (nearLow != flip) ? i : j;
        R.set(mOriginal, nIdx);
      }
    }
  return R;
}

namespace {

MetricSpace level_gadget(const MetricSpace& M, const LevelGadgetParams& params) {
  if (params.kMin > 0 || params.kMax < 0 || params.kMin > params.kMax)
    throw Error("BadParams", "levels must satisfy kMin <= 0 <= kMax");
  int levels = params.kMax - params.kMin + 1;
  long long total = (long long)M.n * levels + 1;
  if (total > kMaxGadgetPoints)
    throw Error("GadgetTooLarge", "level gadget would have " + std::to_string(total) + " points");
  MetricSpace out = MetricSpace::zero((int)total);
  int anchor = level_gadget_anchor(M, params);
  auto idx = [&](int i, int k) { return level_gadget_index(M, params, i, k); };
  for (int k = params.kMin; k <= params.kMax; ++k)
    for (int i = 0; i < M.n; ++i) {
      int u = idx(i, k);
      out.at(u, anchor) = out.at(anchor, u) = std::fabs(10.0 * k + 4.0) + 1.0;
      for (int l = params.kMin; l <= params.kMax; ++l)
        for (int j = 0; j < M.n; ++j) {
          int v = idx(j, l);
          if (v <= u) continue;
          double levelTerm = std::fabs(10.0 * (k - l));
          double metricTerm = std::min(1.0, std::ldexp(M.at(i, j), std::min(k, l)));
          out.at(u, v) = out.at(v, u) = levelTerm + metricTerm;
        }
    }
  out.labels.resize(out.n);
  for (int k = params.kMin; k <= params.kMax; ++k)
    for (int i = 0; i < M.n; ++i)
      out.labels[idx(i, k)] = "(" + std::to_string(i) + "," + std::to_string(k) + ")";
  out.labels[anchor] = "club";
  validate_space(out);
  return out;
}

} // namespace

MetricSpace lipschitz_gadget(const MetricSpace& M, const LevelGadgetParams& params) {
  return level_gadget(M, params);
}

MetricSpace hl_gadget(const MetricSpace& M, const LevelGadgetParams& params) {
  if (params.kMax != 0) throw Error("BadParams", "hl_gadget uses non-positive levels only");
  return level_gadget(M, params);
}

namespace {

bool sameVector(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

int findVector(const std::vector<std::vector<double>>& list, const std::vector<double>& v) {
  for (size_t i = 0; i < list.size(); ++i)
    if (sameVector(list[i], v)) return (int)i;
  return -1;
}

// recognize b = q a with a small rational q; denominators up to 16
bool rationalMultiple(const std::vector<double>& a, const std::vector<double>& b, Rational* q) {
  int pivot = -1;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i]) > 1e-12) {
      pivot = (int)i;
      break;
    }
  if (pivot < 0) return false;
  double ratio = b[pivot] / a[pivot];
  for (size_t i = 0; i < a.size(); ++i)
    if (std::fabs(b[i] - ratio * a[i]) > 1e-9) return false;
  for (long long den = 1; den <= 16; ++den) {
    double scaled = ratio * (double)den;
    long long num = (long long)std::llround(scaled);
    if (std::fabs(scaled - (double)num) < 1e-9) {
      long long g = std::gcd(num < 0 ? -num : num, den);
      if (g == 0) return false;
      *q = Rational{num / g, den / g};
      return true;
    }
  }
  return false;
}

std::vector<double> scaleVector(const std::vector<double>& a, const Rational& q) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * (double)q.num / (double)q.den;
  return out;
}

} // namespace

MetricSpace bm_gadget(const norms::NormOracle& nu, const BmGadgetParams& params,
                      BmGadgetLayout* layoutOut) {
  const auto& vecs = params.vectors;
  const int v = (int)vecs.size();
  if (v < 2) throw Error("BadParams", "need at least two vectors");
  for (const auto& x : vecs) {
    if ((int)x.size() != nu.dim()) throw Error("DimensionMismatch", "vector length != norm dim");
    if (norms::l2(x) < 1e-12) throw Error("BadParams", "vectors must be nonzero");
  }
  for (int i = 0; i < v; ++i)
    for (int j = i + 1; j < v; ++j)
      if (sameVector(vecs[i], vecs[j])) throw Error("BadParams", "vectors must be distinct");
  // the list must be symmetric: negation is the scalar -1, always in play
  for (int i = 0; i < v; ++i) {
    std::vector<double> neg(vecs[i]);
    for (auto& x : neg) x = -x;
    if (findVector(vecs, neg) < 0)
      throw Error("ClosureViolation", "vector list is not closed under negation");
  }

  // pairwise norm values, with the lexicographic order on coordinate tuples
  std::vector<int> lex(v);
  std::iota(lex.begin(), lex.end(), 0);
  std::sort(lex.begin(), lex.end(), [&](int a, int b) {
    return std::lexicographical_compare(vecs[a].begin(), vecs[a].end(), vecs[b].begin(),
                                        vecs[b].end());
  });
  std::vector<int> rank(v);
  for (int i = 0; i < v; ++i) rank[lex[i]] = i;

  std::vector<std::pair<int, int>> vecPairs;  // a before b in lex order
  for (int a = 0; a < v; ++a)
    for (int b = 0; b < v; ++b)
      if (rank[a] < rank[b]) vecPairs.push_back({a, b});

  auto nuDiff = [&](int a, int b) {
    std::vector<double> d(vecs[a]);
    for (size_t i = 0; i < d.size(); ++i) d[i] -= vecs[b][i];
    return nu(d);
  };

  // the c sequence: elements of the 16/15 geometric grid around 17/8, keeping
  // just the grid points needed so each pairwise distance r sees some c with
  // c*r in (2, 9/4); the window is wider than the grid step, so one always
  // exists
  std::vector<double> c = params.c;
  if (c.empty()) {
    std::vector<double> rs;
    for (auto& [a, b] : vecPairs) rs.push_back(nuDiff(a, b));
    std::sort(rs.begin(), rs.end(), std::greater<>());
    const double base = 17.0 / 8.0, ratio = 16.0 / 15.0;
    for (double r : rs) {
      bool covered = false;
      for (double ci : c) covered = covered || (ci * r > 2.0 && ci * r < 2.25);
      if (covered) continue;
      double e = std::ceil(std::log(2.0 / (r * base)) / std::log(ratio) + 1e-12);
      double ci = base * std::pow(ratio, e);
      while (!(ci * r > 2.0)) ci *= ratio;
      while (!(ci * r < 2.25)) ci /= ratio;
      c.push_back(ci);
    }
    std::sort(c.begin(), c.end());
  }
  for (auto& [a, b] : vecPairs) {
    double r = nuDiff(a, b);
    bool covered = false;
    for (double ci : c) covered = covered || (ci * r > 2.0 && ci * r < 2.25);
    if (!covered)
      throw Error("CoverageViolation",
                  "no c_m lands in (2, 9/4) for pairwise distance " + std::to_string(r));
  }

  // scalar structure: which (a, q) f-paths to build
  std::vector<Rational> rationals = params.rationals;
  if (rationals.empty() && params.deriveRationals) {
    for (int a = 0; a < v; ++a)
      for (int b = 0; b < v; ++b) {
        if (a == b) continue;
        Rational q;
        if (rationalMultiple(vecs[a], vecs[b], &q) && !(q == Rational{1, 1})) {
          if (std::find(rationals.begin(), rationals.end(), q) == rationals.end())
            rationals.push_back(q);
        }
      }
  }
  // pi : used rationals -> {2, 3, ...}, ascending |num| + |den|
  std::sort(rationals.begin(), rationals.end(), [](const Rational& x, const Rational& y) {
    long long wx = (x.num < 0 ? -x.num : x.num) + x.den;
    long long wy = (y.num < 0 ? -y.num : y.num) + y.den;
    if (wx != wy) return wx < wy;
    return x < y;
  });
  auto piOf = [&](size_t qi) { return (int)qi + 2; };

  struct FPath {
    int a;         // source vector
    int target;    // index of q*a in the list
    int length;    // pi(q) interior points
  };
  std::vector<FPath> fPaths;
  for (size_t qi = 0; qi < rationals.size(); ++qi)
    for (int a = 0; a < v; ++a) {
      std::vector<double> target = scaleVector(vecs[a], rationals[qi]);
      int t = findVector(vecs, target);
      if (t < 0) {
        if (!params.rationals.empty())
          throw Error("ClosureViolation", "required q*a is missing from the vector list");
        continue;  // derived rationals only build the realizable paths
      }
      fPaths.push_back({a, t, piOf(qi)});
    }

  // additive structure: x-triangles for pairs whose sum is listed
  struct XTriangle {
    int a, b, sum;
  };
  std::vector<XTriangle> xTriangles;
  for (auto& [a, b] : vecPairs) {
    std::vector<double> s(vecs[a]);
    for (size_t i = 0; i < s.size(); ++i) s[i] += vecs[b][i];
    int t = findVector(vecs, s);
    if (t >= 0) xTriangles.push_back({a, b, t});
  }

  // allocate points: vectors, p-paths, f-paths, x-triangles
  long long total = v;
  for (size_t m = 0; m < c.size(); ++m) total += (long long)vecPairs.size() * (7 + (long long)m);
  for (const auto& f : fPaths) total += f.length;
  total += 3LL * (long long)xTriangles.size();
  if (total > kMaxGadgetPoints)
    throw Error("GadgetTooLarge", "bm gadget would have " + std::to_string(total) + " points");

  WeightedGraph<double> g;
  g.n = (int)total;
  std::vector<std::string> labels((size_t)total);
  for (int i = 0; i < v; ++i) labels[i] = "v" + std::to_string(i);
  int nextIdx = v;

  for (int i = 0; i < v; ++i)
    for (int j = i + 1; j < v; ++j) g.edges.push_back({i, j, 15.0});

  for (size_t pi = 0; pi < vecPairs.size(); ++pi) {
    auto [a, b] = vecPairs[pi];
    double r = nuDiff(a, b);
    for (size_t mi = 0; mi < c.size(); ++mi) {
      int m = 7 + (int)mi;
      double K = std::max(2.0, std::min(3.0, c[mi] * r));
      int prev = a;
      for (int k = 1; k <= m; ++k) {
        int cur = nextIdx++;
        labels[cur] = "p(" + std::to_string(a) + "," + std::to_string(b) + "," +
                      std::to_string(m) + "," + std::to_string(k) + ")";
        g.edges.push_back({prev, cur, K});
        prev = cur;
      }
      g.edges.push_back({prev, b, K});
    }
  }
  for (const auto& f : fPaths) {
    int prev = f.a;
    for (int k = 1; k <= f.length; ++k) {
      int cur = nextIdx++;
      labels[cur] = "f(" + std::to_string(f.a) + "->" + std::to_string(f.target) + "," +
                    std::to_string(k) + ")";
      g.edges.push_back({prev, cur, k == 1 ? 7.0 : 10.0});
      prev = cur;
    }
    g.edges.push_back({prev, f.target, 10.0});
  }
  for (const auto& x : xTriangles) {
    int x1 = nextIdx++, x2 = nextIdx++, x3 = nextIdx++;
    labels[x1] = "x1(" + std::to_string(x.a) + "," + std::to_string(x.b) + ")";
    labels[x2] = "x2(" + std::to_string(x.a) + "," + std::to_string(x.b) + ")";
    labels[x3] = "x3(" + std::to_string(x.a) + "," + std::to_string(x.b) + ")";
    g.edges.push_back({x.a, x1, 5.0});
    g.edges.push_back({x.b, x2, 5.0});
    g.edges.push_back({x1, x3, 5.0});
    g.edges.push_back({x2, x3, 5.0});
    g.edges.push_back({x3, x.sum, 5.0});
  }

  MetricSpace out = graph_metric(g, 15.0);
  out.labels = std::move(labels);
  if (layoutOut) {
    layoutOut->vectorCount = v;
    layoutOut->labels = out.labels;
    layoutOut->cUsed = c;
    layoutOut->rationalsUsed = rationals;
  }
  return out;
}

MetricSpace kadets_gadget(const norms::NormOracle& nu, const KadetsGadgetParams& params) {
  const auto& pts = params.spherePoints;
  const int s = (int)pts.size();
  if (s < 2) throw Error("BadParams", "need at least two sphere points");
  for (const auto& x : pts) {
    if ((int)x.size() != nu.dim()) throw Error("DimensionMismatch", "vector length != norm dim");
    if (std::fabs(nu(x) - 1.0) > 1e-9)
      throw Error("NonUnitVector", "sphere points must have norm 1");
  }
  for (const auto& x : pts) {
    std::vector<double> neg(x);
    for (auto& c : neg) c = -c;
    if (findVector(pts, neg) < 0)
      throw Error("BadParams", "sphere point list is not closed under negation");
  }
  long long total = s;
  for (const auto& F : params.families) {
    if (F.empty()) throw Error("EmptyFamily", "families must be non-empty");
    for (int k : F)
      if (k < 0 || k >= s) throw Error("IndexOutOfRange", "family index out of range");
    total += (long long)F.size();
  }
  if (total > kMaxGadgetPoints)
    throw Error("GadgetTooLarge", "kadets gadget would have " + std::to_string(total) + " points");

  auto nuDiff = [&](int a, int b) {
    std::vector<double> d(pts[a]);
    for (size_t i = 0; i < d.size(); ++i) d[i] -= pts[b][i];
    return nu(d);
  };

  MetricSpace out = MetricSpace::zero((int)total);
  out.labels.resize(out.n);
  for (int i = 0; i < s; ++i) out.labels[i] = "x" + std::to_string(i);

  struct FamPoint {
    int family, k;
  };
  std::vector<FamPoint> famPoints;
  std::vector<double> famMean;  // ||sum_F x|| / |F| per family
  {
    for (size_t fi = 0; fi < params.families.size(); ++fi) {
      std::vector<double> sum(nu.dim(), 0.0);
      for (int k : params.families[fi])
        for (int c = 0; c < nu.dim(); ++c) sum[c] += pts[k][c];
      famMean.push_back(nu(sum) / (double)params.families[fi].size());
      for (int k : params.families[fi]) famPoints.push_back({(int)fi, k});
    }
  }
  for (size_t a = 0; a < famPoints.size(); ++a)
    out.labels[s + a] = "p(F" + std::to_string(famPoints[a].family) + "," +
                        std::to_string(famPoints[a].k) + ")";

  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) out.at(i, j) = out.at(j, i) = nuDiff(i, j);
  for (size_t a = 0; a < famPoints.size(); ++a) {
    int u = s + (int)a;
    for (int i = 0; i < s; ++i)
      out.at(i, u) = out.at(u, i) = 10.0 + nuDiff(i, famPoints[a].k);
    for (size_t b = a + 1; b < famPoints.size(); ++b) {
      int w = s + (int)b;
      double dist = famPoints[a].family == famPoints[b].family
                        ? 15.0 + famMean[famPoints[a].family]
                        : 20.0;
      out.at(u, w) = out.at(w, u) = dist;
    }
  }
  validate_space(out);
  return out;
}

} // namespace metriclab::reductions
