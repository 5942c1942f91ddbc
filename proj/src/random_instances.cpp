// SPDX-License-Identifier: Apache-2.0
#include "metriclab/random_instances.hpp"

#include <algorithm>

namespace metriclab {

void metric_closure(MetricSpace& m) {
  for (int k = 0; k < m.n; ++k)
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j)
        if (i != j && i != k && j != k)
          m.at(i, j) = std::min(m.at(i, j), m.at(i, k) + m.at(k, j));
}

void metric_closure(RationalSpace& m) {
  for (int k = 0; k < m.n; ++k)
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j)
        if (i != j && i != k && j != k) {
          Rat through = m.at(i, k) + m.at(k, j);
          if (through < m.at(i, j)) m.at(i, j) = through;
        }
}

MetricSpace random_space(const RandomInstanceSpec& spec) {
  if (spec.pointCount < 1 || !(spec.lo > 0) || !(spec.lo <= spec.hi))
    throw Error("BadParams", "need pointCount >= 1 and 0 < lo <= hi");
  RandomStream rng(spec.seed);
  MetricSpace m = MetricSpace::zero(spec.pointCount);
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) m.at(i, j) = m.at(j, i) = rng.uniform(spec.lo, spec.hi);
  metric_closure(m);
  validate_space(m);
  if (spec.classBounds && !in_class(m, *spec.classBounds))
    throw Error("ClassViolation", "generated space misses the requested class bounds");
  return m;
}

RationalSpace random_rational_space(int pointCount, const Rat& lo, const Rat& hi,
                                    long long denominator, uint64_t seed) {
  if (pointCount < 1 || !(Rat(0) < lo) || hi < lo || denominator < 1)
    throw Error("BadParams", "need pointCount >= 1, 0 < lo <= hi, denominator >= 1");
  RandomStream rng(seed);
  Rat span = hi - lo;
  long long steps = (span * Rat(denominator)).num() / (span * Rat(denominator)).den();
  RationalSpace m = RationalSpace::zero(pointCount);
  for (int i = 0; i < pointCount; ++i)
    for (int j = i + 1; j < pointCount; ++j) {
      Rat v = lo + Rat((long long)rng.below((uint64_t)steps + 1), denominator);
      m.at(i, j) = m.at(j, i) = v;
    }
  metric_closure(m);
  validate_space(m);
  return m;
}

MetricSpace perturb_space(const MetricSpace& m, double eta, double lo, double hi, uint64_t seed) {
  RandomStream rng(seed);
  MetricSpace out = m;
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) {
      double v = m.at(i, j) * (1.0 + rng.uniform(-eta, eta));
      v = std::clamp(v, lo, hi);
      out.at(i, j) = out.at(j, i) = v;
    }
  metric_closure(out);
  validate_space(out);
  return out;
}

MetricSpace relabel_space(const MetricSpace& m, uint64_t seed) {
  RandomStream rng(seed);
  std::vector<int> perm(m.n);
  for (int i = 0; i < m.n; ++i) perm[i] = i;
  for (int i = m.n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below((uint64_t)i + 1)]);
  MetricSpace out = MetricSpace::zero(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out.at(perm[i], perm[j]) = m.at(i, j);
  if (!m.labels.empty()) {
    out.labels.resize(m.n);
    for (int i = 0; i < m.n; ++i) out.labels[perm[i]] = m.labels[i];
  }
  return out;
}

} // namespace metriclab
