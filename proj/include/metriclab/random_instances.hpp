// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "metriclab/metric_space.hpp"
#include "metriclab/random.hpp"

namespace metriclab {

/// Recipe for a random valid instance: entries drawn uniformly from the
/// distance range, then repaired into a metric by shortest-path closure
/// (which stays inside [lo, hi] for any lo > 0). When class bounds are given
/// the generated space is checked against them.
struct RandomInstanceSpec {
  int pointCount = 3;
  double lo = 1.0;
  double hi = 2.0;
  uint64_t seed = 0;
  std::optional<ClassBounds<double>> classBounds;
};

MetricSpace random_space(const RandomInstanceSpec& spec);

/// Rational-mode analogue: entries lo + k/denominator on a uniform integer k.
RationalSpace random_rational_space(int pointCount, const Rat& lo, const Rat& hi,
                                    long long denominator, uint64_t seed);

/// Multiplicative perturbation of each entry by at most eta, re-closed and
/// clamped back into [lo, hi]. Produces nearby spaces with small GH distance.
MetricSpace perturb_space(const MetricSpace& m, double eta, double lo, double hi, uint64_t seed);

/// Relabels points by a seeded random permutation: an isometric copy.
MetricSpace relabel_space(const MetricSpace& m, uint64_t seed);

/// Shortest-path closure in place (Floyd-Warshall).
void metric_closure(MetricSpace& m);
void metric_closure(RationalSpace& m);

} // namespace metriclab
