// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "metriclab/metric_space.hpp"

namespace metriclab::games {

/// GH cost of a pair of equal-length tuples: sup over position pairs of
/// |d(x_i, x_j) - e(y_i, y_j)| / 2, zero for empty tuples.
double partial_cost(const std::vector<int>& xs, const std::vector<int>& ys, const MetricSpace& M,
                    const MetricSpace& N);

/// Minimax solver for the finite-depth distance game on (M, N). Player I
/// appends a point on either side, Player II answers on the other; the value
/// of a position at depth 0 is its partial cost. Player II wins the
/// eps-threshold game iff the value stays strictly below eps.
class GameSolver {
public:
  GameSolver(const MetricSpace& M, const MetricSpace& N);

  double value(const std::vector<int>& xs, const std::vector<int>& ys, int depth);

  /// v(pos, k) <= v(pos, k+1) over every position the solver has fully
  /// evaluated at consecutive depths; empty result means no violation
  bool depthMonotoneOnExpanded(double tol = kTauEq) const;

  size_t expandedPositions() const { return memo_.size(); }

private:
  double solve(std::vector<int>& xs, std::vector<int>& ys, int depth, double cost);
  double extendCost(const std::vector<int>& xs, const std::vector<int>& ys, int x, int y,
                    double cost) const;

  const MetricSpace& M_;
  const MetricSpace& N_;
  std::unordered_map<std::string, double> memo_;
};

double game_value(const MetricSpace& M, const MetricSpace& N, const std::vector<int>& xs,
                  const std::vector<int>& ys, int depth);

/// Player II wins G(d, p, eps, depth) iff game_value from the empty position
/// is strictly below eps.
bool game_winner(const MetricSpace& M, const MetricSpace& N, double eps, int depth);

struct DualityReport {
  double stabilizedValue = 0;
  int stabilizationDepth = 0;
  bool matchesGH = false;
  bool depthMonotone = false;
  std::vector<double> valuesByDepth;
  double ghValue = 0;
};

/// Expands the game at increasing depth until two consecutive values agree
/// and compares the stabilized value with the exact GH distance.
DualityReport duality_check(const MetricSpace& M, const MetricSpace& N);

/// Variant rule set where Player I picks any smaller remaining depth instead
/// of decrementing by one. Exponential; for small cross-checks only.
double game_value_free_ordinal(const MetricSpace& M, const MetricSpace& N,
                               const std::vector<int>& xs, const std::vector<int>& ys, int depth);

} // namespace metriclab::games
