// SPDX-License-Identifier: Apache-2.0
#include "metriclab/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metriclab/gh.hpp"

namespace metriclab::games {

double partial_cost(const std::vector<int>& xs, const std::vector<int>& ys, const MetricSpace& M,
                    const MetricSpace& N) {
  if (xs.size() != ys.size()) throw Error("LengthMismatch", "tuples must have equal length");
  double worst = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 0 || xs[i] >= M.n || ys[i] < 0 || ys[i] >= N.n)
      throw Error("IndexOutOfRange", "tuple entry out of range");
    for (size_t j = i + 1; j < xs.size(); ++j)
      worst = std::max(worst, std::fabs(M.at(xs[i], xs[j]) - N.at(ys[i], ys[j])) / 2.0);
  }
  return worst;
}

GameSolver::GameSolver(const MetricSpace& M, const MetricSpace& N) : M_(M), N_(N) {
  // position keys pack point indices into single bytes
  if (M.n > 100 || N.n > 100)
    throw Error("SizeLimit", "game solver handles spaces of at most 100 points");
}

double GameSolver::extendCost(const std::vector<int>& xs, const std::vector<int>& ys, int x,
                              int y, double cost) const {
  for (size_t i = 0; i < xs.size(); ++i)
    cost = std::max(cost, std::fabs(M_.at(x, xs[i]) - N_.at(y, ys[i])) / 2.0);
  return cost;
}

namespace {

std::string posKey(const std::vector<int>& xs, const std::vector<int>& ys, int depth) {
  std::string key;
  key.reserve(xs.size() + ys.size() + 2);
  key.push_back((char)depth);
  for (int v : xs) key.push_back((char)v);
  key.push_back((char)0x7f);
  for (int v : ys) key.push_back((char)v);
  return key;
}

} // namespace

// Exact minimax. Two cuts keep it exact: a response whose extension cost
// already reaches the running min cannot lower it (values dominate costs),
// and a move whose min falls to the running max cannot raise it. Every
// memoized value is the true value of its position.
double GameSolver::solve(std::vector<int>& xs, std::vector<int>& ys, int depth, double cost) {
  if (depth == 0) return cost;
  std::string key = posKey(xs, ys, depth);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  double best = cost;  // the final cost dominates the current one

  auto tryMoves = [&](bool onM) {
    const int moveCount = onM ? M_.n : N_.n;
    const int respCount = onM ? N_.n : M_.n;
    for (int mv = 0; mv < moveCount; ++mv) {
      double responseBest = std::numeric_limits<double>::infinity();
      // the aligned response first: strong when the spaces nearly match
      for (int step = 0; step < respCount; ++step) {
        int rsp = (mv + step) % respCount;
        int x = onM ? mv : rsp;
        int y = onM ? rsp : mv;
        double extCost = extendCost(xs, ys, x, y, cost);
        if (extCost >= responseBest) continue;
        xs.push_back(x);
        ys.push_back(y);
        double v = solve(xs, ys, depth - 1, extCost);
        xs.pop_back();
        ys.pop_back();
        responseBest = std::min(responseBest, v);
        if (responseBest <= best) break;
      }
      best = std::max(best, responseBest);
    }
  };
  tryMoves(true);
  tryMoves(false);

  memo_[key] = best;
  return best;
}

double GameSolver::value(const std::vector<int>& xs, const std::vector<int>& ys, int depth) {
  if (xs.size() != ys.size()) throw Error("LengthMismatch", "tuples must have equal length");
  if (depth < 0) throw Error("BadParams", "depth must be non-negative");
  std::vector<int> x(xs), y(ys);
  double cost = partial_cost(xs, ys, M_, N_);
  return solve(x, y, depth, cost);
}

bool GameSolver::depthMonotoneOnExpanded(double tol) const {
  for (const auto& [key, v] : memo_) {
    if ((unsigned char)key[0] <= 1) continue;
    std::string lower = key;
    lower[0] = (char)((unsigned char)key[0] - 1);
    auto it = memo_.find(lower);
    if (it != memo_.end() && it->second > v + tol) return false;
  }
  return true;
}

double game_value(const MetricSpace& M, const MetricSpace& N, const std::vector<int>& xs,
                  const std::vector<int>& ys, int depth) {
  GameSolver solver(M, N);
  return solver.value(xs, ys, depth);
}

bool game_winner(const MetricSpace& M, const MetricSpace& N, double eps, int depth) {
  if (!(eps > 0)) throw Error("NonPositiveEps", "eps must be positive");
  return game_value(M, N, {}, {}, depth) < eps;
}

DualityReport duality_check(const MetricSpace& M, const MetricSpace& N) {
  if (M.n + N.n > 8)
    throw Error("SizeLimit", "duality_check requires |M| + |N| <= 8");
  DualityReport rep;
  GameSolver solver(M, N);
  int maxDepth = M.n + N.n;  // Player I can enumerate both sides by then
  rep.valuesByDepth.push_back(solver.value({}, {}, 0));
  // the agreement scan starts at depth 1: from empty tuples, depths 0 and 1
  // always agree at zero (a single related pair carries no cost)
  double prev = solver.value({}, {}, 1);
  rep.valuesByDepth.push_back(prev);
  rep.stabilizedValue = prev;
  for (int d = 2; d <= maxDepth + 1; ++d) {
    double cur = solver.value({}, {}, d);
    rep.valuesByDepth.push_back(cur);
    rep.stabilizedValue = cur;
    rep.stabilizationDepth = d - 1;
    if (std::fabs(cur - prev) <= 1e-12) break;
    prev = cur;
  }
  rep.depthMonotone = solver.depthMonotoneOnExpanded();
  auto gh = gh_exact(M, N);
  rep.ghValue = gh.value;
  rep.matchesGH = std::fabs(rep.stabilizedValue - gh.value) <= kTauEq;
  return rep;
}

double game_value_free_ordinal(const MetricSpace& M, const MetricSpace& N,
                               const std::vector<int>& xs, const std::vector<int>& ys,
                               int depth) {
  double cost = partial_cost(xs, ys, M, N);
  if (depth == 0) return cost;
  std::vector<int> x(xs), y(ys);
  double best = cost;
  for (int next = 0; next < depth; ++next) {
    for (int side = 0; side < 2; ++side) {
      bool onM = side == 0;
      const int moveCount = onM ? M.n : N.n;
      const int respCount = onM ? N.n : M.n;
      for (int mv = 0; mv < moveCount; ++mv) {
        double responseBest = std::numeric_limits<double>::infinity();
        for (int rsp = 0; rsp < respCount; ++rsp) {
          x.push_back(onM ? mv : rsp);
          y.push_back(onM ? rsp : mv);
          responseBest = std::min(responseBest, game_value_free_ordinal(M, N, x, y, next));
          x.pop_back();
          y.pop_back();
        }
        best = std::max(best, responseBest);
      }
    }
  }
  return best;
}

} // namespace metriclab::games
