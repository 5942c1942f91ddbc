// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "metriclab/games.hpp"
#include "metriclab/gh.hpp"
#include "metriclab/gh_oracle.hpp"
#include "metriclab/hl.hpp"
#include "metriclab/norms.hpp"
#include "metriclab/random_instances.hpp"
#include "metriclab/reductions.hpp"

using namespace metriclab;

namespace {

constexpr double kTol = 1e-9;
constexpr double kTight = 1e-12;

struct Criterion {
  int id;
  std::string name;
  double timeLimitSec;
  std::function<bool(std::string&)> body;
};

// ---------------------------------------------------------------- helpers

MetricSpace randomPerturbedPartner(const MetricSpace& M, double lo, double hi, uint64_t seed,
                                   bool independent, int n) {
  if (independent) return random_space({n, lo, hi, seed});
  RandomStream rng(seed);
  return perturb_space(M, rng.uniform(0.002, 0.04), lo, hi, seed + 1);
}

bool criterionLemmsep(std::string& detail) {
  const int dim = 6;
  const double sqrt2 = std::sqrt(2.0), sqrt3 = std::sqrt(3.0);
  double worst = 0;
  for (int n = 0; n < dim; ++n)
    for (int m = n + 1; m < dim; ++m)
      for (int n2 = 0; n2 < dim; ++n2)
        for (int m2 = n2 + 1; m2 < dim; ++m2) {
          if (n == n2 && m == m2) continue;
          auto a = norms::e_nm(n, m, dim), b = norms::e_nm(n2, m2, dim);
          std::vector<double> diff(dim), sum(dim);
          for (int i = 0; i < dim; ++i) {
            diff[i] = a[i] - b[i];
            sum[i] = a[i] + b[i];
          }
          int shared = (int)(n == n2) + (int)(n == m2) + (int)(m == n2) + (int)(m == m2);
          double expDiff = shared == 1 ? 1.0 : sqrt2;
          double expSum = shared == 1 ? sqrt3 : sqrt2;
          worst = std::max(worst, std::fabs(norms::l2(diff) - expDiff));
          worst = std::max(worst, std::fabs(norms::l2(sum) - expSum));
        }
  detail = "max deviation " + std::to_string(worst);
  return worst <= kTight;
}

bool criterionGhOracle(std::string& detail) {
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    uint64_t s = (uint64_t)t;
    RandomStream rng(s);
    int nA = 3 + (int)rng.below(2), nB = 3 + (int)rng.below(2);
    RationalSpace M = random_rational_space(nA, Rat(1), Rat(4), 4, s * 2 + 1);
    RationalSpace N = random_rational_space(nB, Rat(1), Rat(4), 4, s * 2 + 2);
    auto bnb = gh_exact(M, N);
    auto ref = oracle::gh_enumerate(M, N);
    if (!(bnb.value == ref.value) || !bnb.exact) ++bad;
  }
  detail = std::to_string(bad) + "/200 mismatches";
  return bad == 0;
}

bool criterionUniformlyDiscrete(std::string& detail) {
  int bad = 0, used = 0;
  for (int t = 0; t < 100; ++t) {
    uint64_t s = (uint64_t)t + 1000;
    RationalSpace M = random_rational_space(4, Rat(5), Rat(7), 4, s * 2 + 1);
    RationalSpace N = random_rational_space(4, Rat(5), Rat(7), 4, s * 2 + 2);
    auto exact = gh_exact(M, N);
    if (!(exact.value < Rat(5, 2))) continue;  // hypothesis (always true here)
    ++used;
    auto bij = gh_bijection(M, N);
    if (!(exact.value == bij.value)) ++bad;
  }
  detail = std::to_string(bad) + " mismatches in " + std::to_string(used) + " eligible pairs";
  return bad == 0 && used == 100;
}

bool criterionM5M3(std::string& detail) {
  int badF = 0, badB = 0, forward = 0, backward = 0, inexact = 0;
  for (int t = 0; t < 100; ++t) {
    uint64_t s = (uint64_t)t + 2000;
    RandomStream rng(s);
    MetricSpace M = random_space({3, 5.0, 7.0, s * 5 + 1});
    MetricSpace N = randomPerturbedPartner(M, 5.0, 7.0, s * 5 + 2, rng.u01() < 0.5, 3);
    double g = gh_exact(M, N).value;
    MetricSpace GM = reductions::bound(M), GN = reductions::bound(N);
    SearchOptions opt;
    opt.budget = 50'000'000;
    Correspondence seed;
    auto bij = gh_bijection(M, N);
    if (bij.value < 1.0) {
      seed = reductions::bound_forward_witness(M, N, std::get<Bijection>(bij.witness));
      opt.seedWitness = &seed;
    }
    auto big = gh_exact(GM, GN, opt);
    if (!big.exact) ++inexact;
    if (g < 1.0) {
      ++forward;
      if (!(big.value <= g + kTol)) ++badF;
    }
    if (big.value < 1.0 / 6.0) {
      ++backward;
      if (!(g <= 5.0 * big.value + kTol)) ++badB;
    }
  }
  detail = std::to_string(badF) + " forward / " + std::to_string(badB) + " backward failures (" +
           std::to_string(forward) + " forward, " + std::to_string(backward) + " backward, " +
           std::to_string(inexact) + " budget-stopped)";
  return badF == 0 && badB == 0 && forward > 0 && backward > 0;
}

bool criterionSeparate(std::string& detail) {
  int badF = 0, badB = 0, backward = 0;
  reductions::SeparationGadgetParams params{1.0, 2};
  for (int t = 0; t < 200; ++t) {
    uint64_t s = (uint64_t)t + 3000;
    RandomStream rng(s);
    MetricSpace M = random_space({3, 1.0, 3.0, s * 7 + 1});
    MetricSpace N = rng.u01() < 0.5
                        ? random_space({3, 1.0, 3.0, s * 7 + 2})
                        : perturb_space(M, rng.uniform(0.01, 0.2), 1.0, 3.0, s * 7 + 3);
    double g = gh_exact(M, N).value;
    double gs = gh_exact(reductions::separate(M, params), reductions::separate(N, params)).value;
    if (!(gs <= g + kTol)) ++badF;
    if (gs < 0.5) {
      ++backward;
      if (!(g <= gs + kTol)) ++badB;
    }
  }
  detail = std::to_string(badF) + " forward / " + std::to_string(badB) + " backward failures (" +
           std::to_string(backward) + " backward checks)";
  return badF == 0 && badB == 0 && backward > 0;
}

bool criterionLipGhClass(std::string& detail) {
  int bad1 = 0, bad2 = 0, used1 = 0, used2 = 0;
  for (int t = 0; t < 200; ++t) {
    uint64_t s = (uint64_t)t + 4000;
    RandomStream rng(s);
    MetricSpace M = random_space({4, 2.0, 4.0, s * 9 + 1});
    MetricSpace N = rng.u01() < 0.5
                        ? random_space({4, 2.0, 4.0, s * 9 + 2})
                        : perturb_space(M, rng.uniform(0.01, 0.2), 2.0, 4.0, s * 9 + 3);
    double g = gh_exact(M, N).value;
    double lam = lipschitz_exact(M, N).value;
    if (g < 1.0) {
      ++used1;
      if (!(lam <= std::log(1.0 + g) + kTol)) ++bad1;
    }
    if (lam < 1.0) {
      ++used2;
      if (!(g <= 4.0 * (std::exp(lam) - 1.0) / 2.0 + kTol)) ++bad2;
    }
  }
  detail = std::to_string(bad1) + " gh->lip / " + std::to_string(bad2) + " lip->gh failures (" +
           std::to_string(used1) + ", " + std::to_string(used2) + " checks)";
  return bad1 == 0 && bad2 == 0 && used1 > 0 && used2 > 0;
}

bool criterionNormSandwich(std::string& detail) {
  RandomStream rng(77);
  const int dim = 8;
  std::vector<double> f((size_t)dim * (dim - 1) / 2);
  for (auto& v : f) v = rng.u01();
  norms::CoefficientNorm cn(dim, norms::kDefaultAlpha,
                            norms::kAlphaDeltaCap - norms::kDefaultAlpha, f);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    auto x = rng.normalVector(dim);
    double nf = norms::norm_eval(cn, x), ne = norms::l2(x);
    if (!(ne <= nf + kTight) || !(nf <= (200.0 / 199.0) * ne + kTight)) ++bad;
  }
  double worstPair = 0;
  for (int n = 0; n < dim; ++n)
    for (int m = n + 1; m < dim; ++m) {
      auto e = norms::e_nm(n, m, dim);
      worstPair = std::max(worstPair, std::fabs(norms::norm_eval(cn, e) - cn.h(n, m)));
    }
  detail = std::to_string(bad) + " sandwich failures, pair-term deviation " +
           std::to_string(worstPair);
  return bad == 0 && worstPair <= kTight;
}

bool criterionPnmRadius(std::string& detail) {
  RandomStream rng(88);
  const int dim = 8;
  std::vector<double> f((size_t)dim * (dim - 1) / 2);
  for (auto& v : f) v = rng.u01();
  norms::CoefficientNorm cn(dim, norms::kDefaultAlpha,
                            norms::kAlphaDeltaCap - norms::kDefaultAlpha, f);
  int disagreements = 0, members = 0, badRadius = 0, checked = 0;
  while (checked < 1000) {
    int n = (int)rng.below(dim - 1);
    int m = n + 1 + (int)rng.below((uint64_t)(dim - n - 1));
    double h = cn.h(n, m);
    double radius = std::sqrt(2.0 * (h - 1.0) / h);
    auto e = norms::e_nm(n, m, dim);
    std::vector<double> x;
    if (checked % 2 == 0) {
      x = rng.normalVector(dim);
    } else {
      double target = rng.u01() < 0.5 ? rng.uniform(0.001, radius * 0.9)
                                      : rng.uniform(radius * 1.1, 1.2);
      auto dir = rng.normalVector(dim);
      double dl = norms::l2(dir);
      x = e;
      for (int i = 0; i < dim; ++i) x[i] += target * dir[i] / dl;
    }
    double lx = norms::l2(x);
    for (auto& v : x) v /= lx;
    std::vector<double> d(dim);
    for (int i = 0; i < dim; ++i) d[i] = x[i] - e[i];
    double dist = norms::l2(d);
    if (std::fabs(dist - radius) < 1e-6) continue;  // keep off the knife edge
    ++checked;
    bool member = norms::pnm_member(x, n, m, cn);
    if (member != (dist <= radius)) ++disagreements;
    if (member) {
      ++members;
      if (!(dist <= 0.1)) ++badRadius;
    }
  }
  detail = std::to_string(disagreements) + " disagreements, " + std::to_string(members) +
           " members, " + std::to_string(badRadius) + " outside 1/10";
  return disagreements == 0 && badRadius == 0 && members > 0;
}

bool criterionPermDistortion(std::string& detail) {
  int bad = 0;
  const int dim = 4;
  for (int t = 0; t < 100; ++t) {
    uint64_t s = (uint64_t)t + 5000;
    RandomStream rng(s);
    MetricSpace F = MetricSpace::zero(dim), G = MetricSpace::zero(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        F.at(i, j) = F.at(j, i) = rng.uniform(0.5, 1.0);
        G.at(i, j) = G.at(j, i) = rng.uniform(0.5, 1.0);
      }
    auto bij = gh_bijection(F, G);
    auto mk = [&](const MetricSpace& m) {
      std::vector<double> vals;
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) vals.push_back(m.at(i, j));
      return norms::CoefficientNorm(dim, norms::kDefaultAlpha,
                                    norms::kAlphaDeltaCap - norms::kDefaultAlpha, vals);
    };
    auto cf = mk(F);
    auto rep = norms::permutation_distortion(cf, mk(G), std::get<Bijection>(bij.witness), 1000, s);
    bool ok = rep.pointwiseCheck && rep.bmUpperBound <= 4.0 * cf.delta() * bij.value + kTol &&
              std::fabs(rep.maxPairGap - 2.0 * bij.value) <= kTight;
    if (!ok) ++bad;
  }
  detail = std::to_string(bad) + "/100 failures";
  return bad == 0;
}

bool criterionGameDuality(std::string& detail) {
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    uint64_t s = (uint64_t)t + 6000;
    RandomStream rng(s);
    int nM = 2 + (int)rng.below(2);
    int nN = 2 + (int)rng.below((uint64_t)(std::min(4, 7 - nM) - 1));
    MetricSpace M = random_space({nM, 1.0, 3.0, s * 17 + 1});
    MetricSpace N = rng.u01() < 0.5 ? random_space({nN, 1.0, 3.0, s * 17 + 2})
                                    : perturb_space(M, 0.1, 1.0, 3.0, s * 17 + 3);
    auto rep = games::duality_check(M, N);
    if (!rep.matchesGH || !rep.depthMonotone) ++bad;
  }
  detail = std::to_string(bad) + "/100 failures";
  return bad == 0;
}

bool criterionHlPhi2(std::string& detail) {
  int bad = 0;
  for (int t = 0; t < 50; ++t) {
    uint64_t s = (uint64_t)t + 7000;
    double eps = (t % 2 == 0) ? 0.05 : 0.1;
    MetricSpace M = random_space({6, 0.5, 2.5, s * 19 + 1});
    MetricSpace N = M;
    for (double shrink = 1.0; shrink > 0.05; shrink /= 2.0) {
      N = perturb_space(M, shrink * eps / 2.0, 0.4, 2.6, s * 19 + 2);
      if (hl_witnesses(M, N, eps, Correspondence::identity(M.n))) break;
      N = M;
    }
    auto rep = hl_upper_from_witness(M, N, eps, Correspondence::identity(M.n), s);
    double sq = std::sqrt(eps);
    double expected =
        2 * eps + 2 * sq + std::log(1 + std::max(eps, sq)) + eps * std::max(1.0, eps + sq);
    if (!rep.allHold || std::fabs(rep.phi2 - expected) > kTight) ++bad;
  }
  detail = std::to_string(bad) + "/50 failures";
  return bad == 0;
}

} // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "lemmsep exactness (dim 6, 1e-12)", 1.0, criterionLemmsep},
      {2, "GH oracle equivalence (200 rational pairs)", 30.0, criterionGhOracle},
      {3, "uniformly-discrete lemma (gh == gh_bijection)", 60.0, criterionUniformlyDiscrete},
      {4, "M_5 -> M^3 forward/backward bounds", 600.0, criterionM5M3},
      {5, "separation gadget bounds", 300.0, criterionSeparate},
      {6, "GH/Lipschitz class bounds on M_2^4", 120.0, criterionLipGhClass},
      {7, "norm sandwich and pair term", 5.0, criterionNormSandwich},
      {8, "P_nm radius equivalence", 5.0, criterionPnmRadius},
      {9, "permutation-distortion chain", 120.0, criterionPermDistortion},
      {10, "game duality", 300.0, criterionGameDuality},
      {11, "phi2 pipeline", 120.0, criterionHlPhi2},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool inTime = sec <= c.timeLimitSec;
    bool pass = ok && inTime;
    if (!pass) ++failures;
    std::printf("[%s] criterion %2d: %s (%.2fs%s) %s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), sec, inTime ? "" : " OVER TIME LIMIT", detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
