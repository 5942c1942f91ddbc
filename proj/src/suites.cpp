// SPDX-License-Identifier: Apache-2.0
#include "metriclab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "metriclab/games.hpp"
#include "metriclab/gh.hpp"
#include "metriclab/gh_oracle.hpp"
#include "metriclab/hl.hpp"
#include "metriclab/norms.hpp"
#include "metriclab/random_instances.hpp"
#include "metriclab/reductions.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace metriclab::suites {

namespace {

// per-trial seed: seed XOR trial index, scrambled inside RandomStream;
// schedule-independent by construction
uint64_t trialSeed(uint64_t seed, int trial) { return seed ^ (uint64_t)trial; }

struct TrialSink {
  std::vector<Failure> failures;
  double worstMargin = std::numeric_limits<double>::infinity();
  std::map<std::string, double> maxStats;

  // max-accumulated per-suite statistic; merge order does not matter
  void stat(const std::string& name, double value) {
    auto [it, inserted] = maxStats.try_emplace(name, value);
    if (!inserted) it->second = std::max(it->second, value);
  }

  void check(int trial, double observed, double bound, const io::json& inputs,
             const std::string& note = "") {
    double margin = bound - observed;
    worstMargin = std::min(worstMargin, margin);
    if (!(observed <= bound)) {
      Failure f;
      f.trial = trial;
      f.inputs = inputs;
      f.observed = observed;
      f.bound = bound;
      f.margin = margin;
      f.note = note;
      failures.push_back(std::move(f));
    }
  }

  void require(int trial, bool ok, const io::json& inputs, const std::string& note) {
    if (!ok) {
      Failure f;
      f.trial = trial;
      f.inputs = inputs;
      f.margin = -1;
      f.observed = 0;
      f.bound = 0;
      f.note = note;
      failures.push_back(std::move(f));
      worstMargin = std::min(worstMargin, -1.0);
    }
  }
};

template <class TrialFn>
SuiteReport runTrials(const std::string& name, int trials, uint64_t seed, TrialFn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = name;
  rep.trials = trials;
  rep.seed = seed;
  std::vector<TrialSink> sinks((size_t)trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int t = 0; t < trials; ++t) {
    try {
      fn(t, trialSeed(seed, t), sinks[t]);
    } catch (const std::exception& e) {
      // an exception must not escape the parallel region
      sinks[t].require(t, false, io::json(), std::string("exception: ") + e.what());
    }
  }
  rep.worstMargin = std::numeric_limits<double>::infinity();
  std::map<std::string, double> stats;
  for (auto& s : sinks) {
    rep.worstMargin = std::min(rep.worstMargin, s.worstMargin);
    for (auto& f : s.failures) rep.failures.push_back(std::move(f));
    for (auto& [k, v] : s.maxStats) {
      auto [it, inserted] = stats.try_emplace(k, v);
      if (!inserted) it->second = std::max(it->second, v);
    }
  }
  std::sort(rep.failures.begin(), rep.failures.end(),
            [](const Failure& a, const Failure& b) { return a.trial < b.trial; });
  if (!std::isfinite(rep.worstMargin)) rep.worstMargin = 0;
  for (auto& [k, v] : stats) rep.extra[k] = v;
  rep.elapsedMs =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

io::json pairInputs(const MetricSpace& a, const MetricSpace& b) {
  io::json j;
  j["M"] = io::space_to_json(a);
  j["N"] = io::space_to_json(b);
  return j;
}

// ---------------------------------------------------------------- gh-oracle

SuiteReport suiteGhOracle(int trials, uint64_t seed) {
  return runTrials("gh-oracle", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    int nA = 3 + (int)rng.below(2), nB = 3 + (int)rng.below(2);
    RationalSpace M = random_rational_space(nA, Rat(1), Rat(4), 4, s * 2 + 1);
    RationalSpace N = random_rational_space(nB, Rat(1), Rat(4), 4, s * 2 + 2);
    auto bnb = gh_exact(M, N);
    auto ref = oracle::gh_enumerate(M, N);
    io::json inputs;
    inputs["M"] = io::space_to_json(M);
    inputs["N"] = io::space_to_json(N);
    sink.require(t, bnb.exact, inputs, "solver flagged inexact on a tiny instance");
    sink.require(t, bnb.value == ref.value, inputs, "solver != enumeration");
    sink.check(t, std::fabs(bnb.value.toDouble() - ref.value.toDouble()), 0.0, inputs,
               "value gap vs oracle");
  });
}

// -------------------------------------------------------------- gh-triangle

SuiteReport suiteGhTriangle(int trials, uint64_t seed) {
  return runTrials("gh-triangle", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    MetricSpace A = random_space({4, 1.0, 3.0, s * 3 + 1});
    MetricSpace B = random_space({4, 1.0, 3.0, s * 3 + 2});
    MetricSpace C = random_space({4, 1.0, 3.0, s * 3 + 3});
    double ac = gh_exact(A, C).value;
    double ab = gh_exact(A, B).value;
    double bc = gh_exact(B, C).value;
    io::json inputs;
    inputs["A"] = io::space_to_json(A);
    inputs["B"] = io::space_to_json(B);
    inputs["C"] = io::space_to_json(C);
    sink.check(t, ac, ab + bc + kTauEq, inputs, "pseudometric triangle");
  });
}

// --------------------------------------------------------- m5-m3 both ways

struct M5Pair {
  MetricSpace M, N;
};

M5Pair makeM5Pair(uint64_t s) {
  RandomStream rng(s);
  MetricSpace M = random_space({3, 5.0, 7.0, s * 5 + 1});
  MetricSpace N;
  if (rng.u01() < 0.5) {
    N = random_space({3, 5.0, 7.0, s * 5 + 2});
  } else {
    double eta = rng.uniform(0.002, 0.04);
    N = perturb_space(M, eta, 5.0, 7.0, s * 5 + 3);
  }
  return {M, N};
}

// the construction's own forward correspondence seeds the incumbent: the
// search then mostly certifies optimality instead of hunting for a witness
Certificate<double> gadgetGh(const MetricSpace& M, const MetricSpace& N, const MetricSpace& GM,
                             const MetricSpace& GN) {
  SearchOptions opt;
  opt.budget = 30'000'000;
  Correspondence seed;
  auto bij = gh_bijection(M, N);
  if (bij.value < 1.0) {
    seed = reductions::bound_forward_witness(M, N, std::get<Bijection>(bij.witness));
    opt.seedWitness = &seed;
  }
  return gh_exact(GM, GN, opt);
}

SuiteReport suiteM5M3Forward(int trials, uint64_t seed) {
  return runTrials("m5-m3-forward", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    auto [M, N] = makeM5Pair(s);
    double g = gh_exact(M, N).value;
    if (!(g < 1.0)) return;  // hypothesis of the forward bound
    MetricSpace GM = reductions::bound(M), GN = reductions::bound(N);
    auto big = gadgetGh(M, N, GM, GN);
    io::json inputs = pairInputs(M, N);
    inputs["gadget_exact"] = big.exact;
    // big.value is an upper bound even when the budget stopped the search
    sink.check(t, big.value, g + kTauEq, inputs, "forward: gh(gadgets) <= gh(inputs)");
  });
}

SuiteReport suiteM5M3Backward(int trials, uint64_t seed) {
  return runTrials("m5-m3-backward", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    auto [M, N] = makeM5Pair(s);
    MetricSpace GM = reductions::bound(M), GN = reductions::bound(N);
    auto big = gadgetGh(M, N, GM, GN);
    if (!(big.value < 1.0 / 6.0)) return;  // hypothesis of the backward bound
    double g = gh_exact(M, N).value;
    io::json inputs = pairInputs(M, N);
    inputs["gadget_exact"] = big.exact;
    inputs["gadget_gh"] = big.value;
    if (big.value > 0) sink.stat("worstBackwardRatio", g / big.value);
    sink.check(t, g, 5.0 * big.value + kTauEq, inputs, "backward: gh(inputs) <= 5 gh(gadgets)");
  });
}

// --------------------------------------------------------- separate-bounds

SuiteReport suiteSeparateBounds(int trials, uint64_t seed) {
  return runTrials("separate-bounds", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    MetricSpace M = random_space({3, 1.0, 3.0, s * 7 + 1});
    MetricSpace N = rng.u01() < 0.5 ? random_space({3, 1.0, 3.0, s * 7 + 2})
                                    : perturb_space(M, rng.uniform(0.01, 0.2), 1.0, 3.0, s * 7 + 3);
    reductions::SeparationGadgetParams params{1.0, 2};
    MetricSpace GM = reductions::separate(M, params), GN = reductions::separate(N, params);
    double g = gh_exact(M, N).value;
    double gs = gh_exact(GM, GN).value;
    io::json inputs = pairInputs(M, N);
    sink.check(t, gs, g + kTauEq, inputs, "gh(gadgets) <= gh(inputs)");
    if (gs < 0.5) sink.check(t, g, gs + kTauEq, inputs, "gh(inputs) <= gh(gadgets) below p/2");
  });
}

// ----------------------------------------------------------- lip-gh-class

SuiteReport suiteLipGhClass(int trials, uint64_t seed) {
  return runTrials("lip-gh-class", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    MetricSpace M = random_space({4, 2.0, 4.0, s * 9 + 1});
    MetricSpace N = rng.u01() < 0.5 ? random_space({4, 2.0, 4.0, s * 9 + 2})
                                    : perturb_space(M, rng.uniform(0.01, 0.2), 2.0, 4.0, s * 9 + 3);
    double g = gh_exact(M, N).value;
    double lam = lipschitz_exact(M, N).value;
    io::json inputs = pairInputs(M, N);
    if (g < 1.0) sink.check(t, lam, std::log(1.0 + g) + kTauEq, inputs, "rho_L <= log(1+2eps/p)");
    if (lam < 1.0)
      sink.check(t, g, 4.0 * (std::exp(lam) - 1.0) / 2.0 + kTauEq, inputs,
                 "gh <= q(exp(eps)-1)/2");
  });
}

// ----------------------------------------------------- level-preservation

SuiteReport suiteLevelPreservation(int trials, uint64_t seed) {
  return runTrials("level-preservation", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    MetricSpace M = random_space({2, 0.05, 0.25, s * 11 + 1});
    MetricSpace N = perturb_space(M, rng.uniform(0.0, 0.15), 0.05, 0.25, s * 11 + 2);
    reductions::LevelGadgetParams params{-2, 2};
    MetricSpace GM = reductions::lipschitz_gadget(M, params);
    MetricSpace GN = reductions::lipschitz_gadget(N, params);
    int anchor = reductions::level_gadget_anchor(M, params);
    auto witnesses = gh_witnesses_below(GM, GN, 2.0 / 5.0);
    io::json inputs = pairInputs(M, N);
    sink.require(t, !witnesses.empty(), inputs, "no sub-threshold witness found");
    auto levelOf = [&](int idx) { return idx == anchor ? 999 : idx / M.n; };
    for (const auto& w : witnesses) {
      for (auto& [a, b] : w.pairs()) {
        if (levelOf(a) != levelOf(b)) {
          sink.require(t, false, inputs, "sub-threshold witness mixes levels");
          return;
        }
      }
    }
  });
}

// ------------------------------------------------------------- norm-axioms

SuiteReport suiteNormAxioms(int trials, uint64_t seed) {
  return runTrials("norm-axioms", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    int dim = 4 + (int)rng.below(5);
    std::vector<double> f((size_t)dim * (dim - 1) / 2);
    for (auto& v : f) v = rng.uniform(0.5, 1.0);
    norms::CoefficientNorm cn(dim, norms::kDefaultAlpha,
                              norms::kAlphaDeltaCap - norms::kDefaultAlpha, f);
    io::json inputs = io::coeff_norm_to_json(cn);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x = rng.normalVector(dim), y = rng.normalVector(dim);
      double nx = norms::norm_eval(cn, x), ny = norms::norm_eval(cn, y);
      double l2x = norms::l2(x);
      sink.check(t, l2x, nx + kTauEq, inputs, "euclidean <= coeff");
      sink.check(t, nx, (200.0 / 199.0) * l2x + kTauEq, inputs, "coeff <= 200/199 euclidean");
      double lambda = rng.uniform(-2.0, 2.0);
      std::vector<double> lx(x);
      for (auto& v : lx) v *= lambda;
      sink.check(t, std::fabs(norms::norm_eval(cn, lx) - std::fabs(lambda) * nx), kTauEq, inputs,
                 "homogeneity");
      std::vector<double> sxy(x);
      for (int i = 0; i < dim; ++i) sxy[i] += y[i];
      sink.check(t, norms::norm_eval(cn, sxy), nx + ny + kTauEq, inputs, "triangle");
    }
  });
}

// ----------------------------------------------------------------- lemmsep

SuiteReport suiteLemmsep(int trials, uint64_t seed) {
  return runTrials("lemmsep", trials, seed, [](int t, uint64_t, TrialSink& sink) {
    const int dim = 6;
    const double sqrt2 = std::sqrt(2.0), sqrt3 = std::sqrt(3.0);
    io::json inputs;
    inputs["dim"] = dim;
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
            double devDiff = std::fabs(norms::l2(diff) - expDiff);
            double devSum = std::fabs(norms::l2(sum) - expSum);
            sink.stat("maxDeviation", std::max(devDiff, devSum));
            sink.check(t, devDiff, 1e-12, inputs, "difference norm");
            sink.check(t, devSum, 1e-12, inputs, "sum norm");
          }
  });
}

// -------------------------------------------------------------- pnm-radius

SuiteReport suitePnmRadius(int trials, uint64_t seed) {
  return runTrials("pnm-radius", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    int dim = 8;
    std::vector<double> f((size_t)dim * (dim - 1) / 2);
    for (auto& v : f) v = rng.uniform(0.0, 1.0);
    norms::CoefficientNorm cn(dim, norms::kDefaultAlpha,
                              norms::kAlphaDeltaCap - norms::kDefaultAlpha, f);
    int n = (int)rng.below(dim - 1), m = n + 1 + (int)rng.below(dim - n - 1);
    double h = cn.h(n, m);
    double radius = std::sqrt(2.0 * (h - 1.0) / h);
    auto e = norms::e_nm(n, m, dim);
    io::json inputs;
    inputs["n"] = n;
    inputs["m"] = m;
    inputs["h"] = h;
    for (int k = 0; k < 40; ++k) {
      // mixture: uniform sphere points and points concentrated near e_nm,
      // radii kept away from the membership boundary
      std::vector<double> x;
      if (k % 2 == 0) {
        x = rng.normalVector(dim);
      } else {
        double target = rng.u01() < 0.5 ? rng.uniform(0.001, radius * 0.9)
                                        : rng.uniform(radius * 1.1, 1.5);
        std::vector<double> dir = rng.normalVector(dim);
        double dl = norms::l2(dir);
        x = e;
        for (int i = 0; i < dim; ++i) x[i] += target * dir[i] / dl;
      }
      double lx = norms::l2(x);
      for (auto& v : x) v /= lx;
      std::vector<double> delta(dim);
      for (int i = 0; i < dim; ++i) delta[i] = x[i] - e[i];
      double dist = norms::l2(delta);
      if (std::fabs(dist - radius) < 1e-6) continue;  // knife edge, resample elsewhere
      bool member = norms::pnm_member(x, n, m, cn);
      bool radiusTest = dist <= radius;
      sink.require(t, member == radiusTest, inputs, "membership != radius test");
      if (member) sink.check(t, dist, 0.1, inputs, "member within 1/10 of e_nm");
    }
  });
}

// ---------------------------------------------------- perm-distortion-chain

SuiteReport suitePermDistortion(int trials, uint64_t seed) {
  return runTrials("perm-distortion-chain", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    const int dim = 4;
    auto randomPairMetric = [&](uint64_t sub) {
      RandomStream r2(sub);
      MetricSpace m = MetricSpace::zero(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) m.at(i, j) = m.at(j, i) = r2.uniform(0.5, 1.0);
      return m;  // values in [1/2,1]: triangle holds automatically
    };
    MetricSpace F = randomPairMetric(s * 13 + 1);
    MetricSpace G = rng.u01() < 0.5 ? randomPairMetric(s * 13 + 2) : relabel_space(F, s * 13 + 3);
    auto bij = gh_bijection(F, G);
    const auto& pi = std::get<Bijection>(bij.witness);
    auto toCoeff = [&](const MetricSpace& m) {
      std::vector<double> vals;
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) vals.push_back(m.at(i, j));
      return norms::CoefficientNorm(dim, norms::kDefaultAlpha,
                                    norms::kAlphaDeltaCap - norms::kDefaultAlpha, vals);
    };
    norms::CoefficientNorm cf = toCoeff(F), cg = toCoeff(G);
    auto rep = norms::permutation_distortion(cf, cg, pi, 1000, s);
    io::json inputs = pairInputs(F, G);
    inputs["pi"] = pi;
    sink.check(t, std::fabs(rep.maxPairGap - 2.0 * bij.value), 1e-12, inputs,
               "maxPairGap == 2 gh_bijection");
    sink.require(t, rep.pointwiseCheck, inputs, "pointwise inequality failed");
    sink.check(t, rep.bmUpperBound, 4.0 * cf.delta() * bij.value + kTauEq, inputs,
               "bm bound <= 4 delta gh");
  });
}

// ------------------------------------------------------------ game-duality

SuiteReport suiteGameDuality(int trials, uint64_t seed) {
  return runTrials("game-duality", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    int nM = 2 + (int)rng.below(2);           // 2..3
    int nN = 2 + (int)rng.below((uint64_t)std::min(3, 7 - nM - 1));
    MetricSpace M = random_space({nM, 1.0, 3.0, s * 17 + 1});
    MetricSpace N = rng.u01() < 0.5 ? random_space({nN, 1.0, 3.0, s * 17 + 2})
                                    : perturb_space(M, 0.1, 1.0, 3.0, s * 17 + 3);
    auto rep = games::duality_check(M, N);
    io::json inputs = pairInputs(M, N);
    inputs["values"] = rep.valuesByDepth;
    sink.require(t, rep.matchesGH, inputs, "stabilized value != gh_exact");
    sink.require(t, rep.depthMonotone, inputs, "value not monotone in depth");
  });
}

// ----------------------------------------------------------------- hl-phi2

SuiteReport suiteHlPhi2(int trials, uint64_t seed) {
  return runTrials("hl-phi2", trials, seed, [](int t, uint64_t s, TrialSink& sink) {
    RandomStream rng(s);
    double eps = (t % 2 == 0) ? 0.05 : 0.1;
    MetricSpace M = random_space({6, 0.5, 2.5, s * 19 + 1});
    // multiplicative perturbation by eps/2 keeps the identity a witness;
    // closure can shrink entries, so verify and back off if needed
    MetricSpace N = M;
    for (double shrink = 1.0; shrink > 0.05; shrink /= 2.0) {
      N = perturb_space(M, shrink * eps / 2.0, 0.4, 2.6, s * 19 + 2);
      if (hl_witnesses(M, N, eps, Correspondence::identity(M.n))) break;
      N = M;
    }
    Correspondence id = Correspondence::identity(M.n);
    auto rep = hl_upper_from_witness(M, N, eps, id, s);
    io::json inputs = pairInputs(M, N);
    inputs["eps"] = eps;
    double sq = std::sqrt(eps);
    double expected =
        2 * eps + 2 * sq + std::log(1 + std::max(eps, sq)) + eps * std::max(1.0, eps + sq);
    sink.check(t, std::fabs(rep.phi2 - expected), 1e-12, inputs, "phi2 formula");
    sink.require(t, rep.allHold, inputs, "an intermediate net bound failed");
    auto found = hl_close(M, N, eps);
    sink.require(t, found.witness.has_value() && found.complete, inputs,
                 "exhaustive hl_close missed the witness");
  });
}

} // namespace

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> reg = {
      {"gh-oracle", suiteGhOracle},
      {"gh-triangle", suiteGhTriangle},
      {"m5-m3-forward", suiteM5M3Forward},
      {"m5-m3-backward", suiteM5M3Backward},
      {"separate-bounds", suiteSeparateBounds},
      {"lip-gh-class", suiteLipGhClass},
      {"level-preservation", suiteLevelPreservation},
      {"norm-axioms", suiteNormAxioms},
      {"lemmsep", suiteLemmsep},
      {"pnm-radius", suitePnmRadius},
      {"perm-distortion-chain", suitePermDistortion},
      {"game-duality", suiteGameDuality},
      {"hl-phi2", suiteHlPhi2},
  };
  return reg;
}

SuiteReport run_suite(const std::string& name, int trials, uint64_t seed) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error("UnknownSuite", "no suite named " + name);
  return it->second(trials, seed);
}

io::json report_to_json(const SuiteReport& rep) {
  io::json doc;
  doc["suite"] = rep.suite;
  doc["trials"] = rep.trials;
  doc["seed"] = rep.seed;
  io::json fails = io::json::array();
  for (const auto& f : rep.failures) {
    io::json fj;
    fj["trial"] = f.trial;
    fj["inputs"] = f.inputs;
    fj["observed"] = f.observed;
    fj["bound"] = f.bound;
    fj["margin"] = f.margin;
    fj["note"] = f.note;
    fails.push_back(fj);
  }
  doc["failures"] = fails;
  doc["worstMargin"] = rep.worstMargin;
  if (!rep.extra.is_null()) doc["extra"] = rep.extra;
  doc["elapsed_ms"] = rep.elapsedMs;
  return doc;
}

} // namespace metriclab::suites
