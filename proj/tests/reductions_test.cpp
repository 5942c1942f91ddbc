// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "metriclab/gh.hpp"
#include "metriclab/gh_oracle.hpp"
#include "metriclab/hl.hpp"
#include "metriclab/random_instances.hpp"
#include "metriclab/reductions.hpp"

using namespace metriclab;
using namespace metriclab::reductions;

namespace {

int indexOfLabel(const MetricSpace& m, const std::string& label) {
  for (int i = 0; i < m.n; ++i)
    if (m.labels[i] == label) return i;
  REQUIRE(false);
  return -1;
}

MetricSpace twoPoint(double d) { return validate_metric<double>({{0, d}, {d, 0}}); }

} // namespace

TEST_CASE("separate: one point, p=1, copies=3 gives a unit triangle") {
  MetricSpace one = MetricSpace::zero(1);
  MetricSpace out = separate(one, {1.0, 3});
  CHECK(out.n == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(out.at(i, j) == 1.0);
  CHECK_NOTHROW(validate_space(out));
}

TEST_CASE("separate lands in M_p and M_p^{q+p}") {
  MetricSpace m = random_space({3, 1.0, 3.0, 7});  // in M^3
  MetricSpace out = separate(m, {1.0, 2});
  CHECK(in_class(out, ClassBounds<double>{1.0, std::nullopt}));
  CHECK(in_class(out, ClassBounds<double>{1.0, 4.0}));
}

TEST_CASE("separate never increases gh and preserves it below p/2") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    RandomStream rng(seed);
    MetricSpace M = random_space({3, 1.0, 3.0, seed + 10});
    MetricSpace N = rng.u01() < 0.5 ? random_space({3, 1.0, 3.0, seed + 20})
                                    : perturb_space(M, 0.1, 1.0, 3.0, seed + 30);
    SeparationGadgetParams params{1.0, 2};
    double g = gh_exact(M, N).value;
    double gs = gh_exact(separate(M, params), separate(N, params)).value;
    CHECK(gs <= g + kTauEq);
    if (gs < 0.5) CHECK(g <= gs + kTauEq);
  }
}

TEST_CASE("separate backward direction cross-checked by enumeration on tiny gadgets") {
  MetricSpace M = twoPoint(1.2);
  MetricSpace N = twoPoint(1.4);
  SeparationGadgetParams params{1.0, 2};
  auto GM = separate(M, params), GN = separate(N, params);
  auto viaEnum = oracle::gh_enumerate(GM, GN);
  auto viaBnb = gh_exact(GM, GN);
  CHECK(viaBnb.value == doctest::Approx(viaEnum.value).epsilon(1e-12));
  if (viaBnb.value < 0.5) CHECK(gh_exact(M, N).value <= viaBnb.value + kTauEq);
}

TEST_CASE("bound: the five path points of a distance-5 pair") {
  MetricSpace m = twoPoint(5.0);
  auto layout = bound_layout(m);
  CHECK(layout.pathPoints.size() == 5);  // I = {-2,...,2}
  MetricSpace out = bound(m);
  CHECK(out.n == 7);
  CHECK(out.at(indexOfLabel(out, "m0"), indexOfLabel(out, "p(0,1,-2)")) == doctest::Approx(0.5));
  CHECK(out.at(indexOfLabel(out, "m1"), indexOfLabel(out, "p(0,1,2)")) == doctest::Approx(0.5));
  CHECK(out.at(indexOfLabel(out, "m0"), indexOfLabel(out, "m1")) == doctest::Approx(3.0));
  CHECK(out.at(indexOfLabel(out, "p(0,1,0)"), indexOfLabel(out, "p(0,1,1)")) ==
        doctest::Approx(1.0));
}

TEST_CASE("bound equals the displayed case formula") {
  // direct pairs capped at 3, path points sharing an endpoint routed through
  // it, everything else exactly 3
  for (uint64_t seed = 0; seed < 6; ++seed) {
    MetricSpace M = random_space({3, 5.0, 7.0, seed + 300});
    auto layout = bound_layout(M);
    MetricSpace G = bound(M);
    int base = layout.inputPoints;
    auto dPrime = [&](int idx, int endpoint) {
      const auto& p = layout.pathPoints[idx - base];
      REQUIRE((endpoint == p.i || endpoint == p.j));
      return endpoint == p.i ? M.at(p.i, p.j) / 2.0 + p.k : M.at(p.i, p.j) / 2.0 - p.k;
    };
    for (int u = 0; u < G.n; ++u)
      for (int v = u + 1; v < G.n; ++v) {
        double expected;
        if (u < base && v < base) {
          expected = std::min(M.at(u, v), 3.0);
        } else if (u < base) {
          const auto& q = layout.pathPoints[v - base];
          expected = (u == q.i || u == q.j) ? std::min(dPrime(v, u), 3.0) : 3.0;
        } else {
          const auto& p = layout.pathPoints[u - base];
          const auto& q = layout.pathPoints[v - base];
          if (p.i == q.i && p.j == q.j) {
            expected = std::min((double)std::abs(p.k - q.k), 3.0);
          } else {
            int shared = -1;
            for (int h : {p.i, p.j})
              if (h == q.i || h == q.j) shared = h;
            expected =
                shared < 0 ? 3.0 : std::min(dPrime(u, shared) + dPrime(v, shared), 3.0);
          }
        }
        CHECK(G.at(u, v) == doctest::Approx(expected).epsilon(1e-12));
      }
  }
}

TEST_CASE("bound output lies in M^3 and validates") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    MetricSpace m = random_space({3, 5.0, 7.0, seed + 40});
    MetricSpace out = bound(m);
    CHECK(in_class(out, ClassBounds<double>{std::nullopt, 3.0}));
    CHECK_NOTHROW(validate_space(out));
  }
}

TEST_CASE("bound rejects inputs outside M_5") {
  CHECK_THROWS_WITH_AS(bound(twoPoint(4.0)), doctest::Contains("InputNotInM5"), Error);
}

TEST_CASE("bound forward and backward estimates on random 3-point pairs") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    MetricSpace M = random_space({3, 5.0, 7.0, seed + 60});
    MetricSpace N = perturb_space(M, 0.02, 5.0, 7.0, seed + 61);
    double g = gh_exact(M, N).value;
    REQUIRE(g < 1.0);
    auto GM = bound(M), GN = bound(N);
    auto big = gh_exact(GM, GN);
    CHECK(big.value <= g + kTauEq);
    if (big.value < 1.0 / 6.0) CHECK(g <= 5.0 * big.value + kTauEq);
  }
}

TEST_CASE("the explicit forward correspondence between bound gadgets") {
  // pi with pairwise gaps below 2 eps induces a correspondence of distortion
  // at most 2 eps between the gadgets
  for (uint64_t seed = 0; seed < 8; ++seed) {
    MetricSpace M = random_space({3, 5.0, 7.0, seed + 200});
    RandomStream rng(seed);
    MetricSpace N = rng.u01() < 0.5 ? random_space({3, 5.0, 7.0, seed + 201})
                                    : perturb_space(M, 0.03, 5.0, 7.0, seed + 202);
    auto bij = gh_bijection(M, N);
    double g = bij.value;  // equals gh_exact here (uniformly discrete regime)
    if (!(g < 1.0)) continue;
    Correspondence w = bound_forward_witness(M, N, std::get<Bijection>(bij.witness));
    CHECK(w.total());
    auto GM = bound(M), GN = bound(N);
    CHECK(distortion(w, GM, GN) <= 2.0 * g + kTauEq);
    // and it certifies the forward bound without any search
    CHECK(distortion(w, GM, GN) / 2.0 <= g + kTauEq);
  }
}

TEST_CASE("optimal kadets witnesses separate sphere points from path points") {
  auto nu = norms::NormOracle::euclidean(2);
  double s = std::sqrt(0.5);
  KadetsGadgetParams pa;
  pa.spherePoints = {{1, 0}, {-1, 0}, {s, s}, {-s, -s}};
  pa.families = {{0, 1}, {2}};
  KadetsGadgetParams pb = pa;
  pb.families = {{1, 0}, {2}};  // same family set, permuted listing
  auto GA = kadets_gadget(nu, pa), GB = kadets_gadget(nu, pb);
  int sphereCount = (int)pa.spherePoints.size();
  // every sub-threshold witness keeps the two point classes apart
  auto witnesses = gh_witnesses_below(GA, GB, 0.5);
  REQUIRE(!witnesses.empty());
  for (const auto& w : witnesses)
    for (auto& [a, b] : w.pairs()) CHECK((a < sphereCount) == (b < sphereCount));
}

TEST_CASE("bound is functorial under relabeling") {
  MetricSpace M = twoPoint(5.5);
  MetricSpace N = relabel_space(M, 3);
  auto cert = gh_exact(bound(M), bound(N));
  CHECK(cert.value == doctest::Approx(0.0));
}

TEST_CASE("lipschitz_gadget formula spot checks") {
  MetricSpace m = twoPoint(0.25);
  LevelGadgetParams params{-2, 2};
  MetricSpace out = lipschitz_gadget(m, params);
  CHECK(out.n == 2 * 5 + 1);
  int anchor = level_gadget_anchor(m, params);
  // |10*0 + 4| + 1 = 5 at level zero
  CHECK(out.at(level_gadget_index(m, params, 0, 0), anchor) == doctest::Approx(5.0));
  // |10*1 + 4| + 1 = 15 and |-10 + 4| + 1 = 7
  CHECK(out.at(level_gadget_index(m, params, 0, 1), anchor) == doctest::Approx(15.0));
  CHECK(out.at(level_gadget_index(m, params, 0, -1), anchor) == doctest::Approx(7.0));
  // levels 1 and -1: 20 + min{1, d/2}
  CHECK(out.at(level_gadget_index(m, params, 0, 1), level_gadget_index(m, params, 1, -1)) ==
        doctest::Approx(20.0 + std::min(1.0, 0.25 / 2.0)));
  // same point, different levels: plain level gap
  CHECK(out.at(level_gadget_index(m, params, 0, -2), level_gadget_index(m, params, 0, 2)) ==
        doctest::Approx(40.0));
}

TEST_CASE("lipschitz_gadget of isometric inputs is isometric") {
  MetricSpace M = twoPoint(0.25);
  MetricSpace N = relabel_space(M, 9);
  LevelGadgetParams params{-2, 2};
  auto cert = gh_exact(lipschitz_gadget(M, params), lipschitz_gadget(N, params));
  CHECK(cert.value == doctest::Approx(0.0));
}

TEST_CASE("hl_gadget restricts the level range and keeps the anchor distances") {
  MetricSpace m = twoPoint(0.8);
  LevelGadgetParams bad{-1, 1};
  CHECK_THROWS_WITH_AS(hl_gadget(m, bad), doctest::Contains("BadParams"), Error);
  LevelGadgetParams params{-1, 0};
  MetricSpace out = hl_gadget(m, params);
  MetricSpace lip = lipschitz_gadget(m, params);
  REQUIRE(out.n == lip.n);
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) CHECK(out.at(i, j) == lip.at(i, j));
  // level-0 slice carries min{1, d}
  CHECK(out.at(level_gadget_index(m, params, 0, 0), level_gadget_index(m, params, 1, 0)) ==
        doctest::Approx(std::min(1.0, 0.8)));
}

TEST_CASE("optimal witness between close hl gadgets restricts to an HL(24 eps) witness") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    MetricSpace M = random_space({4, 0.3, 0.9, seed + 90});
    MetricSpace N = perturb_space(M, 0.03, 0.3, 0.9, seed + 91);
    LevelGadgetParams params{-1, 0};
    auto GM = hl_gadget(M, params), GN = hl_gadget(N, params);
    auto cert = gh_exact(GM, GN);
    REQUIRE(cert.exact);
    REQUIRE(cert.value < 1.0 / 5.0);
    const auto& w = std::get<Correspondence>(cert.witness);
    // restrict to the level-0 slice
    Correspondence r0 = Correspondence::empty(M.n, N.n);
    for (auto& [a, b] : w.pairs()) {
      int anchor = level_gadget_anchor(M, params);
      if (a == anchor || b == anchor) continue;
      int la = a / M.n, lb = b / N.n;
      if (la == 1 && lb == 1)  // level index 1 is level 0 here (kMin = -1)
        r0.set(a % M.n, b % N.n);
    }
    CHECK(r0.total());
    CHECK(hl_witnesses(M, N, 24.0 * cert.value, r0));
    // the same fact through the closeness search
    auto viaSearch = hl_close(M, N, 24.0 * cert.value + kTauEq);
    CHECK(viaSearch.witness.has_value());
  }
}

TEST_CASE("bm_gadget: vector pairs sit at 15 and the K paths clamp") {
  // vectors e1 and -e1 in the plane; nu(a - b) = 2 for the single pair
  std::vector<std::vector<double>> vecs = {{1.0, 0.0}, {-1.0, 0.0}};
  auto nu = norms::NormOracle::euclidean(2);
  BmGadgetParams params;
  params.vectors = vecs;
  params.c = {0.05, 1.05, 5.0};  // c*r = 0.1, 2.1, 10 -> K = 2, 2.1, 3
  BmGadgetLayout layout;
  MetricSpace out = bm_gadget(nu, params, &layout);
  CHECK(out.at(0, 1) == doctest::Approx(15.0));
  // lex order puts -e1 first, so the pair is (1, 0)
  CHECK(out.at(1, indexOfLabel(out, "p(1,0,7,1)")) == doctest::Approx(2.0));
  CHECK(out.at(1, indexOfLabel(out, "p(1,0,8,1)")) == doctest::Approx(2.1));
  CHECK(out.at(1, indexOfLabel(out, "p(1,0,9,1)")) == doctest::Approx(3.0));
  CHECK_NOTHROW(validate_space(out));
  // f-paths for q = -1 exist in both directions: a, f1 (7), f2 (10), -a (10)
  CHECK(out.at(0, indexOfLabel(out, "f(0->1,1)")) == doctest::Approx(7.0));
  CHECK(out.at(indexOfLabel(out, "f(0->1,2)"), 1) == doctest::Approx(10.0));
  REQUIRE(layout.rationalsUsed.size() == 1);
  CHECK(layout.rationalsUsed[0].num == -1);
}

TEST_CASE("bm_gadget coverage and closure guards") {
  std::vector<std::vector<double>> vecs = {{1.0, 0.0}, {-1.0, 0.0}};
  auto nu = norms::NormOracle::euclidean(2);
  BmGadgetParams bad;
  bad.vectors = vecs;
  bad.c = {5.0};  // c*r = 10, never in (2, 9/4)
  CHECK_THROWS_WITH_AS(bm_gadget(nu, bad), doctest::Contains("CoverageViolation"), Error);

  BmGadgetParams asym;
  asym.vectors = {{1.0, 0.0}, {0.0, 1.0}};  // not closed under negation
  CHECK_THROWS_WITH_AS(bm_gadget(nu, asym), doctest::Contains("ClosureViolation"), Error);

  BmGadgetParams missing;
  missing.vectors = vecs;
  missing.rationals = {{2, 1}};  // 2*e1 is not in the list
  CHECK_THROWS_WITH_AS(bm_gadget(nu, missing), doctest::Contains("ClosureViolation"), Error);
}

TEST_CASE("bm_gadget of the same space under two enumerations is isometric") {
  auto nu = norms::NormOracle::euclidean(2);
  BmGadgetParams a, b;
  a.vectors = {{1.0, 0.0}, {-1.0, 0.0}};
  b.vectors = {{-1.0, 0.0}, {1.0, 0.0}};
  MetricSpace GA = bm_gadget(nu, a), GB = bm_gadget(nu, b);
  REQUIRE(GA.n == GB.n);
  auto cert = gh_exact(GA, GB);
  CHECK(cert.value == doctest::Approx(0.0));
}

TEST_CASE("bm_gadget with additive and scalar structure validates") {
  // {a, -a, 2a, -2a}: rich scalar structure, and a + (-2a) = -a is listed,
  // so x-triangles appear while the point count stays inside the guard
  std::vector<std::vector<double>> vecs = {{1, 0}, {-1, 0}, {2, 0}, {-2, 0}};
  auto nu = norms::NormOracle::euclidean(2);
  BmGadgetParams params;
  params.vectors = vecs;
  BmGadgetLayout layout;
  MetricSpace out = bm_gadget(nu, params, &layout);
  CHECK_NOTHROW(validate_space(out));
  // the x-triangle of (a=-e1... ) at least one sum pair got built
  bool sawTriangle = false;
  for (const auto& l : out.labels) sawTriangle = sawTriangle || l.rfind("x3", 0) == 0;
  CHECK(sawTriangle);
  // triangle legs are 5 after completion
  for (int i = 0; i < out.n; ++i)
    if (out.labels[i].rfind("x3(", 0) == 0) {
      int x1 = -1;
      std::string suffix = out.labels[i].substr(2);
      for (int j = 0; j < out.n; ++j)
        if (out.labels[j] == "x1" + suffix) x1 = j;
      REQUIRE(x1 >= 0);
      CHECK(out.at(i, x1) == doctest::Approx(5.0));
      break;
    }
}

TEST_CASE("kadets_gadget formulas on an antipodal pair in the plane") {
  auto nu = norms::NormOracle::euclidean(2);
  KadetsGadgetParams params;
  params.spherePoints = {{1.0, 0.0}, {-1.0, 0.0}};
  params.families = {{0, 1}, {0}};
  MetricSpace out = kadets_gadget(nu, params);
  CHECK(out.n == 2 + 2 + 1);
  // x0 vs x1: plain norm distance
  CHECK(out.at(0, 1) == doctest::Approx(2.0));
  // p_{F,0} vs p_{F,1} for the antipodal family: 15 + 0 / 2
  CHECK(out.at(2, 3) == doctest::Approx(15.0));
  // sphere to family point: 10 + ||x_i - x_k||
  CHECK(out.at(0, 2) == doctest::Approx(10.0));
  CHECK(out.at(1, 2) == doctest::Approx(12.0));
  // distinct families: 20
  CHECK(out.at(2, 4) == doctest::Approx(20.0));
  CHECK(out.at(3, 4) == doctest::Approx(20.0));
  CHECK_NOTHROW(validate_space(out));
}

TEST_CASE("kadets_gadget rejects bad inputs") {
  auto nu = norms::NormOracle::euclidean(2);
  KadetsGadgetParams nonUnit;
  nonUnit.spherePoints = {{2.0, 0.0}, {-2.0, 0.0}};
  nonUnit.families = {{0}};
  CHECK_THROWS_WITH_AS(kadets_gadget(nu, nonUnit), doctest::Contains("NonUnitVector"), Error);
  KadetsGadgetParams emptyFam;
  emptyFam.spherePoints = {{1.0, 0.0}, {-1.0, 0.0}};
  emptyFam.families = {{}};
  CHECK_THROWS_WITH_AS(kadets_gadget(nu, emptyFam), doctest::Contains("EmptyFamily"), Error);
}

TEST_CASE("kadets_gadget is functorial under the antipodal isometry") {
  auto nu = norms::NormOracle::euclidean(2);
  double s = std::sqrt(0.5);
  KadetsGadgetParams a;
  a.spherePoints = {{1.0, 0.0}, {-1.0, 0.0}, {s, s}, {-s, -s}};
  a.families = {{0, 2}, {1}};
  // x -> -x permutes the sphere points (0<->1, 2<->3); families follow
  KadetsGadgetParams b;
  b.spherePoints = a.spherePoints;
  b.families = {{1, 3}, {0}};
  auto cert = gh_exact(kadets_gadget(nu, a), kadets_gadget(nu, b));
  CHECK(cert.value == doctest::Approx(0.0));
}

TEST_CASE("gadget size guards fire") {
  MetricSpace big = random_space({20, 5.0, 7.0, 5});
  CHECK_THROWS_WITH_AS(bound(big), doctest::Contains("GadgetTooLarge"), Error);
  MetricSpace m = random_space({30, 1.0, 2.0, 6});
  CHECK_THROWS_WITH_AS(separate(m, {1.0, 20}), doctest::Contains("GadgetTooLarge"), Error);
}
