// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "metriclab/errors.hpp"
#include "metriclab/random.hpp"
#include "metriclab/rational.hpp"

namespace metriclab::norms {

inline constexpr double kAlphaDeltaCap = 200.0 / 199.0;
inline constexpr double kDefaultAlpha = 1.004;

inline double l2(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// The renorming ||.||_f of Euclidean space: sup of the Euclidean norm and the
/// scaled coordinate-pair sums (alpha + delta f(n,m))/sqrt(2) * |x_n + x_m|.
/// Encodes a metric f on index pairs into a norm.
class CoefficientNorm {
public:
  CoefficientNorm(int dim, double alpha, double delta, std::vector<double> pairValues)
      : dim_(dim), alpha_(alpha), delta_(delta), f_(std::move(pairValues)) {
    if (dim_ < 2) throw Error("BadDimension", "coefficient norm needs dim >= 2");
    if (!(1.0 < alpha_) || !(delta_ > 0) || alpha_ + delta_ > kAlphaDeltaCap + 1e-15)
      throw Error("BadAlphaDelta", "need 1 < alpha < alpha + delta <= 200/199");
    if ((int)f_.size() != dim_ * (dim_ - 1) / 2)
      throw Error("BadPairMap", "expected one value per unordered index pair");
    for (double v : f_)
      if (v < 0 || v > 1) throw Error("BadPairMap", "pair values must lie in [0,1]");
  }

  /// constant map, mostly for tests
  static CoefficientNorm constant(int dim, double value, double alpha = kDefaultAlpha,
                                  double delta = kAlphaDeltaCap - kDefaultAlpha) {
    return CoefficientNorm(dim, alpha, delta,
                           std::vector<double>((size_t)dim * (dim - 1) / 2, value));
  }

  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  double f(int n, int m) const {
    if (n == m || n < 0 || m < 0 || n >= dim_ || m >= dim_)
      throw Error("IndexOutOfRange", "pair index out of range");
    if (n > m) std::swap(n, m);
    // triangular index for n < m
    return f_[(size_t)n * dim_ - (size_t)n * (n + 1) / 2 + (m - n - 1)];
  }

  double h(int n, int m) const { return alpha_ + delta_ * f(n, m); }

  const std::vector<double>& pairValues() const { return f_; }

private:
  int dim_;
  double alpha_, delta_;
  std::vector<double> f_;  // triangular, pair (n,m) with n < m
};

inline double norm_eval(const CoefficientNorm& N, std::span<const double> x) {
  if ((int)x.size() != N.dim()) throw Error("DimensionMismatch", "vector length != dim");
  double best = l2(x);
  const double invSqrt2 = 0.7071067811865475244;
  for (int n = 0; n < N.dim(); ++n)
    for (int m = n + 1; m < N.dim(); ++m) {
      double term = invSqrt2 * N.h(n, m) * std::fabs(x[n] + x[m]);
      if (term > best) best = term;
    }
  return best;
}

/// e_{n,m} = (e_n + e_m)/sqrt(2), a Euclidean-unit vector. Indices 0-based.
inline std::vector<double> e_nm(int n, int m, int dim) {
  if (n < 0 || m < 0 || n >= m || m >= dim)
    throw Error("IndexOutOfRange", "need 0 <= n < m < dim");
  std::vector<double> v(dim, 0.0);
  const double invSqrt2 = 0.7071067811865475244;
  v[n] = invSqrt2;
  v[m] = invSqrt2;
  return v;
}

/// Membership in P_{n,m} = { x : ||x||_2 <= (alpha + delta f(n,m))/sqrt(2) * (x_n + x_m) }.
/// The pair sum is signed; vectors pointing away from e_{n,m} are outside.
inline bool pnm_member(std::span<const double> x, int n, int m, const CoefficientNorm& N) {
  if ((int)x.size() != N.dim()) throw Error("DimensionMismatch", "vector length != dim");
  if (n > m) std::swap(n, m);
  const double invSqrt2 = 0.7071067811865475244;
  return l2(x) <= invSqrt2 * N.h(n, m) * (x[n] + x[m]);
}

struct PermDistortionReport {
  double maxPairGap = 0;
  double bmUpperBound = 0;
  bool pointwiseCheck = false;
};

/// Distortion of the coordinate permutation T e_n = e_{pi(n)} between ||.||_f
/// and ||.||_g: the max pair gap, the Banach-Mazur upper bound it certifies,
/// and a sampled run of the pointwise inequality |  ||Tx||_g - ||x||_f  |
/// <= delta * gap * ||x||_2.
inline PermDistortionReport permutation_distortion(const CoefficientNorm& F,
                                                   const CoefficientNorm& G,
                                                   const std::vector<int>& pi, int samples = 1000,
                                                   uint64_t seed = 0) {
  if (F.dim() != G.dim() || (int)pi.size() != F.dim())
    throw Error("DimensionMismatch", "maps and permutation must share one dimension");
  if (std::fabs(F.alpha() - G.alpha()) > 1e-15 || std::fabs(F.delta() - G.delta()) > 1e-15)
    throw Error("BadAlphaDelta", "both norms must use the same alpha and delta");
  PermDistortionReport rep;
  const int dim = F.dim();
  for (int n = 0; n < dim; ++n)
    for (int m = n + 1; m < dim; ++m)
      rep.maxPairGap = std::max(rep.maxPairGap, std::fabs(G.f(pi[n], pi[m]) - F.f(n, m)));
  rep.bmUpperBound = 2 * std::log(1 + F.delta() * rep.maxPairGap);

  RandomStream rng(seed);
  rep.pointwiseCheck = true;
  std::vector<double> tx(dim);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x = rng.normalVector(dim);
    for (int i = 0; i < dim; ++i) tx[pi[i]] = x[i];
    double lhs = std::fabs(norm_eval(G, tx) - norm_eval(F, x));
    if (lhs > F.delta() * rep.maxPairGap * l2(x) + kTauEq) {
      rep.pointwiseCheck = false;
      break;
    }
  }
  return rep;
}

/// Finite-dimensional norm evaluator: plain Euclidean, a coefficient norm, or
/// the max of finitely many functionals (optionally together with the
/// Euclidean term). Norm axioms are spot-verified on construction.
class NormOracle {
public:
  enum class Kind { Euclidean, Coefficient, MaxOfFunctionals };

  static NormOracle euclidean(int dim) {
    NormOracle o;
    o.kind_ = Kind::Euclidean;
    o.dim_ = dim;
    o.spotCheck();
    return o;
  }
  static NormOracle coefficient(CoefficientNorm n) {
    NormOracle o;
    o.kind_ = Kind::Coefficient;
    o.dim_ = n.dim();
    o.coeff_.push_back(std::move(n));
    o.spotCheck();
    return o;
  }
  static NormOracle maxOfFunctionals(int dim, std::vector<std::vector<double>> functionals,
                                     bool includeEuclidean) {
    NormOracle o;
    o.kind_ = Kind::MaxOfFunctionals;
    o.dim_ = dim;
    o.functionals_ = std::move(functionals);
    o.includeEuclidean_ = includeEuclidean;
    for (const auto& f : o.functionals_)
      if ((int)f.size() != dim) throw Error("DimensionMismatch", "functional length != dim");
    if (o.functionals_.empty() && !includeEuclidean)
      throw Error("BadNorm", "empty functional list without Euclidean term");
    o.spotCheck();
    return o;
  }

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }

  double operator()(std::span<const double> x) const {
    if ((int)x.size() != dim_) throw Error("DimensionMismatch", "vector length != dim");
    switch (kind_) {
      case Kind::Euclidean:
        return l2(x);
      case Kind::Coefficient:
        return norm_eval(coeff_.front(), x);
      case Kind::MaxOfFunctionals: {
        double best = includeEuclidean_ ? l2(x) : 0.0;
        for (const auto& f : functionals_) best = std::max(best, std::fabs(dot(f, x)));
        return best;
      }
    }
    return 0;
  }

private:
  NormOracle() = default;

  void spotCheck() const {
    RandomStream rng(20240901);
    for (int t = 0; t < 32; ++t) {
      std::vector<double> x = rng.normalVector(dim_), y = rng.normalVector(dim_);
      double nx = (*this)(x), ny = (*this)(y);
      if (!(nx > 0))
        throw Error("NormAxiomViolation", "norm of a random nonzero vector is not positive");
      double lambda = rng.uniform(-3, 3);
      std::vector<double> lx(x);
      for (auto& v : lx) v *= lambda;
      if (std::fabs((*this)(lx) - std::fabs(lambda) * nx) > 1e-9 * (1 + nx))
        throw Error("NormAxiomViolation", "homogeneity fails");
      std::vector<double> s(x);
      for (int i = 0; i < dim_; ++i) s[i] += y[i];
      if ((*this)(s) > nx + ny + 1e-9) throw Error("NormAxiomViolation", "triangle fails");
    }
  }

  Kind kind_ = Kind::Euclidean;
  int dim_ = 0;
  std::vector<CoefficientNorm> coeff_;  // 0 or 1 entries
  std::vector<std::vector<double>> functionals_;
  bool includeEuclidean_ = false;
};

struct KadetsSumCheck {
  bool ok = true;
  double worstMargin = std::numeric_limits<double>::infinity();  // min over checks of bound - gap
};

/// | ||sum_F delta_i x_i||_X - ||sum_F delta_i y_i||_Y | < 2 |F| eps over every
/// subset F up to the exhaustive size (all sign patterns), plus sampled larger
/// subsets when requested.
inline KadetsSumCheck kadets_sum_check(const NormOracle& X, const NormOracle& Y,
                                       const std::vector<std::pair<std::vector<double>,
                                                                   std::vector<double>>>& pairs,
                                       double eps, int exhaustiveMaxSize = 4,
                                       int extraSamples = 0, uint64_t seed = 0) {
  for (const auto& [x, y] : pairs)
    if (std::fabs(X(x) - 1) > 1e-6 || std::fabs(Y(y) - 1) > 1e-6)
      throw Error("NonUnitVector", "kadets_sum_check expects unit vectors on both sides");
  const int n = (int)pairs.size();
  if (n > 20) throw Error("SizeLimit", "kadets_sum_check enumerates subsets of at most 20 pairs");
  KadetsSumCheck res;
  auto check = [&](const std::vector<int>& idx, uint32_t signs) {
    std::vector<double> sx(X.dim(), 0.0), sy(Y.dim(), 0.0);
    for (size_t k = 0; k < idx.size(); ++k) {
      double sgn = (signs >> k) & 1 ? -1.0 : 1.0;
      for (int c = 0; c < X.dim(); ++c) sx[c] += sgn * pairs[idx[k]].first[c];
      for (int c = 0; c < Y.dim(); ++c) sy[c] += sgn * pairs[idx[k]].second[c];
    }
    double gap = std::fabs(X(sx) - Y(sy));
    double bound = 2.0 * (double)idx.size() * eps;
    res.worstMargin = std::min(res.worstMargin, bound - gap);
    if (!(gap < bound + kTauEq)) res.ok = false;
  };
  // exhaustive small subsets
  std::vector<int> idx;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) > exhaustiveMaxSize) continue;
    idx.clear();
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) idx.push_back(k);
    for (uint32_t signs = 0; signs < (1u << idx.size()); ++signs) check(idx, signs);
  }
  RandomStream rng(seed);
  for (int s = 0; s < extraSamples; ++s) {
    idx.clear();
    for (int k = 0; k < n; ++k)
      if (rng.u01() < 0.5) idx.push_back(k);
    if (idx.empty() || (int)idx.size() <= exhaustiveMaxSize) continue;
    check(idx, (uint32_t)rng.below(1u << std::min<size_t>(idx.size(), 31)));
  }
  return res;
}

} // namespace metriclab::norms
