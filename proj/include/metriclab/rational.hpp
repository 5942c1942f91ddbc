// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "metriclab/errors.hpp"

namespace metriclab {

/// Exact rational on 64-bit numerator / positive denominator, always reduced.
/// Arithmetic runs through 128-bit intermediates and throws RationalOverflow
/// instead of wrapping. Meant for desk-scale oracle suites, not bulk numerics.
class Rat {
public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {} // NOLINT: implicit on purpose
  Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return fromWide(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num_ * b.num_;
    __int128 d = (__int128)a.den_ * b.den_;
    return fromWide(n, d);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw Error("RationalDivisionByZero", "division by zero");
    __int128 n = (__int128)a.num_ * b.den_;
    __int128 d = (__int128)a.den_ * b.num_;
    return fromWide(n, d);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  Rat abs() const { return num_ < 0 ? -*this : *this; }
  double toDouble() const { return (double)num_ / (double)den_; }

  /// Exact decimal string when the denominator is of the form 2^a 5^b,
  /// "num/den" otherwise.
  std::string toString() const;

  /// Accepts "n", "n/d" and plain decimals like "-3.25".
  static Rat parse(const std::string& s);

private:
  void normalize() {
    if (den_ == 0) throw Error("RationalZeroDenominator", "denominator is zero");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static Rat fromWide(__int128 n, __int128 d) {
    if (d == 0) throw Error("RationalZeroDenominator", "denominator is zero");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcdWide(an, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > std::numeric_limits<long long>::max() ||
        n < std::numeric_limits<long long>::min() ||
        d > std::numeric_limits<long long>::max())
      throw Error("RationalOverflow", "value exceeds 64-bit rational range");
    Rat r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }

  static __int128 gcdWide(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  long long num_;
  long long den_;
};

inline std::string Rat::toString() const {
  if (den_ == 1) return std::to_string(num_);
  long long d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  // scale to a power of ten and print with a decimal point
  int k = twos > fives ? twos : fives;
  __int128 scale = 1;
  for (int i = 0; i < k; ++i) scale *= 10;
  __int128 scaled = (__int128)(num_ < 0 ? -num_ : num_) * (scale / den_);
  std::string digits;
  if (scaled == 0) digits = "0";
  while (scaled > 0) {
    digits.insert(digits.begin(), char('0' + (int)(scaled % 10)));
    scaled /= 10;
  }
  while ((int)digits.size() <= k) digits.insert(digits.begin(), '0');
  digits.insert(digits.end() - k, '.');
  if (num_ < 0) digits.insert(digits.begin(), '-');
  return digits;
}

inline Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw Error("RationalParse", "empty string");
  // digits, one optional leading sign per component, one '.' or '/'
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool signPos = i == 0 || s[i - 1] == '/';
    if ((c >= '0' && c <= '9') || c == '.' || c == '/' || ((c == '-' || c == '+') && signPos))
      continue;
    throw Error("RationalParse", "unexpected character in \"" + s + "\"");
  }
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long n = std::strtoll(s.substr(0, slash).c_str(), nullptr, 10);
    long long d = std::strtoll(s.substr(slash + 1).c_str(), nullptr, 10);
    return Rat(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    return Rat(std::strtoll(s.c_str(), nullptr, 10));
  }
  bool neg = s[0] == '-';
  std::string ipart = s.substr(0, dot);
  std::string fpart = s.substr(dot + 1);
  if (fpart.size() > 18) throw Error("RationalParse", "too many decimal digits: " + s);
  long long den = 1;
  for (size_t i = 0; i < fpart.size(); ++i) den *= 10;
  long long whole = std::strtoll(ipart.c_str(), nullptr, 10);
  long long frac = fpart.empty() ? 0 : std::strtoll(fpart.c_str(), nullptr, 10);
  if (whole < 0 || neg) return Rat(whole, 1) - Rat(frac, den);
  return Rat(whole, 1) + Rat(frac, den);
}

/// Uniform accessors for the two numeric modes. Float mode compares within
/// kTauEq, rational mode compares exactly.
inline constexpr double kTauEq = 1e-9;

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static double tol() { return kTauEq; }
  static double fromInt(long long v) { return (double)v; }
  static double abs(double v) { return v < 0 ? -v : v; }
  static double toDouble(double v) { return v; }
  static std::string str(double v);
};

template <>
struct ScalarOps<Rat> {
  static constexpr bool exact = true;
  static Rat tol() { return Rat(0); }
  static Rat fromInt(long long v) { return Rat(v); }
  static Rat abs(const Rat& v) { return v.abs(); }
  static double toDouble(const Rat& v) { return v.toDouble(); }
  static std::string str(const Rat& v) { return v.toString(); }
};

} // namespace metriclab
