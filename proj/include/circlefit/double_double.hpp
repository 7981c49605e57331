#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/Core>

namespace circlefit {

/// Unevaluated sum hi + lo of two doubles with |lo| <= ulp(hi) / 2, giving
/// roughly 106 significant bits. Arithmetic is built on error-free
/// transformations (two-sum, fma-based two-product).
class DoubleDouble {
 public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double hi) : hi_(hi) {}  // NOLINT: implicit by design of a scalar type
  constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }
  explicit operator double() const { return hi_ + lo_; }
  double to_double() const { return hi_ + lo_; }

  /// s + e == a + b exactly.
  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
  }
  /// Requires |a| >= |b|.
  static DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
  }
  /// p + e == a * b exactly (barring over/underflow).
  static DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble s = two_sum(a.hi_, b.hi_);
    const DoubleDouble t = two_sum(a.lo_, b.lo_);
    s.lo_ += t.hi_;
    s = quick_two_sum(s.hi_, s.lo_);
    s.lo_ += t.lo_;
    return quick_two_sum(s.hi_, s.lo_);
  }
  friend DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi_, -a.lo_}; }
  friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }
  friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble p = two_prod(a.hi_, b.hi_);
    p.lo_ += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    return quick_two_sum(p.hi_, p.lo_);
  }
  friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    if (b.hi_ == 0.0) throw std::domain_error("double-double division by zero");
    // Long division: two correction terms.
    const double q1 = a.hi_ / b.hi_;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi_ / b.hi_;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi_ / b.hi_;
    return quick_two_sum(q1, q2) + DoubleDouble(q3);
  }

  DoubleDouble& operator+=(const DoubleDouble& o) { return *this = *this + o; }
  DoubleDouble& operator-=(const DoubleDouble& o) { return *this = *this - o; }
  DoubleDouble& operator*=(const DoubleDouble& o) { return *this = *this * o; }
  DoubleDouble& operator/=(const DoubleDouble& o) { return *this = *this / o; }

  friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend bool operator!=(const DoubleDouble& a, const DoubleDouble& b) { return !(a == b); }
  friend bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
  friend bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
  friend bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const DoubleDouble& x) {
    return os << x.hi_ << (x.lo_ < 0 ? " - " : " + ") << std::abs(x.lo_);
  }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline DoubleDouble abs(const DoubleDouble& x) { return x.hi() < 0.0 ? -x : x; }

/// One Newton correction on the double square root.
inline DoubleDouble sqrt(const DoubleDouble& x) {
  if (x.hi() < 0.0) throw std::domain_error("double-double sqrt of a negative number");
  if (x.hi() == 0.0) return {0.0, 0.0};
  const double s = std::sqrt(x.hi());
  const DoubleDouble s2 = DoubleDouble::two_prod(s, s);
  const double correction = (x - s2).hi() / (2.0 * s);
  return DoubleDouble::quick_two_sum(s, correction);
}

inline bool isfinite(const DoubleDouble& x) { return std::isfinite(x.hi()) && std::isfinite(x.lo()); }

using dd = DoubleDouble;

}  // namespace circlefit

namespace Eigen {

template <>
struct NumTraits<circlefit::DoubleDouble> : GenericNumTraits<circlefit::DoubleDouble> {
  using Real = circlefit::DoubleDouble;
  using NonInteger = circlefit::DoubleDouble;
  using Nested = circlefit::DoubleDouble;
  using Literal = circlefit::DoubleDouble;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 20
  };

  static inline Real epsilon() { return {0x1p-104, 0.0}; }
  static inline Real dummy_precision() { return {1e-28, 0.0}; }
  static inline Real highest() { return {std::numeric_limits<double>::max(), 0.0}; }
  static inline Real lowest() { return {std::numeric_limits<double>::lowest(), 0.0}; }
  static inline int digits10() { return 31; }
  static inline int digits() { return 106; }
};

}  // namespace Eigen
