#pragma once

#include <compare>
#include <ostream>
#include <sstream>
#include <string>

#include "rigid/checked.hpp"

namespace rigid {

/// Exact rational number with a positive, coprime denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(Int num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Int num, Int den) : num_(num), den_(den) { normalize(); }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Int g = gcd(a.den_, b.den_);
    Int da = a.den_ / g;
    Int db = b.den_ / g;
    return {add_checked(mul_checked(a.num_, db), mul_checked(b.num_, da)), mul_checked(mul_checked(da, db), g)};
  }
  friend Rational operator-(const Rational& a) { return {sub_checked(0, a.num_), a.den_}; }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Int g1 = gcd(a.num_, b.den_);
    Int g2 = gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return {mul_checked(a.num_ / g1, b.num_ / g2), mul_checked(a.den_ / g2, b.den_ / g1)};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw PreconditionError("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // a.num/a.den <=> b.num/b.den with positive denominators
    return mul_checked(a.num_, b.den_) <=> mul_checked(b.num_, a.den_);
  }

  Int floor() const { return div_floor(num_, den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "a", "-a", or "a/b".
  static Rational parse(const std::string& text) {
    auto slash = text.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(text));
      return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw PreconditionError("malformed rational '" + text + "'");
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void normalize() {
    if (den_ == 0) throw PreconditionError("rational with zero denominator");
    if (den_ < 0) {
      num_ = sub_checked(0, num_);
      den_ = sub_checked(0, den_);
    }
    Int g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Int num_ = 0;
  Int den_ = 1;
};

/// An element of Q/Z, stored as a reduced fraction in [0, 1). Written
/// multiplicatively it is the root of unity exp(2 pi i theta).
class QZ {
 public:
  QZ() = default;
  explicit QZ(Rational r) { set(r); }
  QZ(Int num, Int den) { set(Rational(num, den)); }

  const Rational& value() const { return v_; }
  Int num() const { return v_.num(); }
  Int den() const { return v_.den(); }
  bool is_zero() const { return v_.is_zero(); }

  friend QZ operator+(const QZ& a, const QZ& b) { return QZ(a.v_ + b.v_); }
  friend QZ operator-(const QZ& a) { return QZ(-a.v_); }
  friend QZ operator-(const QZ& a, const QZ& b) { return QZ(a.v_ - b.v_); }
  friend QZ operator*(Int k, const QZ& a) { return QZ(Rational(k) * a.v_); }
  QZ& operator+=(const QZ& o) { return *this = *this + o; }
  QZ& operator-=(const QZ& o) { return *this = *this - o; }
  friend bool operator==(const QZ& a, const QZ& b) = default;
  friend auto operator<=>(const QZ& a, const QZ& b) { return a.v_ <=> b.v_; }

  /// Multiplicative order of the root of unity.
  Int order() const { return v_.den(); }

  std::string str() const { return v_.str(); }
  friend std::ostream& operator<<(std::ostream& os, const QZ& q) { return os << q.str(); }

 private:
  void set(Rational r) { v_ = r - Rational(r.floor()); }
  Rational v_;
};

}  // namespace rigid
