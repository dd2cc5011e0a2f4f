#pragma once

// Gaussian rationals Q(i) and 2x2 matrices over them.

#include <array>
#include <string>

#include "rigid/rational.hpp"

namespace rigid {

struct Gauss {
  Rational re, im;

  Gauss() = default;
  Gauss(Rational r) : re(r) {}  // NOLINT(google-explicit-constructor)
  Gauss(Int r) : re(r) {}       // NOLINT(google-explicit-constructor)
  Gauss(int r) : re(Int{r}) {}  // NOLINT(google-explicit-constructor)
  Gauss(Rational r, Rational i) : re(r), im(i) {}

  static Gauss i() { return {0, 1}; }

  friend Gauss operator+(const Gauss& a, const Gauss& b) { return {a.re + b.re, a.im + b.im}; }
  friend Gauss operator-(const Gauss& a) { return {-a.re, -a.im}; }
  friend Gauss operator-(const Gauss& a, const Gauss& b) { return {a.re - b.re, a.im - b.im}; }
  friend Gauss operator*(const Gauss& a, const Gauss& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Gauss conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }
  Gauss inverse() const {
    Rational n = norm();
    if (n.is_zero()) throw PreconditionError("Gauss: inverse of zero");
    return {re / n, -im / n};
  }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  friend bool operator==(const Gauss& a, const Gauss& b) = default;

  std::string str() const {
    if (im.is_zero()) return re.str();
    std::string s = re.is_zero() ? "" : re.str() + (im < Rational(0) ? "" : "+");
    if (im == Rational(1)) return s + "i";
    if (im == Rational(-1)) return s + "-i";
    return s + im.str() + "i";
  }
};

/// exp(2 pi i theta) for theta with denominator dividing 4.
inline Gauss gauss_root_of_unity(const QZ& theta) {
  if (4 % theta.den() != 0) throw PreconditionError("root of unity " + theta.str() + " is not a Gaussian rational");
  switch (theta.num() * (4 / theta.den())) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

/// Inverse of gauss_root_of_unity on {1, i, -1, -i}.
inline QZ gauss_angle(const Gauss& z) {
  if (z == Gauss(1)) return QZ(0, 1);
  if (z == Gauss::i()) return QZ(1, 4);
  if (z == Gauss(-1)) return QZ(1, 2);
  if (z == -Gauss::i()) return QZ(3, 4);
  throw PreconditionError("gauss_angle: " + z.str() + " is not a fourth root of unity");
}

class Mat2 {
 public:
  Mat2() = default;
  Mat2(Gauss a, Gauss b, Gauss c, Gauss d) : m_{a, b, c, d} {}

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 scalar(const Gauss& s) { return {s, 0, 0, s}; }
  static Mat2 diag(const Gauss& a, const Gauss& d) { return {a, 0, 0, d}; }

  const Gauss& operator()(int r, int c) const { return m_[static_cast<std::size_t>(2 * r + c)]; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0), x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1),
            x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0), x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1)};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x(0, 0) + y(0, 0), x(0, 1) + y(0, 1), x(1, 0) + y(1, 0), x(1, 1) + y(1, 1)};
  }
  friend Mat2 operator*(const Gauss& s, const Mat2& x) { return {s * x(0, 0), s * x(0, 1), s * x(1, 0), s * x(1, 1)}; }
  friend Mat2 operator-(const Mat2& x) { return Gauss(-1) * x; }
  friend bool operator==(const Mat2& a, const Mat2& b) = default;

  Gauss det() const { return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0); }
  Gauss trace() const { return (*this)(0, 0) + (*this)(1, 1); }
  /// Entrywise complex conjugation (the action of sigma on G(C)).
  Mat2 conj() const { return {m_[0].conj(), m_[1].conj(), m_[2].conj(), m_[3].conj()}; }
  Mat2 conj_transpose() const { return {m_[0].conj(), m_[2].conj(), m_[1].conj(), m_[3].conj()}; }
  Mat2 inverse() const {
    Gauss d = det().inverse();
    return {d * (*this)(1, 1), -(d * (*this)(0, 1)), -(d * (*this)(1, 0)), d * (*this)(0, 0)};
  }
  bool is_scalar() const { return m_[1].is_zero() && m_[2].is_zero() && m_[0] == m_[3]; }

  std::string str() const {
    return "[[" + m_[0].str() + "," + m_[1].str() + "],[" + m_[2].str() + "," + m_[3].str() + "]]";
  }

 private:
  std::array<Gauss, 4> m_{};
};

}  // namespace rigid
