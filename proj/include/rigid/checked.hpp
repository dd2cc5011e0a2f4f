#pragma once

// Overflow-checked 64-bit integer helpers. Every exact computation in the
// library goes through these so that a coefficient explosion surfaces as an
// exception instead of a silently wrong answer.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rigid {

using Int = std::int64_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an exact intermediate value leaves the 64-bit range.
struct OverflowError : Error {
  using Error::Error;
};

/// Raised when an operation is called outside its documented domain.
struct PreconditionError : Error {
  using Error::Error;
};

inline Int add_checked(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Int sub_checked(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Int mul_checked(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Int abs_checked(Int a) {
  if (a == INT64_MIN) throw OverflowError("integer overflow in abs");
  return a < 0 ? -a : a;
}

inline Int gcd(Int a, Int b) { return std::gcd(abs_checked(a), abs_checked(b)); }

inline Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return mul_checked(abs_checked(a) / gcd(a, b), abs_checked(b));
}

/// Least nonnegative residue; m must be positive.
inline Int mod_floor(Int a, Int m) {
  if (m <= 0) throw PreconditionError("mod_floor: modulus must be positive, got " + std::to_string(m));
  Int r = a % m;
  return r < 0 ? r + m : r;
}

/// Floor division for a positive divisor.
inline Int div_floor(Int a, Int m) {
  Int q = a / m;
  if ((a % m != 0) && ((a < 0) != (m < 0))) --q;
  return q;
}

}  // namespace rigid
