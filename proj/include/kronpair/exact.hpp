#pragma once

// Exact rational arithmetic and exact comparisons on the circle.
//
// Every root of unity in the library is a UnitAngle: a rational number of
// turns in [0, 1). The chord |e^{2πia} − e^{2πib}| equals 2 sin(π d) for the
// circular distance d, and is strictly increasing in d on [0, 1/2], so chord
// comparisons reduce to rational comparisons of d. Doubles only appear in
// human-readable reports.

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace kronpair {

using BigInt = mpz_class;

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);
std::string to_string(const BigInt& value);

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator. Zero is 0/1.
class BigRational {
 public:
  BigRational() = default;
  BigRational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  BigRational(const BigInt& value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  BigRational(const BigInt& numerator, const BigInt& denominator);

  /// Accepts "n" or "n/d" with an optional leading minus sign.
  static BigRational parse(std::string_view text);

  const BigInt& numerator() const { return q_.get_num(); }
  const BigInt& denominator() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  BigInt floor() const;
  BigRational abs() const;

  BigRational operator-() const;
  BigRational& operator+=(const BigRational& rhs);
  BigRational& operator-=(const BigRational& rhs);
  BigRational& operator*=(const BigRational& rhs);
  BigRational& operator/=(const BigRational& rhs);

  friend BigRational operator+(BigRational lhs, const BigRational& rhs) { return lhs += rhs; }
  friend BigRational operator-(BigRational lhs, const BigRational& rhs) { return lhs -= rhs; }
  friend BigRational operator*(BigRational lhs, const BigRational& rhs) { return lhs *= rhs; }
  friend BigRational operator/(BigRational lhs, const BigRational& rhs) { return lhs /= rhs; }

  friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Canonical "num/den" form; the denominator is always written.
  std::string to_string() const;
  double to_double() const { return q_.get_d(); }

  const mpq_class& raw() const { return q_; }
  std::size_t hash() const;

 private:
  mpq_class q_;
};

/// D(x): denominator of the reduced form of x.
BigInt denominator(const BigRational& x);

/// Representative of x modulo 1 in [0, 1).
BigRational reduce_mod_one(const BigRational& x);

/// A root of unity e^{2πi·turns}, with turns reduced into [0, 1).
class UnitAngle {
 public:
  UnitAngle() = default;
  explicit UnitAngle(const BigRational& turns) : turns_(reduce_mod_one(turns)) {}
  static UnitAngle parse(std::string_view text) { return UnitAngle(BigRational::parse(text)); }

  const BigRational& turns() const { return turns_; }
  bool is_identity() const { return turns_.is_zero(); }

  UnitAngle operator-() const { return UnitAngle(-turns_); }
  friend UnitAngle operator+(const UnitAngle& a, const UnitAngle& b) { return UnitAngle(a.turns_ + b.turns_); }
  friend UnitAngle operator-(const UnitAngle& a, const UnitAngle& b) { return UnitAngle(a.turns_ - b.turns_); }
  UnitAngle scaled(const BigInt& k) const { return UnitAngle(turns_ * BigRational(k)); }

  friend bool operator==(const UnitAngle&, const UnitAngle&) = default;
  friend std::strong_ordering operator<=>(const UnitAngle& a, const UnitAngle& b) { return a.turns_ <=> b.turns_; }

  std::string to_string() const { return turns_.to_string(); }

 private:
  BigRational turns_;
};

/// min(|a−b| mod 1, 1 − (|a−b| mod 1)), a value in [0, 1/2].
BigRational circular_distance(const UnitAngle& a, const UnitAngle& b);

/// Exact test of circular_distance(a, b) < bound (strict) or ≤ bound.
/// Requires 0 ≤ bound_turns ≤ 1/2.
bool chord_within(const UnitAngle& a, const UnitAngle& b, const BigRational& bound_turns, bool strict);

/// 2 sin(π d) in double precision, for reports only.
double chord_approx(const BigRational& distance_turns);

/// Exact test of 2 sin(π d) against a rational chord length c.
///
/// The turn threshold asin(c/2)/π is irrational unless c ∈ {0, 1, 2}
/// (Niven), so outside those cases a strict MPFR enclosure always separates
/// a rational d from it after finitely many refinements.
class ChordThreshold {
 public:
  explicit ChordThreshold(BigRational chord);

  /// True iff 2 sin(π d) < c (strict) or ≤ c. d must lie in [0, 1/2].
  bool admits(const BigRational& distance_turns, bool strict = true) const;

  const BigRational& chord() const { return chord_; }
  /// Rational turn threshold when it exists (c ∈ {0, 1, 2}).
  const std::optional<BigRational>& exact_turns() const { return exact_; }

 private:
  BigRational chord_;
  std::optional<BigRational> exact_;
  BigRational lo_, hi_;
};

}  // namespace kronpair

template <>
struct std::hash<kronpair::BigRational> {
  std::size_t operator()(const kronpair::BigRational& x) const noexcept { return x.hash(); }
};
