#include "kronpair/exact.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <numbers>

#include "kronpair/error.hpp"

namespace kronpair {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::InvalidCoordinate: return "InvalidCoordinate";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::LevelNotCovered: return "LevelNotCovered";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::RatioTooSmall: return "RatioTooSmall";
    case ErrorCode::LadderGapViolated: return "LadderGapViolated";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::IndexCollision: return "IndexCollision";
    case ErrorCode::SearchBudget: return "SearchBudget";
    case ErrorCode::ConditionBViolated: return "ConditionBViolated";
    case ErrorCode::ImageFinite: return "ImageFinite";
    case ErrorCode::OrderTooSmall: return "OrderTooSmall";
    case ErrorCode::ProbeInconclusive: return "ProbeInconclusive";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::string to_string(const BigInt& value) { return value.get_str(10); }

BigRational::BigRational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) {
    throw Error(ErrorCode::InvalidArgument, "zero denominator");
  }
  q_.get_num() = numerator;
  q_.get_den() = denominator;
  q_.canonicalize();
}

namespace {

bool is_integer_text(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!is_integer_text(s)) {
    throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(s) + "'");
  }
  if (s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

BigRational BigRational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return BigRational(parse_integer(text));
  }
  const BigInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) {
    throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  }
  return BigRational(parse_integer(text.substr(0, slash)), den);
}

BigInt BigRational::floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

BigRational BigRational::abs() const { return sign() < 0 ? -*this : *this; }

BigRational BigRational::operator-() const {
  BigRational r;
  r.q_ = -q_;
  return r;
}

BigRational& BigRational::operator+=(const BigRational& rhs) {
  q_ += rhs.q_;
  return *this;
}

BigRational& BigRational::operator-=(const BigRational& rhs) {
  q_ -= rhs.q_;
  return *this;
}

BigRational& BigRational::operator*=(const BigRational& rhs) {
  q_ *= rhs.q_;
  return *this;
}

BigRational& BigRational::operator/=(const BigRational& rhs) {
  if (rhs.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "division by zero");
  }
  q_ /= rhs.q_;
  return *this;
}

std::string BigRational::to_string() const {
  return q_.get_num().get_str(10) + "/" + q_.get_den().get_str(10);
}

std::size_t BigRational::hash() const {
  const std::size_t h1 = mpz_get_ui(q_.get_num_mpz_t()) ^ static_cast<std::size_t>(sign() + 1);
  const std::size_t h2 = mpz_get_ui(q_.get_den_mpz_t());
  return h1 * 0x9e3779b97f4a7c15ULL ^ (h2 + 0x7f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

BigInt denominator(const BigRational& x) { return x.denominator(); }

BigRational reduce_mod_one(const BigRational& x) {
  if (x.sign() >= 0 && x < BigRational(1)) return x;
  return x - BigRational(x.floor());
}

BigRational circular_distance(const UnitAngle& a, const UnitAngle& b) {
  const BigRational d = reduce_mod_one(a.turns() - b.turns());
  const BigRational other = BigRational(1) - d;
  return d < other ? d : other;
}

bool chord_within(const UnitAngle& a, const UnitAngle& b, const BigRational& bound_turns, bool strict) {
  if (bound_turns.sign() < 0 || bound_turns > BigRational(1, 2)) {
    throw Error(ErrorCode::InvalidArgument, "bound must lie in [0, 1/2] turns, got " + bound_turns.to_string());
  }
  const BigRational d = circular_distance(a, b);
  return strict ? d < bound_turns : d <= bound_turns;
}

double chord_approx(const BigRational& distance_turns) {
  return 2.0 * std::sin(std::numbers::pi * distance_turns.to_double());
}

namespace {

struct Enclosure {
  BigRational lo;
  BigRational hi;
};

BigRational from_mpfr(mpfr_t value) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), value);
  return BigRational(q.get_num(), q.get_den());
}

// Directed-rounding enclosure of asin(half_chord)/π for half_chord in (0, 1).
Enclosure threshold_enclosure(const BigRational& half_chord, mpfr_prec_t precision) {
  mpfr_t x, a, pi, r;
  mpfr_inits2(precision, x, a, pi, r, static_cast<mpfr_ptr>(nullptr));

  mpfr_set_q(x, half_chord.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_asin(a, x, MPFR_RNDD);
  mpfr_const_pi(pi, MPFR_RNDU);
  mpfr_div(r, a, pi, MPFR_RNDD);
  BigRational lo = from_mpfr(r);

  mpfr_set_q(x, half_chord.raw().get_mpq_t(), MPFR_RNDU);
  mpfr_asin(a, x, MPFR_RNDU);
  mpfr_const_pi(pi, MPFR_RNDD);
  mpfr_div(r, a, pi, MPFR_RNDU);
  BigRational hi = from_mpfr(r);

  mpfr_clears(x, a, pi, r, static_cast<mpfr_ptr>(nullptr));
  return {std::move(lo), std::move(hi)};
}

constexpr mpfr_prec_t kBasePrecision = 64;
constexpr mpfr_prec_t kMaxPrecision = mpfr_prec_t{1} << 20;

}  // namespace

ChordThreshold::ChordThreshold(BigRational chord) : chord_(std::move(chord)) {
  if (chord_.sign() <= 0) {
    exact_ = BigRational(0);
  } else if (chord_ == BigRational(1)) {
    exact_ = BigRational(1, 6);
  } else if (chord_ >= BigRational(2)) {
    exact_ = BigRational(1, 2);
  } else {
    auto e = threshold_enclosure(chord_ / BigRational(2), kBasePrecision);
    lo_ = std::move(e.lo);
    hi_ = std::move(e.hi);
  }
}

bool ChordThreshold::admits(const BigRational& d, bool strict) const {
  if (d.sign() < 0 || d > BigRational(1, 2)) {
    throw Error(ErrorCode::InvalidArgument, "circular distance outside [0, 1/2]: " + d.to_string());
  }
  if (chord_ > BigRational(2)) return true;
  if (exact_) {
    return strict ? d < *exact_ : d <= *exact_;
  }
  // d never equals the irrational threshold, so strictness is immaterial here.
  if (d < lo_) return true;
  if (d > hi_) return false;
  const BigRational half = chord_ / BigRational(2);
  for (mpfr_prec_t p = 2 * kBasePrecision; p <= kMaxPrecision; p *= 2) {
    const auto e = threshold_enclosure(half, p);
    if (d < e.lo) return true;
    if (d > e.hi) return false;
  }
  throw Error(ErrorCode::SearchBudget, "chord comparison did not separate at maximum precision");
}

}  // namespace kronpair
