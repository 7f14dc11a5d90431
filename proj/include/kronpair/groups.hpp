#pragma once

// Groups Γ ⊆ Ω = ⊕_α Ω_α with every Ω_α one of ℚ, C(p^∞) or ℤ(n).
//
// Indices form a countable ordered set (unsigned integers). An element is a
// finite sorted support of (index, coordinate) pairs; torsion coordinates
// are kept as rationals in [0, 1) whose denominator satisfies the factor's
// constraint (a power of p for C(p^∞), a divisor of n for ℤ(n)).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kronpair/exact.hpp"

namespace kronpair {

using FactorIndex = std::uint64_t;

class FactorSignature {
 public:
  enum class Kind { Rationals, Prufer, Cyclic };

  static FactorSignature rationals() { return FactorSignature(Kind::Rationals, 0); }
  static FactorSignature prufer(const BigInt& prime);
  static FactorSignature cyclic(const BigInt& modulus);

  Kind kind() const { return kind_; }
  /// p for C(p^∞), n for ℤ(n), 0 for ℚ.
  const BigInt& parameter() const { return parameter_; }
  bool is_torsion() const { return kind_ != Kind::Rationals; }

  /// Canonical representative of a coordinate: mod 1 on torsion factors.
  /// Throws InvalidCoordinate when the denominator constraint fails.
  BigRational normalize(const BigRational& coordinate) const;

  std::string describe() const;

  friend bool operator==(const FactorSignature&, const FactorSignature&) = default;

 private:
  FactorSignature(Kind kind, BigInt parameter) : kind_(kind), parameter_(std::move(parameter)) {}

  Kind kind_;
  BigInt parameter_;
};

/// A family of factors: explicitly listed indices plus an optional rule
/// assigning one signature to every other index.
class AmbientGroup {
 public:
  AmbientGroup(std::map<FactorIndex, FactorSignature> factors, std::optional<FactorSignature> default_factor);

  bool has_factor(FactorIndex index) const;
  const FactorSignature& factor(FactorIndex index) const;

  const std::map<FactorIndex, FactorSignature>& listed_factors() const { return factors_; }
  const std::optional<FactorSignature>& default_factor() const { return default_; }

  friend bool operator==(const AmbientGroup&, const AmbientGroup&) = default;

 private:
  std::map<FactorIndex, FactorSignature> factors_;
  std::optional<FactorSignature> default_;
};

using AmbientPtr = std::shared_ptr<const AmbientGroup>;

AmbientPtr make_ambient(std::map<FactorIndex, FactorSignature> factors,
                        std::optional<FactorSignature> default_factor = std::nullopt);

using Coordinate = std::pair<FactorIndex, BigRational>;

class GroupElement {
 public:
  explicit GroupElement(AmbientPtr ambient);
  /// Coordinates may come in any order; zero coordinates are dropped.
  /// Repeated indices are rejected.
  GroupElement(AmbientPtr ambient, std::vector<Coordinate> coordinates);

  static GroupElement unit(AmbientPtr ambient, FactorIndex index, const BigRational& value);

  const std::vector<Coordinate>& support() const { return support_; }
  const AmbientPtr& ambient() const { return ambient_; }
  bool is_zero() const { return support_.empty(); }

  GroupElement operator-() const;
  friend GroupElement operator+(const GroupElement& x, const GroupElement& y);
  friend GroupElement operator-(const GroupElement& x, const GroupElement& y);
  GroupElement scaled(const BigInt& k) const;

  friend bool operator==(const GroupElement& x, const GroupElement& y) { return x.support_ == y.support_; }
  friend std::strong_ordering operator<=>(const GroupElement& x, const GroupElement& y);

  std::string to_string() const;
  std::size_t hash() const;

 private:
  AmbientPtr ambient_;
  std::vector<Coordinate> support_;
};

GroupElement add(const GroupElement& x, const GroupElement& y);
GroupElement negate(const GroupElement& x);
GroupElement subtract(const GroupElement& x, const GroupElement& y);

/// π_α: the α-coordinate, zero off the support.
BigRational project(const GroupElement& x, FactorIndex index);

/// Π: keep only the coordinates whose index lies in `indices`.
GroupElement restrict_to(const GroupElement& x, const std::set<FactorIndex>& indices);

/// Order of an element; `finite` is empty for elements of infinite order.
struct ElementOrder {
  std::optional<BigInt> finite;

  bool infinite() const { return !finite.has_value(); }
  /// True iff the order is at least q (infinite order always is).
  bool at_least(const BigInt& q) const { return infinite() || *finite >= q; }
  std::string to_string() const { return infinite() ? "infinite" : kronpair::to_string(*finite); }
};

ElementOrder coordinate_order(const FactorSignature& factor, const BigRational& coordinate);
ElementOrder element_order(const GroupElement& x);

/// A deterministic, restartable enumeration of a subset F ⊆ Γ.
/// Elements are addressable by position; a finite list simply ends.
class ElementStream {
 public:
  using Generator = std::function<GroupElement(std::size_t)>;

  static ElementStream from_list(AmbientPtr ambient, std::vector<GroupElement> elements, std::string description = "explicit");
  static ElementStream from_rule(AmbientPtr ambient, Generator rule, std::string description);

  std::optional<GroupElement> at(std::size_t k) const;
  /// The first min(n, size) elements.
  std::vector<GroupElement> prefix(std::size_t n) const;

  std::optional<std::size_t> finite_size() const;
  const AmbientPtr& ambient() const { return ambient_; }
  const std::string& description() const { return description_; }

 private:
  ElementStream(AmbientPtr ambient, std::string description) : ambient_(std::move(ambient)), description_(std::move(description)) {}

  AmbientPtr ambient_;
  std::string description_;
  std::shared_ptr<const std::vector<GroupElement>> list_;
  Generator rule_;
};

// Named generator rules. `start` offsets the exponent or index.
ElementStream geometric_stream(AmbientPtr ambient, FactorIndex index, const BigInt& base, std::size_t start = 1);
ElementStream naturals_stream(AmbientPtr ambient, FactorIndex index, std::size_t start = 0);
ElementStream unit_generator_stream(AmbientPtr ambient, FactorIndex start = 0);
ElementStream prime_reciprocal_stream(AmbientPtr ambient, FactorIndex index);
ElementStream prime_power_reciprocal_stream(AmbientPtr ambient, FactorIndex index, const BigInt& prime);

/// k-th prime (0-based); primes are cached process-wide.
std::uint64_t nth_prime(std::size_t k);

struct Difference {
  GroupElement value;
  std::size_t plus_index;   // value = F[plus_index] − F[minus_index]
  std::size_t minus_index;
  bool duplicate;           // an equal element was already produced
};

/// Diagonal sweep over (F − F) \ {0}: for n = 1, 2, ... and i < n it yields
/// F[n] − F[i] then F[i] − F[n]. Only the first `budget` elements of F are
/// used. Zero differences are skipped; repeats are flagged.
class DifferenceSweep {
 public:
  DifferenceSweep(const ElementStream& stream, std::size_t budget);

  std::optional<Difference> next();

 private:
  const GroupElement* element(std::size_t k);

  const ElementStream& stream_;
  std::size_t budget_;
  std::size_t n_ = 1;
  std::size_t i_ = 0;
  bool reversed_ = false;
  bool exhausted_ = false;
  std::vector<GroupElement> cache_;
  std::set<GroupElement> seen_;
};

std::vector<Difference> difference_stream(const ElementStream& stream, std::size_t budget);

struct TripleSum {
  std::size_t first, second, third;  // y = F[first] + F[second] − F[third]
  GroupElement f1, f2, f3;
};

/// Searches F[0..budget) for y = f1 + f2 − f3; BudgetExhausted if none.
TripleSum triple_sum_contains(const ElementStream& stream, const GroupElement& y, std::size_t budget);

}  // namespace kronpair

template <>
struct std::hash<kronpair::GroupElement> {
  std::size_t operator()(const kronpair::GroupElement& x) const noexcept { return x.hash(); }
};
