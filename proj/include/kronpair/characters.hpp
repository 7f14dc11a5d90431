#pragma once

// Characters used by the interpolation engines, all evaluated exactly.
//
// A LadderCharacter describes a character on a finitely generated subgroup
// of ℚ by its values on unit/L_k along a divisibility chain of levels
// L_0 = 1 | L_1 | L_2 | ... . Consistency (L_{k+1}/L_k)·a_{k+1} ≡ a_k makes
// the value at any covered point independent of the rung used. A pinned
// ladder has unit 1 and a_0 = 0, so it is trivial on ℤ and factors through
// ℚ/ℤ; that is also how characters of C(p^∞) and ℤ(n) are described.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kronpair/exact.hpp"
#include "kronpair/groups.hpp"

namespace kronpair {

struct Rung {
  BigInt level;
  UnitAngle value;

  friend bool operator==(const Rung&, const Rung&) = default;
};

class LadderCharacter {
 public:
  /// Rungs [(1, 0)] with unit 1: trivial on ℤ.
  static LadderCharacter pinned();
  /// Rungs [(1, value)]: the character with g(unit) = value.
  static LadderCharacter generated_by(const BigRational& unit, const UnitAngle& value);
  /// Validates the chain and consistency; throws InvalidArgument.
  static LadderCharacter from_rungs(const BigRational& unit, std::vector<Rung> rungs);

  const BigRational& unit() const { return unit_; }
  const std::vector<Rung>& rungs() const { return rungs_; }
  const Rung& top() const { return rungs_.back(); }
  bool is_pinned() const { return unit_ == BigRational(1) && rungs_.front().value.is_identity(); }

  bool covers(const BigRational& x) const;
  std::optional<UnitAngle> try_evaluate(const BigRational& x) const;
  /// Throws LevelNotCovered when no rung level is divisible by the
  /// denominator of x/unit.
  UnitAngle evaluate(const BigRational& x) const;

  /// Appends (new_level, (a_top + K)/J) with J = new_level/top level.
  /// J = 1 leaves the ladder unchanged.
  LadderCharacter extended(const BigInt& new_level, const BigInt& k) const;
  /// Smallest K = 0 extension that covers x (identity if already covered).
  LadderCharacter covering(const BigRational& x) const;
  /// Rungs with level ≤ max_level.
  LadderCharacter truncated(const BigInt& max_level) const;

  friend bool operator==(const LadderCharacter&, const LadderCharacter&) = default;

 private:
  LadderCharacter(BigRational unit, std::vector<Rung> rungs) : unit_(std::move(unit)), rungs_(std::move(rungs)) {}
  void validate() const;

  BigRational unit_{1};
  std::vector<Rung> rungs_;
};

UnitAngle ladder_evaluate(const LadderCharacter& g, const BigRational& x);
LadderCharacter ladder_extend(const LadderCharacter& g, const BigInt& new_level, const BigInt& k);

/// A character of C(p^∞) ⊂ ℚ/ℤ: a pinned ladder whose levels are powers of p.
class LevelCharacter {
 public:
  explicit LevelCharacter(const BigInt& prime);
  LevelCharacter(const BigInt& prime, LadderCharacter ladder);

  const BigInt& prime() const { return prime_; }
  const LadderCharacter& ladder() const { return ladder_; }

  bool covers(const BigRational& x) const { return ladder_.covers(x); }
  UnitAngle evaluate(const BigRational& x) const;
  LevelCharacter extended(const BigInt& new_level, const BigInt& k) const;
  LevelCharacter covering(const BigRational& x) const;

  friend bool operator==(const LevelCharacter&, const LevelCharacter&) = default;

 private:
  BigInt prime_;
  LadderCharacter ladder_;
};

using FactorCharacter = std::variant<LadderCharacter, LevelCharacter>;

bool factor_covers(const FactorCharacter& c, const BigRational& x);
UnitAngle factor_evaluate(const FactorCharacter& c, const BigRational& x);
FactorCharacter factor_covering(const FactorCharacter& c, const BigRational& x);

/// g = (g_β) on ⊕Ω_β; trivial on every factor without a component.
class ProductCharacter {
 public:
  ProductCharacter() = default;
  explicit ProductCharacter(std::map<FactorIndex, FactorCharacter> components) : components_(std::move(components)) {}

  const std::map<FactorIndex, FactorCharacter>& components() const { return components_; }
  bool has_component(FactorIndex index) const { return components_.contains(index); }
  const FactorCharacter& component(FactorIndex index) const { return components_.at(index); }
  void set_component(FactorIndex index, FactorCharacter c) { components_.insert_or_assign(index, std::move(c)); }

  bool covers(const GroupElement& x) const;
  UnitAngle evaluate(const GroupElement& x) const;
  /// K = 0 extensions of the existing components until x is evaluable.
  ProductCharacter covering(const GroupElement& x) const;

  friend bool operator==(const ProductCharacter&, const ProductCharacter&) = default;

 private:
  std::map<FactorIndex, FactorCharacter> components_;
};

UnitAngle product_evaluate(const ProductCharacter& g, const GroupElement& x);

/// A point of 𝕋 acting on (1/scale)ℤ ⊂ ℚ by λ ↦ (scale·λ)·x.
struct TorusPoint {
  UnitAngle x;
  BigInt scale{1};

  UnitAngle evaluate(const BigRational& lambda) const;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

}  // namespace kronpair
