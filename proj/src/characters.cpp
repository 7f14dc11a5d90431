#include "kronpair/characters.hpp"

#include "kronpair/error.hpp"

namespace kronpair {

LadderCharacter LadderCharacter::pinned() { return LadderCharacter(BigRational(1), {Rung{BigInt(1), UnitAngle()}}); }

LadderCharacter LadderCharacter::generated_by(const BigRational& unit, const UnitAngle& value) {
  if (unit.is_zero()) throw Error(ErrorCode::InvalidArgument, "ladder unit must be nonzero");
  return LadderCharacter(unit, {Rung{BigInt(1), value}});
}

LadderCharacter LadderCharacter::from_rungs(const BigRational& unit, std::vector<Rung> rungs) {
  LadderCharacter g(unit, std::move(rungs));
  g.validate();
  return g;
}

void LadderCharacter::validate() const {
  if (unit_.is_zero()) throw Error(ErrorCode::InvalidArgument, "ladder unit must be nonzero");
  if (rungs_.empty() || rungs_.front().level != 1) {
    throw Error(ErrorCode::InvalidArgument, "ladder must start at level 1");
  }
  for (std::size_t k = 0; k + 1 < rungs_.size(); ++k) {
    const BigInt& lo = rungs_[k].level;
    const BigInt& hi = rungs_[k + 1].level;
    if (hi <= lo || hi % lo != 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "level " + to_string(lo) + " does not strictly divide " + to_string(hi));
    }
    if (rungs_[k + 1].value.scaled(hi / lo) != rungs_[k].value) {
      throw Error(ErrorCode::InvalidArgument, "rung at level " + to_string(hi) + " is inconsistent with level " +
                                                  to_string(lo));
    }
  }
}

std::optional<UnitAngle> LadderCharacter::try_evaluate(const BigRational& x) const {
  const BigRational r = x / unit_;
  const BigInt& t = r.denominator();
  for (const auto& rung : rungs_) {
    if (rung.level % t == 0) {
      return rung.value.scaled(r.numerator() * (rung.level / t));
    }
  }
  return std::nullopt;
}

bool LadderCharacter::covers(const BigRational& x) const { return top().level % (x / unit_).denominator() == 0; }

UnitAngle LadderCharacter::evaluate(const BigRational& x) const {
  if (auto v = try_evaluate(x)) return *v;
  throw Error(ErrorCode::LevelNotCovered,
              x.to_string() + " needs level " + to_string((x / unit_).denominator()) + ", top level is " +
                  to_string(top().level));
}

LadderCharacter LadderCharacter::extended(const BigInt& new_level, const BigInt& k) const {
  const BigInt& level = top().level;
  if (new_level <= 0 || new_level % level != 0) {
    throw Error(ErrorCode::NotDivisible, to_string(level) + " does not divide " + to_string(new_level));
  }
  const BigInt j = new_level / level;
  if (k < 0 || k >= j) {
    throw Error(ErrorCode::InvalidArgument, "K = " + to_string(k) + " outside [0, " + to_string(j) + ")");
  }
  if (j == 1) return *this;
  LadderCharacter g = *this;
  g.rungs_.push_back(Rung{new_level, UnitAngle((top().value.turns() + BigRational(k)) / BigRational(j))});
  return g;
}

LadderCharacter LadderCharacter::covering(const BigRational& x) const {
  if (covers(x)) return *this;
  return extended(lcm(top().level, (x / unit_).denominator()), BigInt(0));
}

LadderCharacter LadderCharacter::truncated(const BigInt& max_level) const {
  LadderCharacter g = *this;
  while (g.rungs_.size() > 1 && g.rungs_.back().level > max_level) g.rungs_.pop_back();
  return g;
}

UnitAngle ladder_evaluate(const LadderCharacter& g, const BigRational& x) { return g.evaluate(x); }

LadderCharacter ladder_extend(const LadderCharacter& g, const BigInt& new_level, const BigInt& k) {
  return g.extended(new_level, k);
}

namespace {

bool is_power_of(BigInt n, const BigInt& p) {
  if (n <= 0) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

LevelCharacter::LevelCharacter(const BigInt& prime) : LevelCharacter(prime, LadderCharacter::pinned()) {}

LevelCharacter::LevelCharacter(const BigInt& prime, LadderCharacter ladder) : prime_(prime), ladder_(std::move(ladder)) {
  if (prime_ < 2 || mpz_probab_prime_p(prime_.get_mpz_t(), 30) == 0) {
    throw Error(ErrorCode::InvalidArgument, "level character needs a prime, got " + to_string(prime_));
  }
  if (!ladder_.is_pinned()) throw Error(ErrorCode::InvalidArgument, "level character ladder must be pinned");
  for (const auto& rung : ladder_.rungs()) {
    if (!is_power_of(rung.level, prime_)) {
      throw Error(ErrorCode::InvalidArgument, "level " + to_string(rung.level) + " is not a power of " + to_string(prime_));
    }
  }
}

UnitAngle LevelCharacter::evaluate(const BigRational& x) const {
  if (!is_power_of(x.denominator(), prime_)) {
    throw Error(ErrorCode::InvalidArgument, x.to_string() + " is not a " + to_string(prime_) + "-power root");
  }
  return ladder_.evaluate(x);
}

LevelCharacter LevelCharacter::extended(const BigInt& new_level, const BigInt& k) const {
  if (!is_power_of(new_level, prime_)) {
    throw Error(ErrorCode::NotDivisible, "level " + to_string(new_level) + " is not a power of " + to_string(prime_));
  }
  return LevelCharacter(prime_, ladder_.extended(new_level, k));
}

LevelCharacter LevelCharacter::covering(const BigRational& x) const {
  return LevelCharacter(prime_, ladder_.covering(x));
}

bool factor_covers(const FactorCharacter& c, const BigRational& x) {
  return std::visit([&](const auto& g) { return g.covers(x); }, c);
}

UnitAngle factor_evaluate(const FactorCharacter& c, const BigRational& x) {
  return std::visit([&](const auto& g) { return g.evaluate(x); }, c);
}

FactorCharacter factor_covering(const FactorCharacter& c, const BigRational& x) {
  return std::visit([&](const auto& g) -> FactorCharacter { return g.covering(x); }, c);
}

bool ProductCharacter::covers(const GroupElement& x) const {
  for (const auto& [index, value] : x.support()) {
    auto it = components_.find(index);
    if (it != components_.end() && !factor_covers(it->second, value)) return false;
  }
  return true;
}

UnitAngle ProductCharacter::evaluate(const GroupElement& x) const {
  UnitAngle total;
  for (const auto& [index, value] : x.support()) {
    auto it = components_.find(index);
    if (it != components_.end()) total = total + factor_evaluate(it->second, value);
  }
  return total;
}

ProductCharacter ProductCharacter::covering(const GroupElement& x) const {
  ProductCharacter g = *this;
  for (const auto& [index, value] : x.support()) {
    auto it = g.components_.find(index);
    if (it != g.components_.end()) it->second = factor_covering(it->second, value);
  }
  return g;
}

UnitAngle product_evaluate(const ProductCharacter& g, const GroupElement& x) { return g.evaluate(x); }

UnitAngle TorusPoint::evaluate(const BigRational& lambda) const {
  const BigRational n = lambda * BigRational(scale);
  if (!n.is_integer()) {
    throw Error(ErrorCode::LevelNotCovered, lambda.to_string() + " is not in (1/" + to_string(scale) + ")Z");
  }
  return x.scaled(n.numerator());
}

}  // namespace kronpair
