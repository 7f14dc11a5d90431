#include "kronpair/groups.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "kronpair/error.hpp"

namespace kronpair {

FactorSignature FactorSignature::prufer(const BigInt& prime) {
  if (prime < 2 || mpz_probab_prime_p(prime.get_mpz_t(), 30) == 0) {
    throw Error(ErrorCode::InvalidArgument, "C(p^inf) needs a prime p, got " + to_string(prime));
  }
  return FactorSignature(Kind::Prufer, prime);
}

FactorSignature FactorSignature::cyclic(const BigInt& modulus) {
  if (modulus < 2) {
    throw Error(ErrorCode::InvalidArgument, "Z(n) needs n >= 2, got " + to_string(modulus));
  }
  return FactorSignature(Kind::Cyclic, modulus);
}

BigRational FactorSignature::normalize(const BigRational& coordinate) const {
  if (kind_ == Kind::Rationals) return coordinate;
  BigRational r = reduce_mod_one(coordinate);
  BigInt den = r.denominator();
  if (kind_ == Kind::Prufer) {
    while (den % parameter_ == 0) den /= parameter_;
    if (den != 1) {
      throw Error(ErrorCode::InvalidCoordinate, coordinate.to_string() + " is not in " + describe());
    }
  } else if (parameter_ % den != 0) {
    throw Error(ErrorCode::InvalidCoordinate, coordinate.to_string() + " is not in " + describe());
  }
  return r;
}

std::string FactorSignature::describe() const {
  switch (kind_) {
    case Kind::Rationals: return "Q";
    case Kind::Prufer: return "C(" + to_string(parameter_) + "^inf)";
    case Kind::Cyclic: return "Z(" + to_string(parameter_) + ")";
  }
  return "?";
}

AmbientGroup::AmbientGroup(std::map<FactorIndex, FactorSignature> factors, std::optional<FactorSignature> default_factor)
    : factors_(std::move(factors)), default_(std::move(default_factor)) {}

bool AmbientGroup::has_factor(FactorIndex index) const { return default_.has_value() || factors_.contains(index); }

const FactorSignature& AmbientGroup::factor(FactorIndex index) const {
  if (auto it = factors_.find(index); it != factors_.end()) return it->second;
  if (default_) return *default_;
  throw Error(ErrorCode::InvalidArgument, "no factor at index " + std::to_string(index));
}

AmbientPtr make_ambient(std::map<FactorIndex, FactorSignature> factors, std::optional<FactorSignature> default_factor) {
  return std::make_shared<const AmbientGroup>(std::move(factors), std::move(default_factor));
}

namespace {

void require_same_ambient(const GroupElement& x, const GroupElement& y) {
  if (x.ambient() == y.ambient()) return;
  if (x.ambient() && y.ambient() && *x.ambient() == *y.ambient()) return;
  throw Error(ErrorCode::AmbientMismatch, "elements live in different ambient groups");
}

}  // namespace

GroupElement::GroupElement(AmbientPtr ambient) : ambient_(std::move(ambient)) {
  if (!ambient_) throw Error(ErrorCode::InvalidArgument, "null ambient group");
}

GroupElement::GroupElement(AmbientPtr ambient, std::vector<Coordinate> coordinates) : GroupElement(std::move(ambient)) {
  std::sort(coordinates.begin(), coordinates.end(),
            [](const Coordinate& a, const Coordinate& b) { return a.first < b.first; });
  support_.reserve(coordinates.size());
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (i > 0 && coordinates[i].first == coordinates[i - 1].first) {
      throw Error(ErrorCode::InvalidArgument, "repeated index " + std::to_string(coordinates[i].first));
    }
    BigRational value = ambient_->factor(coordinates[i].first).normalize(coordinates[i].second);
    if (!value.is_zero()) support_.emplace_back(coordinates[i].first, std::move(value));
  }
}

GroupElement GroupElement::unit(AmbientPtr ambient, FactorIndex index, const BigRational& value) {
  return GroupElement(std::move(ambient), {{index, value}});
}

GroupElement GroupElement::operator-() const {
  GroupElement r(ambient_);
  r.support_.reserve(support_.size());
  for (const auto& [index, value] : support_) {
    BigRational v = ambient_->factor(index).normalize(-value);
    if (!v.is_zero()) r.support_.emplace_back(index, std::move(v));
  }
  return r;
}

GroupElement operator+(const GroupElement& x, const GroupElement& y) {
  require_same_ambient(x, y);
  GroupElement r(x.ambient_);
  auto a = x.support_.begin();
  auto b = y.support_.begin();
  while (a != x.support_.end() || b != y.support_.end()) {
    if (b == y.support_.end() || (a != x.support_.end() && a->first < b->first)) {
      r.support_.push_back(*a++);
    } else if (a == x.support_.end() || b->first < a->first) {
      r.support_.push_back(*b++);
    } else {
      BigRational v = x.ambient_->factor(a->first).normalize(a->second + b->second);
      if (!v.is_zero()) r.support_.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  return r;
}

GroupElement operator-(const GroupElement& x, const GroupElement& y) { return x + (-y); }

GroupElement GroupElement::scaled(const BigInt& k) const {
  GroupElement r(ambient_);
  for (const auto& [index, value] : support_) {
    BigRational v = ambient_->factor(index).normalize(value * BigRational(k));
    if (!v.is_zero()) r.support_.emplace_back(index, std::move(v));
  }
  return r;
}

std::strong_ordering operator<=>(const GroupElement& x, const GroupElement& y) {
  const std::size_t n = std::min(x.support_.size(), y.support_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = x.support_[i].first <=> y.support_[i].first; c != 0) return c;
    if (auto c = x.support_[i].second <=> y.support_[i].second; c != 0) return c;
  }
  return x.support_.size() <=> y.support_.size();
}

std::string GroupElement::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i) out << ", ";
    out << '(' << support_[i].first << ", " << support_[i].second.to_string() << ')';
  }
  out << '}';
  return out.str();
}

std::size_t GroupElement::hash() const {
  std::size_t h = support_.size();
  for (const auto& [index, value] : support_) {
    h ^= std::hash<FactorIndex>{}(index) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= value.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

GroupElement add(const GroupElement& x, const GroupElement& y) { return x + y; }
GroupElement negate(const GroupElement& x) { return -x; }
GroupElement subtract(const GroupElement& x, const GroupElement& y) { return x - y; }

BigRational project(const GroupElement& x, FactorIndex index) {
  const auto& s = x.support();
  auto it = std::lower_bound(s.begin(), s.end(), index,
                             [](const Coordinate& c, FactorIndex i) { return c.first < i; });
  if (it != s.end() && it->first == index) return it->second;
  return BigRational(0);
}

GroupElement restrict_to(const GroupElement& x, const std::set<FactorIndex>& indices) {
  std::vector<Coordinate> kept;
  for (const auto& c : x.support()) {
    if (indices.contains(c.first)) kept.push_back(c);
  }
  return GroupElement(x.ambient(), std::move(kept));
}

ElementOrder coordinate_order(const FactorSignature& factor, const BigRational& coordinate) {
  if (coordinate.is_zero()) return {BigInt(1)};
  if (!factor.is_torsion()) return {};
  return {factor.normalize(coordinate).denominator()};
}

ElementOrder element_order(const GroupElement& x) {
  BigInt order = 1;
  for (const auto& [index, value] : x.support()) {
    const auto o = coordinate_order(x.ambient()->factor(index), value);
    if (o.infinite()) return {};
    order = lcm(order, *o.finite);
  }
  return {order};
}

ElementStream ElementStream::from_list(AmbientPtr ambient, std::vector<GroupElement> elements, std::string description) {
  std::set<GroupElement> seen;
  for (const auto& e : elements) {
    if (!seen.insert(e).second) {
      throw Error(ErrorCode::InvalidArgument, "stream elements must be distinct; repeated " + e.to_string());
    }
    if (!(*e.ambient() == *ambient)) {
      throw Error(ErrorCode::AmbientMismatch, "stream element from a different ambient group");
    }
  }
  ElementStream s(std::move(ambient), std::move(description));
  s.list_ = std::make_shared<const std::vector<GroupElement>>(std::move(elements));
  return s;
}

ElementStream ElementStream::from_rule(AmbientPtr ambient, Generator rule, std::string description) {
  ElementStream s(std::move(ambient), std::move(description));
  s.rule_ = std::move(rule);
  return s;
}

std::optional<GroupElement> ElementStream::at(std::size_t k) const {
  if (list_) {
    if (k >= list_->size()) return std::nullopt;
    return (*list_)[k];
  }
  return rule_(k);
}

std::vector<GroupElement> ElementStream::prefix(std::size_t n) const {
  std::vector<GroupElement> out;
  for (std::size_t k = 0; k < n; ++k) {
    auto e = at(k);
    if (!e) break;
    out.push_back(std::move(*e));
  }
  return out;
}

std::optional<std::size_t> ElementStream::finite_size() const {
  if (list_) return list_->size();
  return std::nullopt;
}

ElementStream geometric_stream(AmbientPtr ambient, FactorIndex index, const BigInt& base, std::size_t start) {
  if (base < 2) throw Error(ErrorCode::InvalidArgument, "geometric base must be >= 2");
  auto rule = [ambient, index, base, start](std::size_t k) {
    BigInt v;
    mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k + start));
    return GroupElement::unit(ambient, index, BigRational(v));
  };
  return ElementStream::from_rule(ambient, rule, "geometric(" + to_string(base) + ")");
}

ElementStream naturals_stream(AmbientPtr ambient, FactorIndex index, std::size_t start) {
  auto rule = [ambient, index, start](std::size_t k) {
    return GroupElement::unit(ambient, index, BigRational(static_cast<long>(k + start)));
  };
  return ElementStream::from_rule(ambient, rule, "naturals(" + std::to_string(start) + ")");
}

ElementStream unit_generator_stream(AmbientPtr ambient, FactorIndex start) {
  auto rule = [ambient, start](std::size_t k) {
    const FactorIndex index = start + k;
    const auto& f = ambient->factor(index);
    const BigRational value = f.is_torsion() ? BigRational(BigInt(1), f.parameter()) : BigRational(1);
    return GroupElement::unit(ambient, index, value);
  };
  return ElementStream::from_rule(ambient, rule, "unit-generators");
}

std::uint64_t nth_prime(std::size_t k) {
  static std::mutex mutex;
  static std::vector<std::uint64_t> primes;
  std::lock_guard lock(mutex);
  std::uint64_t limit = 64;
  while (primes.size() <= k) {
    limit *= 2;
    std::vector<bool> composite(limit + 1, false);
    primes.clear();
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  return primes[k];
}

ElementStream prime_reciprocal_stream(AmbientPtr ambient, FactorIndex index) {
  auto rule = [ambient, index](std::size_t k) {
    return GroupElement::unit(ambient, index, BigRational(BigInt(1), BigInt(static_cast<unsigned long>(nth_prime(k)))));
  };
  return ElementStream::from_rule(ambient, rule, "prime-reciprocals");
}

ElementStream prime_power_reciprocal_stream(AmbientPtr ambient, FactorIndex index, const BigInt& prime) {
  auto rule = [ambient, index, prime](std::size_t k) {
    BigInt d;
    mpz_pow_ui(d.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(k + 1));
    return GroupElement::unit(ambient, index, BigRational(BigInt(1), d));
  };
  return ElementStream::from_rule(ambient, rule, "prime-power-reciprocals(" + to_string(prime) + ")");
}

DifferenceSweep::DifferenceSweep(const ElementStream& stream, std::size_t budget) : stream_(stream), budget_(budget) {}

const GroupElement* DifferenceSweep::element(std::size_t k) {
  while (cache_.size() <= k) {
    auto e = stream_.at(cache_.size());
    if (!e) return nullptr;
    cache_.push_back(std::move(*e));
  }
  return &cache_[k];
}

std::optional<Difference> DifferenceSweep::next() {
  while (!exhausted_) {
    if (n_ >= budget_ || element(n_) == nullptr) {
      exhausted_ = true;
      break;
    }
    const std::size_t plus = reversed_ ? i_ : n_;
    const std::size_t minus = reversed_ ? n_ : i_;
    GroupElement value = cache_[plus] - cache_[minus];
    if (reversed_) {
      reversed_ = false;
      if (++i_ == n_) {
        ++n_;
        i_ = 0;
      }
    } else {
      reversed_ = true;
    }
    if (value.is_zero()) continue;
    const bool duplicate = !seen_.insert(value).second;
    return Difference{std::move(value), plus, minus, duplicate};
  }
  return std::nullopt;
}

std::vector<Difference> difference_stream(const ElementStream& stream, std::size_t budget) {
  DifferenceSweep sweep(stream, budget);
  std::vector<Difference> out;
  while (auto d = sweep.next()) out.push_back(std::move(*d));
  return out;
}

TripleSum triple_sum_contains(const ElementStream& stream, const GroupElement& y, std::size_t budget) {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  const auto f = stream.prefix(budget);
  std::unordered_map<GroupElement, std::size_t> position;
  for (std::size_t k = 0; k < f.size(); ++k) position.emplace(f[k], k);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i; j < f.size(); ++j) {
      const GroupElement wanted = f[i] + f[j] - y;
      if (auto it = position.find(wanted); it != position.end()) {
        return TripleSum{i, j, it->second, f[i], f[j], f[it->second]};
      }
    }
  }
  throw Error(ErrorCode::BudgetExhausted,
              "no representation of " + y.to_string() + " within the first " + std::to_string(f.size()) + " elements");
}

}  // namespace kronpair
