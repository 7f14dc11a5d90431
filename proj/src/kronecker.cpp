#include "kronpair/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "kronpair/error.hpp"

namespace kronpair {

std::string describe(const Point& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, BigRational>) {
          return v.to_string();
        } else {
          return v.to_string();
        }
      },
      p);
}

namespace {

UnitAngle evaluate_rational(const Witness& w, const BigRational& x) {
  return std::visit(
      [&](const auto& g) -> UnitAngle {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, ProductCharacter>) {
          throw Error(ErrorCode::InvalidArgument, "product witness needs a group element, got " + x.to_string());
        } else {
          return g.evaluate(x);
        }
      },
      w);
}

BigInt pos_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), pos_mod(a, m).get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::InvalidArgument, to_string(a) + " is not invertible mod " + to_string(m));
  }
  return r;
}

}  // namespace

UnitAngle witness_evaluate(const Witness& w, const std::optional<FactorIndex>& via, const Point& p) {
  if (const auto* x = std::get_if<BigRational>(&p)) return evaluate_rational(w, *x);
  const auto& element = std::get<GroupElement>(p);
  if (const auto* g = std::get_if<ProductCharacter>(&w)) return g->evaluate(element);
  if (!via) throw Error(ErrorCode::InvalidArgument, "group element point needs a projection index");
  return evaluate_rational(w, project(element, *via));
}

BigRational KroneckerCertificate::max_distance() const {
  BigRational m;
  for (const auto& e : entries) m = std::max(m, e.distance);
  return m;
}

KroneckerCertificate make_certificate(Witness witness, std::optional<FactorIndex> via, BigRational bound_turns,
                                      bool strict, std::span<const Point> points, std::span<const UnitAngle> targets) {
  if (points.size() != targets.size()) {
    throw Error(ErrorCode::InvalidArgument, "points and targets differ in length");
  }
  KroneckerCertificate c{std::move(witness), via, std::move(bound_turns), strict, {}};
  c.entries.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const UnitAngle value = witness_evaluate(c.witness, c.via_factor, points[i]);
    c.entries.push_back(CertificateEntry{points[i], targets[i], value, circular_distance(value, targets[i])});
  }
  return c;
}

std::vector<Violation> verify_certificate(const KroneckerCertificate& certificate) {
  std::vector<Violation> out;
  const BigRational& bound = certificate.bound_turns;
  if (bound < BigRational(0) || bound > BigRational(1, 2)) {
    out.push_back({certificate.entries.size(), "bound " + bound.to_string() + " outside [0, 1/2]"});
    return out;
  }
  for (std::size_t i = 0; i < certificate.entries.size(); ++i) {
    const auto& e = certificate.entries[i];
    UnitAngle value;
    try {
      value = witness_evaluate(certificate.witness, certificate.via_factor, e.point);
    } catch (const Error& err) {
      out.push_back({i, err.what()});
      continue;
    }
    if (value != e.value) {
      out.push_back({i, "witness gives " + value.to_string() + ", recorded " + e.value.to_string()});
    }
    const BigRational d = circular_distance(value, e.target);
    if (d != e.distance) {
      out.push_back({i, "distance is " + d.to_string() + ", recorded " + e.distance.to_string()});
    }
    if (!chord_within(value, e.target, bound, certificate.strict)) {
      out.push_back({i, "distance " + d.to_string() + (certificate.strict ? " >= " : " > ") + bound.to_string()});
    }
  }
  return out;
}

BigRational epsilon_q(const BigInt& q) {
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "q must be at least 2, got " + to_string(q));
  return BigRational(BigInt(1), 2 * q);
}

double epsilon_q_chord(const BigInt& q) { return chord_approx(epsilon_q(q)); }

BigRational hadamard_bound(const BigRational& q) { return BigRational(1) / (BigRational(2) * (q - BigRational(1))); }

KroneckerCertificate hadamard_interpolate(std::span<const BigInt> frequencies, std::span<const UnitAngle> targets,
                                          const BigRational& q) {
  if (frequencies.size() != targets.size()) {
    throw Error(ErrorCode::InvalidArgument, "frequencies and targets differ in length");
  }
  if (frequencies.empty()) throw Error(ErrorCode::InvalidArgument, "no frequencies");
  if (q <= BigRational(2)) throw Error(ErrorCode::RatioTooSmall, "q = " + q.to_string() + " is not above 2");
  for (std::size_t j = 0; j < frequencies.size(); ++j) {
    if (frequencies[j] == 0) throw Error(ErrorCode::InvalidArgument, "frequency 0 at position " + std::to_string(j));
    if (j > 0 && BigRational(BigInt(abs(frequencies[j]))) < q * BigRational(BigInt(abs(frequencies[j - 1])))) {
      throw Error(ErrorCode::RatioTooSmall, "|" + to_string(frequencies[j]) + "| < q*|" +
                                                to_string(frequencies[j - 1]) + "| with q = " + q.to_string(),
                  j);
    }
  }

  // I_j = [lo, hi] is the set of x with n_j x within c/2 of a chosen lift y_j.
  const BigRational c = BigRational(1) / (q - BigRational(1));
  const BigRational half = c / BigRational(2);
  BigRational lo, hi;
  for (std::size_t j = 0; j < frequencies.size(); ++j) {
    const BigRational n(frequencies[j]);
    const BigRational& t = targets[j].turns();
    BigRational y = t;
    if (j > 0) {
      BigRational a = n * lo, b = n * hi;
      if (a > b) std::swap(a, b);
      y = t + BigRational(BigInt((a - t + half).floor()));
      if (y - half < a) y += BigRational(1);
      if (y + half > b) {
        throw Error(ErrorCode::RatioTooSmall, "arc does not fit at position " + std::to_string(j), j);
      }
    }
    lo = (y - half) / n;
    hi = (y + half) / n;
    if (lo > hi) std::swap(lo, hi);
  }
  const BigRational x = (lo + hi) / BigRational(2);

  std::vector<Point> points;
  points.reserve(frequencies.size());
  for (const auto& n : frequencies) points.emplace_back(BigRational(n));
  return make_certificate(TorusPoint{UnitAngle(x)}, std::nullopt, hadamard_bound(q), false, points, targets);
}

BigInt nearest_coset_index(const UnitAngle& base, const BigInt& z, const UnitAngle& desired) {
  if (z < 1) throw Error(ErrorCode::InvalidArgument, "coset size must be positive");
  const BigRational delta = (desired - base).turns();
  const BigInt f = (delta * BigRational(z)).floor();
  const BigRational below = delta - BigRational(f, z);
  const BigRational above = BigRational(f + 1, z) - delta;
  const BigInt k0 = pos_mod(f, z);
  const BigInt k1 = pos_mod(f + 1, z);
  if (below < above) return k0;
  if (above < below) return k1;
  const UnitAngle v0 = base + UnitAngle(BigRational(k0, z));
  const UnitAngle v1 = base + UnitAngle(BigRational(k1, z));
  return v1 < v0 ? k1 : k0;
}

namespace {

// One ladder stage: extend to `coverage` with K = 0, check the gap, then
// choose the rung at `next_level` (lcm(coverage, D(λ)) when unset).
LadderStage run_stage(LadderCharacter& g, std::size_t index, const BigRational& lambda, const BigRational& shift,
                      const UnitAngle& target, const BigInt& q, bool apply_shift, const BigInt& coverage,
                      const std::optional<BigInt>& next_level) {
  if (coverage != g.top().level) g = g.extended(coverage, BigInt(0));
  if (!g.covers(shift)) {
    throw Error(ErrorCode::LadderGapViolated, "shift " + shift.to_string() + " not covered at stage " + std::to_string(index),
                index);
  }
  const BigInt& level = g.top().level;
  const BigInt t = lambda.denominator();
  if (t <= q * level) {
    throw Error(ErrorCode::LadderGapViolated,
                "stage " + std::to_string(index) + ": D(" + lambda.to_string() + ") = " + to_string(t) +
                    " is not above q*" + to_string(level),
                index);
  }
  const BigInt new_level = next_level ? *next_level : lcm(level, t);
  if (new_level % t != 0 || new_level % level != 0) {
    throw Error(ErrorCode::NotDivisible, "level " + to_string(new_level) + " misses " + to_string(t), index);
  }
  const BigRational ratio(level, t);
  const BigInt y = ratio.numerator();
  const BigInt z = ratio.denominator();
  const BigInt a = lambda.numerator();

  LadderStage st;
  st.index = index;
  st.coverage_level = level;
  st.new_level = new_level;
  st.z = z;
  st.shift_value = apply_shift ? g.evaluate(shift) : UnitAngle();
  st.base = UnitAngle(BigRational(a) * ratio * g.top().value.turns());
  st.desired = target - st.shift_value;
  st.coset_index = nearest_coset_index(st.base, z, st.desired);
  st.k_choice = pos_mod(st.coset_index * mod_inverse(a * y, z), z);
  g = g.extended(new_level, st.k_choice);
  const UnitAngle achieved = g.evaluate(lambda) + st.shift_value;
  st.distance = circular_distance(achieved, target);
  return st;
}

void require_distinct(std::span<const BigRational> values, const char* what) {
  std::set<BigRational> seen;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!seen.insert(values[i]).second) {
      throw Error(ErrorCode::NotInjective, std::string(what) + " repeats " + values[i].to_string(), i + 1);
    }
  }
}

BigInt factorial(const BigInt& n) {
  if (n > 5000) throw Error(ErrorCode::SearchBudget, "factorial level " + to_string(n) + "! is too large");
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n.get_ui());
  return r;
}

LadderPass run_pass(std::span<const BigRational> lambdas, std::span<const BigRational> shifts,
                    std::span<const UnitAngle> targets, const BigInt& q, LevelPolicy policy, bool apply_shift) {
  LadderPass pass;
  LadderCharacter& g = pass.character;
  const std::size_t n = lambdas.size();
  BigInt b_max = n > 0 ? shifts[0].denominator() : BigInt(1);
  for (std::size_t i = 0; i < n; ++i) {
    BigInt coverage;
    std::optional<BigInt> next;
    if (policy == LevelPolicy::Lcm) {
      coverage = lcm(g.top().level, shifts[i].denominator());
    } else {
      // B_{i} = 2 max{D(λ_k), k ≤ i+1; D(s_k), k ≤ i+2} in 1-based terms.
      coverage = i == 0 ? factorial(shifts[0].denominator()) : g.top().level;
      b_max = std::max(b_max, lambdas[i].denominator());
      if (i + 1 < n) b_max = std::max(b_max, shifts[i + 1].denominator());
      next = factorial(2 * b_max);
    }
    pass.stages.push_back(run_stage(g, i + 1, lambdas[i], shifts[i], targets[i], q, apply_shift, coverage, next));
  }
  std::vector<Point> points;
  for (std::size_t i = 0; i < n; ++i) points.emplace_back(apply_shift ? lambdas[i] + shifts[i] : lambdas[i]);
  pass.certificate = make_certificate(g, std::nullopt, epsilon_q(q), true, points, targets);
  return pass;
}

}  // namespace

LadderInterpolation ladder_interpolate(std::span<const BigRational> lambdas, std::span<const BigRational> shifts,
                                       std::span<const UnitAngle> shifted_targets,
                                       std::span<const UnitAngle> plain_targets, const BigInt& q, LevelPolicy policy) {
  if (lambdas.size() != shifts.size() || lambdas.size() != shifted_targets.size() ||
      lambdas.size() != plain_targets.size()) {
    throw Error(ErrorCode::InvalidArgument, "ladder inputs differ in length");
  }
  if (q < 3) throw Error(ErrorCode::InvalidArgument, "ladder interpolation needs q >= 3");
  require_distinct(lambdas, "V");
  std::vector<BigRational> shifted;
  for (std::size_t i = 0; i < lambdas.size(); ++i) shifted.push_back(lambdas[i] + shifts[i]);
  require_distinct(shifted, "V'");
  LadderInterpolation out;
  out.shifted = run_pass(lambdas, shifts, shifted_targets, q, policy, true);
  out.unshifted = run_pass(lambdas, shifts, plain_targets, q, policy, false);
  return out;
}

LadderInterpolation ladder_interpolate(std::span<const BigRational> lambdas, std::span<const BigRational> shifts,
                                       std::span<const UnitAngle> targets, const BigInt& q, LevelPolicy policy) {
  return ladder_interpolate(lambdas, shifts, targets, targets, q, policy);
}

LadderBuilder::LadderBuilder(BigInt q, bool apply_shift) : q_(std::move(q)), apply_shift_(apply_shift) {
  if (q_ < 3) throw Error(ErrorCode::InvalidArgument, "ladder interpolation needs q >= 3");
}

const LadderStage& LadderBuilder::add_stage(const BigRational& lambda, const BigRational& shift,
                                            const UnitAngle& target) {
  const BigInt coverage = lcm(g_.top().level, shift.denominator());
  LadderCharacter g = g_;
  LadderStage st = run_stage(g, stages_.size() + 1, lambda, shift, target, q_, apply_shift_, coverage, std::nullopt);
  g_ = std::move(g);
  stages_.push_back(std::move(st));
  return stages_.back();
}

ProductInterpolation product_interpolate(const AmbientPtr& ambient, std::span<const ProductPoint> points,
                                         std::span<const UnitAngle> targets, const BigInt& q) {
  if (points.size() != targets.size()) throw Error(ErrorCode::InvalidArgument, "points and targets differ in length");
  ProductInterpolation out;
  ProductCharacter& g = out.character;
  std::set<FactorIndex> used;
  std::vector<Point> certified;
  for (std::size_t n = 0; n < points.size(); ++n) {
    const ProductPoint& pt = points[n];
    if (used.contains(pt.index)) {
      throw Error(ErrorCode::IndexCollision, "index " + std::to_string(pt.index) + " used twice", n + 1);
    }
    for (const auto& [idx, value] : pt.residual.support()) {
      if (!used.contains(idx)) {
        throw Error(ErrorCode::InvalidArgument,
                    "residual at stage " + std::to_string(n + 1) + " touches unfixed index " + std::to_string(idx), n + 1);
      }
    }
    const FactorSignature& sig = ambient->factor(pt.index);
    const BigRational c = sig.normalize(pt.coordinate);
    const ElementOrder order = coordinate_order(sig, c);
    if (c.is_zero() || !order.at_least(q)) {
      throw Error(ErrorCode::OrderTooSmall,
                  "coordinate " + c.to_string() + " at index " + std::to_string(pt.index) + " has order " +
                      order.to_string() + " < " + to_string(q),
                  n + 1);
    }
    g = g.covering(pt.residual);
    ProductStage st{pt.index, order, g.evaluate(pt.residual), {}, {}, {}};
    st.desired = targets[n] - st.residual_value;
    if (order.infinite()) {
      g.set_component(pt.index, LadderCharacter::generated_by(c, st.desired));
    } else {
      const BigInt& m = *order.finite;
      const BigInt k = nearest_coset_index(UnitAngle(), m, st.desired);
      const BigInt big_k = pos_mod(k * mod_inverse(c.numerator(), m), m);
      LadderCharacter ladder = LadderCharacter::pinned().extended(m, big_k);
      if (sig.kind() == FactorSignature::Kind::Prufer) {
        g.set_component(pt.index, LevelCharacter(sig.parameter(), std::move(ladder)));
      } else {
        g.set_component(pt.index, std::move(ladder));
      }
    }
    used.insert(pt.index);
    const GroupElement point = GroupElement::unit(ambient, pt.index, c) + pt.residual;
    st.chosen = g.evaluate(GroupElement::unit(ambient, pt.index, c));
    st.distance = circular_distance(st.chosen + st.residual_value, targets[n]);
    out.stages.push_back(std::move(st));
    certified.emplace_back(point);
  }
  out.certificate = make_certificate(g, std::nullopt, epsilon_q(q), false, certified, targets);
  return out;
}

namespace {

struct Frac {
  unsigned __int128 num;
  unsigned __int128 den;
};

bool less(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }

}  // namespace

BigRational torus_grid_slack(std::span<const BigInt> frequencies, std::uint64_t resolution) {
  BigInt m(0);
  for (const auto& n : frequencies) m = std::max(m, BigInt(abs(n)));
  return BigRational(m, BigInt(2) * BigInt(static_cast<unsigned long>(resolution)));
}

MinimaxResult minimax_torus_grid(std::span<const BigInt> frequencies, std::span<const UnitAngle> targets,
                                 std::uint64_t resolution, const MinimaxOptions& options) {
  if (frequencies.size() != targets.size()) {
    throw Error(ErrorCode::InvalidArgument, "frequencies and targets differ in length");
  }
  if (frequencies.empty()) throw Error(ErrorCode::InvalidArgument, "no frequencies");
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
  if (resolution > options.cap) {
    throw Error(ErrorCode::SearchBudget,
                "grid of " + std::to_string(resolution) + " points exceeds cap " + std::to_string(options.cap));
  }
  const BigInt big_n(static_cast<unsigned long>(resolution));

  bool fast = resolution <= (std::uint64_t{1} << 32);
  for (const auto& t : targets) fast = fast && t.turns().denominator() < BigInt(1UL << 30);
  const std::size_t k = frequencies.size();

  std::uint64_t best_i = 0;
  BigRational best;
  if (fast) {
    std::vector<unsigned __int128> step(k), a(k), b(k), mod(k);
    for (std::size_t j = 0; j < k; ++j) {
      step[j] = pos_mod(frequencies[j], big_n).get_ui();
      a[j] = targets[j].turns().numerator().get_ui();
      b[j] = targets[j].turns().denominator().get_ui();
      mod[j] = static_cast<unsigned __int128>(resolution) * b[j];
    }
    Frac best_f{2, 1};
    std::vector<unsigned __int128> r(k, 0);
    for (std::uint64_t i = 0; i < resolution; ++i) {
      Frac worst{0, 1};
      bool pruned = false;
      for (std::size_t j = 0; j < k; ++j) {
        // r_j = n_j i mod N; distance of r_j/N to a_j/b_j over N b_j.
        const unsigned __int128 lhs = r[j] * b[j];
        const unsigned __int128 rhs = a[j] * resolution;
        unsigned __int128 v = lhs >= rhs ? lhs - rhs : mod[j] - (rhs - lhs);
        if (v >= mod[j]) v -= mod[j];
        const unsigned __int128 d = std::min(v, mod[j] - v);
        const Frac f{d, mod[j]};
        if (less(worst, f)) worst = f;
        if (!less(worst, best_f)) {
          pruned = true;
          break;
        }
      }
      if (!pruned) {
        best_f = worst;
        best_i = i;
      }
      for (std::size_t j = 0; j < k; ++j) {
        r[j] += step[j];
        if (r[j] >= resolution) r[j] -= resolution;
      }
    }
    best = BigRational(BigInt(static_cast<unsigned long>(best_f.num)), BigInt(static_cast<unsigned long>(best_f.den)));
  } else {
    best = BigRational(1);
    for (std::uint64_t i = 0; i < resolution; ++i) {
      const BigRational x(BigInt(static_cast<unsigned long>(i)), big_n);
      BigRational worst;
      for (std::size_t j = 0; j < k && worst < best; ++j) {
        worst = std::max(worst, circular_distance(UnitAngle(x * BigRational(frequencies[j])), targets[j]));
      }
      if (worst < best) {
        best = worst;
        best_i = i;
      }
    }
  }
  MinimaxResult out{TorusPoint{UnitAngle(BigRational(BigInt(static_cast<unsigned long>(best_i)), big_n))}, best,
                    resolution, std::nullopt};
  if (options.certified) out.beats_certificate = best < *options.certified;
  return out;
}

namespace {

BigRational max_error(const std::vector<UnitAngle>& values, std::span<const UnitAngle> targets) {
  BigRational m;
  for (std::size_t i = 0; i < values.size(); ++i) m = std::max(m, circular_distance(values[i], targets[i]));
  return m;
}

std::uint64_t checked_product(std::span<const BigInt> factors, std::uint64_t cap) {
  BigInt total(1);
  for (const auto& f : factors) total *= f;
  if (total > BigInt(static_cast<unsigned long>(cap))) {
    throw Error(ErrorCode::SearchBudget, "search space of " + to_string(total) + " candidates exceeds cap " +
                                             std::to_string(cap));
  }
  return total.get_ui();
}

}  // namespace

MinimaxResult minimax_ladder_cosets(std::span<const BigRational> points, std::span<const UnitAngle> targets,
                                    std::span<const BigInt> levels, const MinimaxOptions& options) {
  if (points.size() != targets.size()) throw Error(ErrorCode::InvalidArgument, "points and targets differ in length");
  if (levels.empty() || levels[0] != 1) throw Error(ErrorCode::InvalidArgument, "level chain must start at 1");
  std::vector<BigInt> ratios;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] % levels[i - 1] != 0 || levels[i] <= levels[i - 1]) {
      throw Error(ErrorCode::NotDivisible, "level chain is not strictly divisible at " + to_string(levels[i]));
    }
    ratios.push_back(levels[i] / levels[i - 1]);
  }
  const std::uint64_t total = checked_product(ratios, options.cap);
  for (const auto& p : points) {
    if (levels.back() % p.denominator() != 0) {
      throw Error(ErrorCode::LevelNotCovered, p.to_string() + " is not covered by level " + to_string(levels.back()));
    }
  }

  // Depth-first over K choices; points whose denominator divides the current
  // level are settled and give a lower bound used for pruning.
  std::optional<LadderCharacter> best_g;
  BigRational best(1);
  std::vector<std::size_t> settle_depth(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t d = 0;
    while (levels[d] % points[i].denominator() != 0) ++d;
    settle_depth[i] = d;
  }
  auto bound_at = [&](const LadderCharacter& g, std::size_t depth) {
    BigRational m;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (settle_depth[i] == depth) m = std::max(m, circular_distance(g.evaluate(points[i]), targets[i]));
    }
    return m;
  };
  auto dfs = [&](auto&& self, const LadderCharacter& g, std::size_t depth, const BigRational& partial) -> void {
    if (!(partial < best)) return;
    if (depth + 1 == levels.size()) {
      best = partial;
      best_g = g;
      return;
    }
    for (BigInt kk = 0; kk < ratios[depth]; ++kk) {
      LadderCharacter next = g.extended(levels[depth + 1], kk);
      self(self, next, depth + 1, std::max(partial, bound_at(next, depth + 1)));
    }
  };
  const LadderCharacter root = LadderCharacter::pinned();
  dfs(dfs, root, 0, bound_at(root, 0));
  if (!best_g) {
    // Every candidate ties at the worst possible error 1/2.
    LadderCharacter g = root;
    for (std::size_t d = 1; d < levels.size(); ++d) g = g.extended(levels[d], BigInt(0));
    best_g = g;
    std::vector<UnitAngle> values;
    for (const auto& p : points) values.push_back(g.evaluate(p));
    best = max_error(values, targets);
  }
  MinimaxResult out{*best_g, best, total, std::nullopt};
  if (options.certified) out.beats_certificate = best < *options.certified;
  return out;
}

MinimaxResult minimax_product_cosets(std::span<const GroupElement> points, std::span<const UnitAngle> targets,
                                     const MinimaxOptions& options) {
  if (points.size() != targets.size()) throw Error(ErrorCode::InvalidArgument, "points and targets differ in length");
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no points");
  const AmbientPtr& ambient = points.front().ambient();
  std::map<FactorIndex, BigInt> level;
  for (const auto& p : points) {
    for (const auto& [idx, value] : p.support()) {
      if (!ambient->factor(idx).is_torsion()) {
        throw Error(ErrorCode::InvalidArgument, "coset enumeration needs torsion coordinates, index " +
                                                    std::to_string(idx) + " is Q");
      }
      auto [it, fresh] = level.try_emplace(idx, BigInt(1));
      it->second = lcm(it->second, value.denominator());
    }
  }
  std::vector<FactorIndex> indices;
  std::vector<BigInt> radix;
  for (const auto& [idx, d] : level) {
    indices.push_back(idx);
    radix.push_back(d);
  }
  const std::uint64_t total = checked_product(radix, options.cap);

  std::vector<unsigned long> digits(radix.size(), 0);
  std::vector<unsigned long> best_digits = digits;
  BigRational best(1);
  bool found = false;
  for (std::uint64_t c = 0; c < total; ++c) {
    BigRational worst;
    for (std::size_t i = 0; i < points.size() && (!found || worst < best); ++i) {
      BigRational v;
      for (const auto& [idx, value] : points[i].support()) {
        const auto pos = static_cast<std::size_t>(std::lower_bound(indices.begin(), indices.end(), idx) - indices.begin());
        v += value * BigRational(BigInt(digits[pos]));
      }
      worst = std::max(worst, circular_distance(UnitAngle(v), targets[i]));
    }
    if (!found || worst < best) {
      best = worst;
      best_digits = digits;
      found = true;
    }
    for (std::size_t d = 0; d < digits.size(); ++d) {
      if (++digits[d] < radix[d].get_ui()) break;
      digits[d] = 0;
    }
  }
  ProductCharacter g;
  for (std::size_t d = 0; d < indices.size(); ++d) {
    LadderCharacter ladder = radix[d] == 1 ? LadderCharacter::pinned()
                                           : LadderCharacter::pinned().extended(radix[d], BigInt(best_digits[d]));
    const FactorSignature& sig = ambient->factor(indices[d]);
    if (sig.kind() == FactorSignature::Kind::Prufer) {
      g.set_component(indices[d], LevelCharacter(sig.parameter(), std::move(ladder)));
    } else {
      g.set_component(indices[d], std::move(ladder));
    }
  }
  MinimaxResult out{std::move(g), best, total, std::nullopt};
  if (options.certified) out.beats_certificate = best < *options.certified;
  return out;
}

}  // namespace kronpair
