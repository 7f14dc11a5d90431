#include "kronpair/constructions.hpp"

#include <algorithm>
#include <limits>

#include "kronpair/error.hpp"

namespace kronpair {

namespace {

// Stream tags for the seeded generators.
constexpr std::uint64_t kTargetTag = 1;
constexpr std::uint64_t kStageSpecTag = 2;
constexpr std::uint64_t kEmpiricalTag = 3;
constexpr std::uint64_t kTargetDenominator = 360;

std::vector<std::uint32_t> split_words(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> out;
  for (auto w : words) {
    out.push_back(static_cast<std::uint32_t>(w & 0xffffffffU));
    out.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  return out;
}

}  // namespace

SeededRng::SeededRng(std::initializer_list<std::uint64_t> words) {
  const auto w = split_words(words);
  std::seed_seq seq(w.begin(), w.end());
  engine_.seed(seq);
}

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

BigInt SeededRng::below(const BigInt& n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  if (n <= BigInt(std::numeric_limits<unsigned long>::max())) {
    return BigInt(static_cast<unsigned long>(below(static_cast<std::uint64_t>(n.get_ui()))));
  }
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (;;) {
    BigInt x(0);
    for (std::size_t drawn = 0; drawn < bits; drawn += 64) {
      x <<= 64;
      x += BigInt(static_cast<unsigned long>(engine_()));
    }
    const std::size_t excess = (bits + 63) / 64 * 64 - bits;
    x >>= static_cast<mp_bitcnt_t>(excess);
    if (x < n) return x;
  }
}

UnitAngle SeededRng::angle(std::uint64_t max_den) {
  const std::uint64_t d = 1 + below(max_den);
  const std::uint64_t k = below(d);
  return UnitAngle(BigRational(BigInt(static_cast<unsigned long>(k)), BigInt(static_cast<unsigned long>(d))));
}

void PrecisionSpec::validate() const {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "precision m must be at least 1");
  if (points.empty() || points.size() > m) {
    throw Error(ErrorCode::InvalidArgument,
                "a spec at m = " + std::to_string(m) + " needs 1 to m sample points, got " + std::to_string(points.size()));
  }
}

UnitAngle sample_value(const ProductCharacter& x, const GroupElement& g) { return x.covering(g).evaluate(g); }

ProductCharacter random_sample_point(const AmbientPtr& ambient, const std::vector<GroupElement>& window,
                                     SeededRng& rng, std::uint64_t max_den) {
  std::map<FactorIndex, BigInt> levels;
  for (const auto& e : window) {
    for (const auto& [idx, v] : e.support()) {
      auto [it, fresh] = levels.try_emplace(idx, BigInt(1));
      it->second = lcm(it->second, v.denominator());
    }
  }
  ProductCharacter x;
  for (const auto& [idx, level] : levels) {
    const FactorSignature& sig = ambient->factor(idx);
    switch (sig.kind()) {
      case FactorSignature::Kind::Rationals: {
        LadderCharacter g = LadderCharacter::generated_by(BigRational(1), rng.angle(max_den));
        if (level > 1) g = g.extended(level, rng.below(level));
        x.set_component(idx, std::move(g));
        break;
      }
      case FactorSignature::Kind::Prufer: {
        LadderCharacter g = LadderCharacter::pinned();
        if (level > 1) g = g.extended(level, rng.below(level));
        x.set_component(idx, LevelCharacter(sig.parameter(), std::move(g)));
        break;
      }
      case FactorSignature::Kind::Cyclic: {
        const BigInt& n = sig.parameter();
        x.set_component(idx, LadderCharacter::pinned().extended(n, rng.below(n)));
        break;
      }
    }
  }
  return x;
}

PrecisionSpec random_precision_spec(const AmbientPtr& ambient, const std::vector<GroupElement>& window,
                                    std::size_t m, SeededRng& rng, std::uint64_t max_den) {
  PrecisionSpec spec{m, {}};
  for (std::size_t j = 0; j < m; ++j) spec.points.push_back(random_sample_point(ambient, window, rng, max_den));
  return spec;
}

ClusterElement find_cluster_element(const ElementStream& f, const PrecisionSpec& spec, std::size_t budget) {
  spec.validate();
  const ChordThreshold threshold(BigRational(BigInt(1), BigInt(static_cast<unsigned long>(spec.m))));
  DifferenceSweep sweep(f, budget);
  std::size_t examined = 0;
  while (auto d = sweep.next()) {
    ++examined;
    if (d->duplicate) continue;
    std::vector<BigRational> distances;
    bool ok = true;
    for (const auto& x : spec.points) {
      const BigRational dist = circular_distance(sample_value(x, d->value), UnitAngle());
      if (!threshold.admits(dist, true)) {
        ok = false;
        break;
      }
      distances.push_back(dist);
    }
    if (ok) return ClusterElement{std::move(*d), std::move(distances), examined};
  }
  throw Error(ErrorCode::BudgetExhausted, "no cluster element at m = " + std::to_string(spec.m) + " among " +
                                              std::to_string(examined) + " differences of the first " +
                                              std::to_string(budget) + " elements");
}

std::vector<GroupElement> empirical_cluster_set(const ElementStream& f, std::size_t m, std::size_t tuples,
                                                std::uint64_t seed, std::size_t budget, std::size_t window) {
  const auto win = f.prefix(window);
  std::vector<GroupElement> out;
  std::set<GroupElement> seen;
  for (std::size_t t = 0; t < tuples; ++t) {
    SeededRng rng{seed, kEmpiricalTag, t};
    const PrecisionSpec spec = random_precision_spec(f.ambient(), win, m, rng);
    try {
      auto hit = find_cluster_element(f, spec, budget);
      if (seen.insert(hit.difference.value).second) out.push_back(hit.difference.value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExhausted) throw;
    }
  }
  return out;
}

void ConstructionConfig::validate() const {
  if (rounds < 1) throw Error(ErrorCode::InvalidConfig, "rounds must be at least 1");
  if (q < 2) throw Error(ErrorCode::InvalidConfig, "q must be at least 2");
  const Budgets& b = budgets;
  if (b.stream < 1 || b.probe < 1 || b.threshold < 1 || b.cluster < 1 || b.window < 1 || b.grid < 1 ||
      b.oracle_cap < 1 || b.independence < 1) {
    throw Error(ErrorCode::InvalidConfig, "every budget must be at least 1");
  }
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Case1Bounded: return "case1-q-bounded";
    case Branch::Case1Unbounded: return "case1-q-unbounded";
    case Branch::Case1Prufer: return "case1-cpinf";
    case Branch::Case2: return "case2";
    case Branch::Case2Order2: return "case2-order2";
  }
  return "unknown";
}

Branch parse_branch(const std::string& text) {
  for (Branch b : {Branch::Case1Bounded, Branch::Case1Unbounded, Branch::Case1Prufer, Branch::Case2,
                   Branch::Case2Order2}) {
    if (to_string(b) == text) return b;
  }
  throw Error(ErrorCode::ParseError, "unknown branch '" + text + "'");
}

IndependenceResult independence_check(const std::vector<GroupElement>& s, std::size_t max_subset, std::uint64_t cap) {
  std::vector<BigInt> orders;
  for (const auto& x : s) {
    const ElementOrder o = element_order(x);
    if (o.infinite()) throw Error(ErrorCode::InvalidArgument, x.to_string() + " has infinite order");
    orders.push_back(*o.finite);
  }
  IndependenceResult out;
  if (s.empty()) return out;
  std::vector<std::pair<std::size_t, BigInt>> chosen;
  auto dfs = [&](auto&& self, std::size_t start, const GroupElement& sum) -> bool {
    for (std::size_t i = start; i < s.size(); ++i) {
      for (BigInt c = 1; c < orders[i]; ++c) {
        if (++out.combinations > cap) {
          throw Error(ErrorCode::SearchBudget, "independence check exceeds " + std::to_string(cap) + " combinations");
        }
        const GroupElement next = sum + s[i].scaled(c);
        chosen.emplace_back(i, c);
        if (next.is_zero()) {
          out.independent = false;
          out.counterexample = chosen;
          return true;
        }
        if (chosen.size() < max_subset && self(self, i + 1, next)) return true;
        chosen.pop_back();
      }
    }
    return false;
  };
  dfs(dfs, 0, GroupElement(s.front().ambient()));
  return out;
}

std::vector<GroupElement> ConstructionResult::e() const {
  std::vector<GroupElement> out;
  for (const auto& p : pairs) out.push_back(p.gamma);
  return out;
}

std::vector<GroupElement> ConstructionResult::e_prime() const {
  std::vector<GroupElement> out;
  for (const auto& p : pairs) out.push_back(p.gamma_prime);
  return out;
}

namespace {

struct ImageStats {
  std::map<FactorIndex, std::set<BigRational>> half, full;
  std::set<FactorIndex> active_half, active_full;
  std::map<FactorIndex, ElementOrder> order_half, order_full;
};

bool order_less(const ElementOrder& a, const ElementOrder& b) {
  if (a.infinite()) return false;
  if (b.infinite()) return true;
  return *a.finite < *b.finite;
}

ImageStats image_stats(const std::vector<GroupElement>& window) {
  ImageStats st;
  const std::size_t half = window.size() / 2;
  for (std::size_t k = 0; k < window.size(); ++k) {
    for (const auto& [idx, v] : window[k].support()) {
      const ElementOrder o = coordinate_order(window[k].ambient()->factor(idx), v);
      auto bump = [&](std::map<FactorIndex, ElementOrder>& m) {
        auto [it, fresh] = m.try_emplace(idx, o);
        if (!fresh && order_less(it->second, o)) it->second = o;
      };
      st.full[idx].insert(v);
      st.active_full.insert(idx);
      bump(st.order_full);
      if (k < half) {
        st.half[idx].insert(v);
        st.active_half.insert(idx);
        bump(st.order_half);
      }
    }
  }
  return st;
}

bool looks_infinite(std::size_t full, std::size_t half, std::size_t threshold) { return full >= threshold && full > half; }

bool image_looks_infinite(const ElementStream& f, FactorIndex alpha, const Budgets& b) {
  const auto st = image_stats(f.prefix(b.probe));
  auto count = [&](const std::map<FactorIndex, std::set<BigRational>>& m) {
    auto it = m.find(alpha);
    return it == m.end() ? std::size_t{0} : it->second.size();
  };
  return looks_infinite(count(st.full), count(st.half), b.threshold);
}

bool coordinates_equal(const FactorSignature& sig, const BigRational& a, const BigRational& b) {
  return sig.is_torsion() ? reduce_mod_one(a) == reduce_mod_one(b) : a == b;
}

std::string join_indices(const std::set<FactorIndex>& s) {
  std::string out;
  for (auto i : s) out += (out.empty() ? "" : ",") + std::to_string(i);
  return out;
}

}  // namespace

ProbeReport probe_stream(const ElementStream& f, const Budgets& budgets, const BigInt& q_cap) {
  const auto window = f.prefix(budgets.probe);
  const auto st = image_stats(window);
  ProbeReport r;
  for (const auto& [idx, values] : st.full) {
    auto h = st.half.find(idx);
    const std::size_t half = h == st.half.end() ? 0 : h->second.size();
    if (looks_infinite(values.size(), half, budgets.threshold)) r.infinite_images.push_back(idx);
  }
  r.many_indices = looks_infinite(st.active_full.size(), st.active_half.size(), budgets.threshold);

  std::set<BigInt> candidates;
  bool any_infinite = false;
  for (const auto& [idx, o] : st.order_full) {
    if (o.infinite()) {
      any_infinite = true;
    } else if (*o.finite >= 2) {
      candidates.insert(*o.finite);
    }
  }
  if (any_infinite) candidates.insert(q_cap);
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    std::size_t full = 0, half = 0;
    for (const auto& [idx, o] : st.order_full) full += o.at_least(*it) ? 1 : 0;
    for (const auto& [idx, o] : st.order_half) half += o.at_least(*it) ? 1 : 0;
    if (looks_infinite(full, half, budgets.threshold)) {
      r.q = *it;
      break;
    }
  }
  r.summary = std::to_string(window.size()) + " elements probed; " + std::to_string(r.infinite_images.size()) +
              " infinite-looking images; " + std::to_string(st.active_full.size()) + " active indices (" +
              std::to_string(st.active_half.size()) + " in the first half)";
  if (r.q) r.summary += "; largest q with I_q growing: " + to_string(*r.q);
  return r;
}

Construction::Construction(ElementStream f, Branch branch, ConstructionConfig config, BigInt q,
                           std::optional<FactorIndex> alpha)
    : f_(std::move(f)), branch_(branch), config_(std::move(config)), q_(std::move(q)), alpha_(alpha) {
  config_.validate();
  provenance_["branch"] = to_string(branch_);
  provenance_["seed"] = std::to_string(config_.seed);
  provenance_["q"] = to_string(q_);
  provenance_["stream"] = f_.description();
  provenance_["cluster_specs"] = "stage n searches at m = n with n seeded sample points";
  provenance_["pullback"] = "first element of F in stream order";
  provenance_["targets"] = "seeded rationals k/d with d <= " + std::to_string(kTargetDenominator);
  if (alpha_) provenance_["alpha"] = std::to_string(*alpha_);
}

Construction Construction::case1_q(ElementStream f, FactorIndex alpha, const ConstructionConfig& config) {
  config.validate();
  const FactorSignature& sig = f.ambient()->factor(alpha);
  if (sig.kind() != FactorSignature::Kind::Rationals) {
    throw Error(ErrorCode::InvalidArgument, "index " + std::to_string(alpha) + " is " + sig.describe() + ", not Q");
  }
  if (config.q < 3) throw Error(ErrorCode::InvalidConfig, "case 1 needs q >= 3");
  if (!config.assert_infinite && !image_looks_infinite(f, alpha, config.budgets)) {
    throw Error(ErrorCode::ImageFinite, "the image of F at index " + std::to_string(alpha) + " does not look infinite");
  }
  const auto window = f.prefix(config.budgets.probe);
  BigInt lcm_half(1), lcm_full(1);
  for (std::size_t k = 0; k < window.size(); ++k) {
    const BigInt d = project(window[k], alpha).denominator();
    lcm_full = lcm(lcm_full, d);
    if (k < window.size() / 2) lcm_half = lcm(lcm_half, d);
  }
  bool bounded = lcm_half == lcm_full;
  if (config.branch == BranchChoice::Bounded) bounded = true;
  if (config.branch == BranchChoice::Unbounded) bounded = false;
  Construction c(std::move(f), bounded ? Branch::Case1Bounded : Branch::Case1Unbounded, config, config.q, alpha);
  c.provenance_["construction"] = "case Q";
  if (bounded) {
    c.scale_ = lcm_full;
    c.provenance_["scale"] = to_string(lcm_full);
    c.provenance_["denominators"] = "lcm of the probe window is stable at " + to_string(lcm_full);
  } else {
    c.provenance_["denominators"] = "lcm of the probe window keeps growing";
  }
  c.run_rounds();
  return c;
}

Construction Construction::case1_cpinf(ElementStream f, FactorIndex alpha, const ConstructionConfig& config) {
  config.validate();
  const FactorSignature& sig = f.ambient()->factor(alpha);
  if (sig.kind() != FactorSignature::Kind::Prufer) {
    throw Error(ErrorCode::InvalidArgument,
                "index " + std::to_string(alpha) + " is " + sig.describe() + ", not a Prufer factor");
  }
  if (config.q < 3) throw Error(ErrorCode::InvalidConfig, "case 1 needs q >= 3");
  if (!config.assert_infinite && !image_looks_infinite(f, alpha, config.budgets)) {
    throw Error(ErrorCode::ImageFinite, "the image of F at index " + std::to_string(alpha) + " does not look infinite");
  }
  Construction c(std::move(f), Branch::Case1Prufer, config, config.q, alpha);
  c.provenance_["construction"] = "case C(p^inf)";
  c.run_rounds();
  return c;
}

Construction Construction::case2(ElementStream f, const BigInt& q, const ConstructionConfig& config) {
  config.validate();
  if (q < 2) throw Error(ErrorCode::InvalidConfig, "case 2 needs q >= 2");
  Construction c(std::move(f), q == 2 ? Branch::Case2Order2 : Branch::Case2, config, q, std::nullopt);
  c.provenance_["construction"] = "many factors";
  c.provenance_["beta_choice"] = "smallest admissible index";
  if (q == 2) {
    for (const auto& e : c.prefix()) {
      for (const auto& [idx, v] : e.support()) {
        if (coordinate_order(e.ambient()->factor(idx), v).at_least(BigInt(3))) c.excluded_.insert(idx);
      }
    }
    c.provenance_["excluded"] = "{" + join_indices(c.excluded_) + "}";
  }
  c.run_rounds();
  return c;
}

Construction Construction::dispatch(ElementStream f, const ConstructionConfig& config) {
  config.validate();
  const ProbeReport probe = probe_stream(f, config.budgets, config.q);
  auto case1 = [&](FactorIndex alpha, const std::string& why) {
    const FactorSignature& sig = f.ambient()->factor(alpha);
    ConstructionConfig cfg = config;
    if (config.case_choice == CaseChoice::Case1) cfg.assert_infinite = true;
    Construction c = [&] {
      switch (sig.kind()) {
        case FactorSignature::Kind::Rationals: return case1_q(f, alpha, cfg);
        case FactorSignature::Kind::Prufer: return case1_cpinf(f, alpha, cfg);
        case FactorSignature::Kind::Cyclic: break;
      }
      throw Error(ErrorCode::ImageFinite, "index " + std::to_string(alpha) + " is " + sig.describe() +
                                              " and has a finite image");
    }();
    c.provenance_["dispatch"] = why;
    c.provenance_["probe"] = probe.summary;
    return c;
  };
  auto case2_run = [&](const BigInt& q, const std::string& why) {
    Construction c = case2(f, q, config);
    c.provenance_["dispatch"] = why;
    c.provenance_["probe"] = probe.summary;
    return c;
  };

  switch (config.case_choice) {
    case CaseChoice::Case1: {
      if (config.alpha) return case1(*config.alpha, "case 1 asserted by the config");
      if (!probe.infinite_images.empty()) return case1(probe.infinite_images.front(), "case 1 asserted by the config");
      throw Error(ErrorCode::ProbeInconclusive, "case 1 asserted but no index given and none looks infinite");
    }
    case CaseChoice::Case2:
      return case2_run(probe.q ? *probe.q : config.q, "case 2 asserted by the config");
    case CaseChoice::Auto:
      break;
  }
  if (config.alpha) {
    const bool listed = std::find(probe.infinite_images.begin(), probe.infinite_images.end(), *config.alpha) !=
                        probe.infinite_images.end();
    if (listed || config.assert_infinite) return case1(*config.alpha, "configured index has an infinite image");
  }
  if (!probe.infinite_images.empty()) {
    return case1(probe.infinite_images.front(),
                 "index " + std::to_string(probe.infinite_images.front()) + " has an infinite-looking image");
  }
  if (probe.many_indices && probe.q) {
    return case2_run(*probe.q, "all images look finite; I_q grows for q = " + to_string(*probe.q));
  }
  throw Error(ErrorCode::ProbeInconclusive, probe.summary);
}

void Construction::run_rounds() {
  for (std::size_t n = 0; n < config_.rounds; ++n) advance();
}

const std::vector<GroupElement>& Construction::prefix() const {
  if (!prefix_) prefix_ = std::make_shared<const std::vector<GroupElement>>(f_.prefix(config_.budgets.stream));
  return *prefix_;
}

PrecisionSpec Construction::stage_spec(std::size_t n) const {
  SeededRng rng{config_.seed, kStageSpecTag, n};
  return random_precision_spec(f_.ambient(), f_.prefix(config_.budgets.window), n, rng);
}

std::vector<GroupElement> Construction::sample_window() const {
  auto w = f_.prefix(config_.budgets.window);
  for (const auto& p : pairs_) {
    w.push_back(p.gamma);
    w.push_back(p.chi);
    w.push_back(p.gamma_prime);
  }
  return w;
}

void Construction::advance() {
  const PrecisionSpec spec = stage_spec(pairs_.size() + 1);
  const ClusterElement hit = find_cluster_element(f_, spec, config_.budgets.cluster);
  advance_with(hit.difference);
}

void Construction::advance_with(const Difference& chi) {
  if (chi.value.is_zero()) throw Error(ErrorCode::InvalidArgument, "cluster element must be nonzero");
  switch (branch_) {
    case Branch::Case1Bounded: stage_bounded(chi); break;
    case Branch::Case1Unbounded:
    case Branch::Case1Prufer: stage_ladder(chi); break;
    case Branch::Case2:
    case Branch::Case2Order2: stage_case2(chi); break;
  }
}

void Construction::push_pair(std::size_t gamma_index, const Difference& chi, std::optional<FactorIndex> beta) {
  GroupElement gamma = *f_.at(gamma_index);
  GroupElement prime = gamma + chi.value;
  pairs_.push_back(PairRecord{gamma_index, chi.plus_index, chi.minus_index, std::move(gamma), chi.value,
                              std::move(prime), beta});
}

namespace {

// Condition (b) of a new pair (λ, λ + s) against every earlier pair.
bool condition_b(const FactorSignature& sig, FactorIndex alpha, const std::vector<PairRecord>& pairs,
                 const BigRational& lambda, const BigRational& s) {
  const BigRational lp = lambda + s;
  for (const auto& p : pairs) {
    const BigRational l2 = project(p.gamma, alpha);
    const BigRational lp2 = l2 + project(p.chi, alpha);
    if (coordinates_equal(sig, lambda, l2) || coordinates_equal(sig, lambda, lp2) ||
        coordinates_equal(sig, lp, lp2) || coordinates_equal(sig, lp, l2)) {
      return false;
    }
  }
  return true;
}

}  // namespace

void Construction::stage_bounded(const Difference& chi) {
  const FactorIndex alpha = *alpha_;
  const FactorSignature& sig = f_.ambient()->factor(alpha);
  const BigRational scale(*scale_);
  const BigRational s = project(chi.value, alpha);
  const std::size_t n = pairs_.size() + 1;
  if (!(s * scale).is_integer()) {
    throw Error(ErrorCode::InvalidArgument, "shift " + s.to_string() + " leaves (1/" + to_string(*scale_) + ")Z", n);
  }
  BigRational last, last_prime;
  if (!pairs_.empty()) {
    last = (project(pairs_.back().gamma, alpha) * scale).abs();
    last_prime = ((project(pairs_.back().gamma, alpha) + project(pairs_.back().chi, alpha)) * scale).abs();
  }
  const BigRational q(q_);
  bool b_failed = false;
  for (std::size_t k = 0; k < config_.budgets.stream; ++k) {
    auto g = f_.at(k);
    if (!g) break;
    const BigRational lambda = project(*g, alpha);
    const BigRational v = lambda * scale;
    if (!v.is_integer()) {
      throw Error(ErrorCode::InvalidArgument,
                  "element " + std::to_string(k) + " leaves (1/" + to_string(*scale_) + ")Z at index " +
                      std::to_string(alpha),
                  n);
    }
    const BigRational vp = (lambda + s) * scale;
    if (v.is_zero() || vp.is_zero()) continue;
    if (!pairs_.empty() && (v.abs() < q * last || vp.abs() < q * last_prime)) continue;
    if (!condition_b(sig, alpha, pairs_, lambda, s)) {
      b_failed = true;
      continue;
    }
    push_pair(k, chi, std::nullopt);
    return;
  }
  if (b_failed) {
    throw Error(ErrorCode::ConditionBViolated,
                "every Hadamard candidate at stage " + std::to_string(n) + " repeats an earlier value", n);
  }
  throw Error(ErrorCode::BudgetExhausted,
              "no element with ratio >= " + to_string(q_) + " for V and V' at stage " + std::to_string(n), n);
}

void Construction::stage_ladder(const Difference& chi) {
  const FactorIndex alpha = *alpha_;
  const FactorSignature& sig = f_.ambient()->factor(alpha);
  const BigRational s = project(chi.value, alpha);
  const std::size_t n = pairs_.size() + 1;
  const BigInt coverage = lcm(level_, s.denominator());
  bool b_failed = false;
  for (std::size_t k = 0; k < config_.budgets.stream; ++k) {
    auto g = f_.at(k);
    if (!g) break;
    const BigRational lambda = project(*g, alpha);
    if (lambda.denominator() <= q_ * coverage) continue;
    if (!condition_b(sig, alpha, pairs_, lambda, s)) {
      b_failed = true;
      continue;
    }
    push_pair(k, chi, std::nullopt);
    level_ = lcm(coverage, lambda.denominator());
    return;
  }
  if (b_failed) {
    throw Error(ErrorCode::ConditionBViolated, "every ladder candidate at stage " + std::to_string(n) +
                                                   " repeats an earlier value",
                n);
  }
  throw Error(ErrorCode::BudgetExhausted,
              "no element with D(lambda) > " + to_string(q_ * coverage) + " at stage " + std::to_string(n), n);
}

void Construction::stage_case2(const Difference& chi) {
  const std::size_t n = pairs_.size() + 1;
  if (!candidates_) {
    std::map<FactorIndex, std::size_t> c;
    const auto& pre = prefix();
    for (std::size_t k = 0; k < pre.size(); ++k) {
      for (const auto& [idx, v] : pre[k].support()) {
        if (excluded_.contains(idx) || c.contains(idx)) continue;
        const ElementOrder o = coordinate_order(f_.ambient()->factor(idx), v);
        const bool ok = branch_ == Branch::Case2Order2 ? (!o.infinite() && *o.finite == 2) : o.at_least(q_);
        if (ok) c.emplace(idx, k);
      }
    }
    candidates_ = std::make_shared<const std::map<FactorIndex, std::size_t>>(std::move(c));
  }
  if (candidates_->empty()) {
    throw Error(ErrorCode::OrderTooSmall, "no coordinate of order >= " + to_string(q_) + " among the first " +
                                              std::to_string(prefix().size()) + " elements",
                n);
  }
  for (const auto& [beta, pos] : *candidates_) {
    if (!project(chi.value, beta).is_zero()) continue;
    bool ok = true;
    for (const auto& p : pairs_) {
      if (p.beta == beta || !project(p.chi, beta).is_zero() || !project(p.gamma, beta).is_zero()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    push_pair(pos, chi, beta);
    return;
  }
  throw Error(ErrorCode::BudgetExhausted, "no admissible index at stage " + std::to_string(n), n);
}

ConstructionResult Construction::result() const {
  ConstructionResult r;
  r.ambient = f_.ambient();
  r.stream_description = f_.description();
  r.branch = branch_;
  r.alpha = alpha_;
  r.q = q_;
  r.scale = scale_;
  r.excluded.assign(excluded_.begin(), excluded_.end());
  r.pairs = pairs_;
  r.provenance = provenance_;
  r.provenance["rounds"] = std::to_string(pairs_.size());

  for (std::size_t n = 1; n <= pairs_.size(); ++n) {
    SeededRng rng{config_.seed, kTargetTag, n};
    r.targets.push_back(rng.angle(kTargetDenominator));
    r.targets_prime.push_back(rng.angle(kTargetDenominator));
  }
  std::vector<Point> e, ep;
  for (const auto& p : pairs_) {
    e.emplace_back(p.gamma);
    ep.emplace_back(p.gamma_prime);
  }

  switch (branch_) {
    case Branch::Case1Bounded: {
      const FactorIndex alpha = *alpha_;
      const BigRational scale(*scale_);
      std::vector<BigInt> v, vp;
      for (const auto& p : pairs_) {
        v.push_back((project(p.gamma, alpha) * scale).numerator());
        vp.push_back(((project(p.gamma, alpha) + project(p.chi, alpha)) * scale).numerator());
      }
      const BigRational q(q_);
      const auto c = hadamard_interpolate(v, r.targets, q);
      const auto cp = hadamard_interpolate(vp, r.targets_prime, q);
      r.bound_turns = hadamard_bound(q);
      r.strict = false;
      r.certificate = make_certificate(TorusPoint{std::get<TorusPoint>(c.witness).x, *scale_}, alpha, r.bound_turns,
                                       false, e, r.targets);
      r.certificate_prime = make_certificate(TorusPoint{std::get<TorusPoint>(cp.witness).x, *scale_}, alpha,
                                             r.bound_turns, false, ep, r.targets_prime);
      break;
    }
    case Branch::Case1Unbounded:
    case Branch::Case1Prufer: {
      const FactorIndex alpha = *alpha_;
      std::vector<BigRational> lambdas, shifts;
      for (const auto& p : pairs_) {
        lambdas.push_back(project(p.gamma, alpha));
        shifts.push_back(project(p.chi, alpha));
      }
      const auto li = ladder_interpolate(lambdas, shifts, r.targets_prime, r.targets, q_);
      auto wrap = [&](const LadderCharacter& g) -> Witness {
        if (branch_ == Branch::Case1Prufer) return LevelCharacter(f_.ambient()->factor(alpha).parameter(), g);
        return g;
      };
      r.bound_turns = epsilon_q(q_);
      r.strict = true;
      r.certificate = make_certificate(wrap(li.unshifted.character), alpha, r.bound_turns, true, e, r.targets);
      r.certificate_prime =
          make_certificate(wrap(li.shifted.character), alpha, r.bound_turns, true, ep, r.targets_prime);
      std::string levels;
      for (const auto& rung : li.shifted.character.rungs()) levels += (levels.empty() ? "" : ",") + to_string(rung.level);
      r.provenance["levels"] = levels;
      break;
    }
    case Branch::Case2:
    case Branch::Case2Order2: {
      std::vector<ProductPoint> pts, pts_prime;
      std::set<FactorIndex> earlier;
      for (const auto& p : pairs_) {
        const FactorIndex beta = *p.beta;
        pts.push_back(ProductPoint{beta, project(p.gamma, beta), restrict_to(p.gamma, earlier)});
        pts_prime.push_back(ProductPoint{beta, project(p.gamma_prime, beta), restrict_to(p.gamma_prime, earlier)});
        earlier.insert(beta);
      }
      const auto pi = product_interpolate(r.ambient, pts, r.targets, q_);
      const auto pip = product_interpolate(r.ambient, pts_prime, r.targets_prime, q_);
      r.bound_turns = epsilon_q(q_);
      r.strict = false;
      r.certificate = make_certificate(pi.character, std::nullopt, r.bound_turns, false, e, r.targets);
      r.certificate_prime = make_certificate(pip.character, std::nullopt, r.bound_turns, false, ep, r.targets_prime);
      if (branch_ == Branch::Case2Order2) {
        std::vector<GroupElement> pe, pep;
        for (const auto& p : pairs_) {
          pe.push_back(restrict_to(p.gamma, earlier));
          pep.push_back(restrict_to(p.gamma_prime, earlier));
        }
        r.independence = independence_check(pe, config_.budgets.independence);
        r.independence_prime = independence_check(pep, config_.budgets.independence);
      }
      break;
    }
  }
  return r;
}

ConstructionResult build_case1_q(const ElementStream& f, FactorIndex alpha, const ConstructionConfig& config) {
  return Construction::case1_q(f, alpha, config).result();
}

ConstructionResult build_case1_cpinf(const ElementStream& f, FactorIndex alpha, const ConstructionConfig& config) {
  return Construction::case1_cpinf(f, alpha, config).result();
}

ConstructionResult build_case2(const ElementStream& f, const BigInt& q, const ConstructionConfig& config) {
  return Construction::case2(f, q, config).result();
}

ConstructionResult build_pair(const ElementStream& f, const ConstructionConfig& config) {
  return Construction::dispatch(f, config).result();
}

std::vector<std::string> check_structure(const ConstructionResult& r, const ElementStream& f) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& s) { bad.push_back(s); };
  const auto e = r.e();
  const auto ep = r.e_prime();
  for (std::size_t n = 0; n < r.pairs.size(); ++n) {
    const auto& p = r.pairs[n];
    const std::string tag = "pair " + std::to_string(n + 1) + ": ";
    auto g = f.at(p.gamma_index);
    auto plus = f.at(p.plus_index);
    auto minus = f.at(p.minus_index);
    if (!g || *g != p.gamma) fail(tag + "gamma is not F[" + std::to_string(p.gamma_index) + "]");
    if (!plus || !minus || *plus - *minus != p.chi) fail(tag + "chi is not the recorded difference of F");
    if (p.chi.is_zero()) fail(tag + "chi is zero");
    if (p.gamma + p.chi != p.gamma_prime) fail(tag + "gamma' differs from gamma + chi");
  }
  const std::set<GroupElement> se(e.begin(), e.end()), sep(ep.begin(), ep.end());
  if (se.size() != e.size()) fail("E has repeated terms");
  if (sep.size() != ep.size()) fail("E' has repeated terms");
  for (const auto& x : se) {
    if (sep.contains(x)) fail("E and E' share " + x.to_string());
  }

  const bool case1 = r.branch == Branch::Case1Bounded || r.branch == Branch::Case1Unbounded ||
                     r.branch == Branch::Case1Prufer;
  if (case1) {
    const FactorIndex alpha = *r.alpha;
    const FactorSignature& sig = r.ambient->factor(alpha);
    for (std::size_t n = 0; n < r.pairs.size(); ++n) {
      for (std::size_t k = 0; k < r.pairs.size(); ++k) {
        if (n == k) continue;
        const BigRational ln = project(r.pairs[n].gamma, alpha), lk = project(r.pairs[k].gamma, alpha);
        const BigRational lpn = ln + project(r.pairs[n].chi, alpha), lpk = lk + project(r.pairs[k].chi, alpha);
        if (coordinates_equal(sig, ln, lk) || coordinates_equal(sig, ln, lpk) || coordinates_equal(sig, lpn, lpk)) {
          fail("condition (b) fails for pairs " + std::to_string(n + 1) + ", " + std::to_string(k + 1));
        }
      }
    }
  } else {
    for (std::size_t n = 0; n < r.pairs.size(); ++n) {
      const auto& pn = r.pairs[n];
      if (!pn.beta) {
        fail("pair " + std::to_string(n + 1) + " has no index beta");
        continue;
      }
      const FactorIndex beta = *pn.beta;
      for (std::size_t m = 0; m <= n; ++m) {
        if (!project(r.pairs[m].chi, beta).is_zero()) {
          fail("chi_" + std::to_string(m + 1) + " is nonzero at beta_" + std::to_string(n + 1));
        }
        if (m < n && !project(r.pairs[m].gamma, beta).is_zero()) {
          fail("lambda_" + std::to_string(m + 1) + " is nonzero at beta_" + std::to_string(n + 1));
        }
      }
      const ElementOrder o = coordinate_order(r.ambient->factor(beta), project(pn.gamma, beta));
      if (!o.at_least(r.q)) fail("order at beta_" + std::to_string(n + 1) + " is below q");
      if (r.branch == Branch::Case2Order2) {
        if (o.infinite() || *o.finite != 2) fail("order at beta_" + std::to_string(n + 1) + " is not 2");
        if (std::find(r.excluded.begin(), r.excluded.end(), beta) != r.excluded.end()) {
          fail("beta_" + std::to_string(n + 1) + " lies in the excluded set");
        }
      }
    }
    if (r.branch == Branch::Case2Order2) {
      if (!r.independence || !r.independence->independent) fail("Pi(E) is not independent");
      if (!r.independence_prime || !r.independence_prime->independent) fail("Pi(E') is not independent");
    }
  }

  auto check_cert = [&](const KroneckerCertificate& c, const std::vector<GroupElement>& pts,
                        const std::vector<UnitAngle>& targets, const std::string& name) {
    for (const auto& v : verify_certificate(c)) fail(name + " entry " + std::to_string(v.entry) + ": " + v.reason);
    if (c.entries.size() != pts.size()) {
      fail(name + " covers " + std::to_string(c.entries.size()) + " of " + std::to_string(pts.size()) + " elements");
      return;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto* g = std::get_if<GroupElement>(&c.entries[i].point);
      if (g == nullptr || *g != pts[i] || c.entries[i].target != targets[i]) {
        fail(name + " entry " + std::to_string(i) + " does not match the pair");
      }
    }
    if (c.bound_turns != r.bound_turns) fail(name + " bound differs from the result bound");
  };
  check_cert(r.certificate, e, r.targets, "certificate(E)");
  check_cert(r.certificate_prime, ep, r.targets_prime, "certificate(E')");
  if (r.bound_turns > BigRational(1, 4)) fail("bound " + r.bound_turns.to_string() + " exceeds 1/4 turn");
  return bad;
}

WitnessReport non_i0_witness(const Construction& construction, const PrecisionSpec& spec, std::size_t budget,
                             bool allow_extend, std::optional<Construction>* extended) {
  spec.validate();
  const ChordThreshold threshold(BigRational(BigInt(1), BigInt(static_cast<unsigned long>(spec.m))));
  WitnessReport rep;
  rep.spec = spec;
  rep.chord_bound = threshold.chord();

  auto test = [&](const PairRecord& p) {
    rep.values.clear();
    rep.values_prime.clear();
    rep.distances.clear();
    bool ok = true;
    for (const auto& x : spec.points) {
      const ProductCharacter xc = x.covering(p.gamma).covering(p.gamma_prime);
      const UnitAngle a = xc.evaluate(p.gamma), b = xc.evaluate(p.gamma_prime);
      const BigRational d = circular_distance(a, b);
      rep.values.push_back(a);
      rep.values_prime.push_back(b);
      rep.distances.push_back(d);
      ok = ok && threshold.admits(d, true);
    }
    return ok;
  };

  const auto& pairs = construction.pairs();
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    ++rep.pairs_scanned;
    if (test(pairs[n])) {
      rep.index = n + 1;
      rep.within = true;
      rep.pair = pairs[n];
      return rep;
    }
  }
  if (!allow_extend) {
    throw Error(ErrorCode::BudgetExhausted,
                "none of the " + std::to_string(pairs.size()) + " pairs is within chord 1/" + std::to_string(spec.m));
  }
  const ClusterElement hit = find_cluster_element(construction.stream(), spec, budget);
  Construction next = construction;
  next.advance_with(hit.difference);
  const PairRecord& p = next.pairs().back();
  rep.index = next.size();
  rep.within = test(p);
  rep.extended = true;
  rep.pair = p;
  if (!rep.within) {
    throw Error(ErrorCode::BudgetExhausted, "the new stage missed the chord bound", rep.index);
  }
  if (extended != nullptr) *extended = std::move(next);
  return rep;
}

}  // namespace kronpair
