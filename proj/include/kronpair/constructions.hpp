#pragma once

// Cluster-element search, the three case constructions, the case dispatcher
// and finite-scale non-I0 witnesses.
//
// A construction is resumable: stages are added one at a time, each from a
// nonzero difference χ_n ∈ F − F. Its own χ_n comes from a cluster search at
// precision m = n with seeded sample points, so a result is reproducible
// from (F, config). Certificates are recomputed from the stages on demand.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kronpair/characters.hpp"
#include "kronpair/exact.hpp"
#include "kronpair/groups.hpp"
#include "kronpair/kronecker.hpp"

namespace kronpair {

/// mt19937_64 behind a seed_seq, with bounded draws that do not depend on
/// the standard library's distribution implementations.
class SeededRng {
 public:
  SeededRng(std::initializer_list<std::uint64_t> words);

  std::uint64_t below(std::uint64_t n);
  BigInt below(const BigInt& n);
  /// k/d with d uniform in [1, max_den] and k uniform in [0, d).
  UnitAngle angle(std::uint64_t max_den);

 private:
  std::mt19937_64 engine_;
};

/// m and the sample points x_1..x_k (1 ≤ k ≤ m). A point is a character of
/// the ambient group, trivial off its components; it is extended with K = 0
/// wherever an evaluation needs a level it does not cover yet.
struct PrecisionSpec {
  std::size_t m = 1;
  std::vector<ProductCharacter> points;

  void validate() const;
};

/// x(g) with the lazy K = 0 extension described above.
UnitAngle sample_value(const ProductCharacter& x, const GroupElement& g);

/// Random characters on the indices and levels used by `window`; every ℚ
/// component gets g(1) = k/d with d ≤ max_den, every level is then reached
/// by a uniformly random root choice.
ProductCharacter random_sample_point(const AmbientPtr& ambient, const std::vector<GroupElement>& window,
                                     SeededRng& rng, std::uint64_t max_den = 16);
PrecisionSpec random_precision_spec(const AmbientPtr& ambient, const std::vector<GroupElement>& window,
                                    std::size_t m, SeededRng& rng, std::uint64_t max_den = 16);

struct ClusterElement {
  Difference difference;
  std::vector<BigRational> distances;  // circular distance of χ(x_j) to 0
  std::size_t examined = 0;            // differences looked at
};

/// First χ ∈ (F−F)∖{0} in sweep order with 2 sin(π d_j) < 1/m at every
/// sample point, using the first `budget` elements of F.
ClusterElement find_cluster_element(const ElementStream& f, const PrecisionSpec& spec, std::size_t budget);

/// Qualifying differences collected over `tuples` random specs at precision m.
std::vector<GroupElement> empirical_cluster_set(const ElementStream& f, std::size_t m, std::size_t tuples,
                                                std::uint64_t seed, std::size_t budget, std::size_t window);

struct Budgets {
  std::size_t stream = 65536;   // elements of F scanned when selecting λ_n
  std::size_t probe = 64;       // elements of F used by the dispatch probe
  std::size_t threshold = 8;    // distinct values that make an image look infinite
  std::size_t cluster = 256;    // elements of F used by a cluster search
  std::size_t window = 32;      // elements of F that sample points are random on
  std::uint64_t grid = std::uint64_t{1} << 20;
  std::uint64_t oracle_cap = std::uint64_t{1} << 24;
  std::size_t independence = 10;  // largest subset size of the independence check
};

enum class CaseChoice { Auto, Case1, Case2 };
enum class BranchChoice { Auto, Bounded, Unbounded };

struct ConstructionConfig {
  BigInt q{3};
  std::size_t rounds = 4;
  std::uint64_t seed = 1;
  Budgets budgets;
  CaseChoice case_choice = CaseChoice::Auto;
  std::optional<FactorIndex> alpha;
  BranchChoice branch = BranchChoice::Auto;
  bool assert_infinite = false;

  void validate() const;
};

enum class Branch { Case1Bounded, Case1Unbounded, Case1Prufer, Case2, Case2Order2 };
std::string to_string(Branch b);
Branch parse_branch(const std::string& text);

struct PairRecord {
  std::size_t gamma_index;  // γ_n = F[gamma_index]
  std::size_t plus_index;   // χ_n = F[plus_index] − F[minus_index]
  std::size_t minus_index;
  GroupElement gamma;
  GroupElement chi;
  GroupElement gamma_prime;  // γ_n + χ_n
  std::optional<FactorIndex> beta;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct IndependenceResult {
  bool independent = true;
  std::vector<std::pair<std::size_t, BigInt>> counterexample;  // (position, coefficient)
  std::uint64_t combinations = 0;
};

/// No Σ c_i s_i = 0 with 0 < c_i < ord(s_i) over subsets of size ≤ max_subset.
IndependenceResult independence_check(const std::vector<GroupElement>& s, std::size_t max_subset,
                                      std::uint64_t cap = std::uint64_t{1} << 28);

struct ConstructionResult {
  AmbientPtr ambient;
  std::string stream_description;
  Branch branch;
  std::optional<FactorIndex> alpha;
  BigInt q;
  BigRational bound_turns;
  bool strict = false;
  std::optional<BigInt> scale;        // bounded branch: every π_α(F) lies in (1/scale)ℤ
  std::vector<FactorIndex> excluded;  // order-2 branch: the set J
  std::vector<PairRecord> pairs;
  std::vector<UnitAngle> targets;        // t_n on E
  std::vector<UnitAngle> targets_prime;  // t_n on E′
  KroneckerCertificate certificate;
  KroneckerCertificate certificate_prime;
  std::optional<IndependenceResult> independence;
  std::optional<IndependenceResult> independence_prime;
  std::map<std::string, std::string> provenance;

  std::vector<GroupElement> e() const;
  std::vector<GroupElement> e_prime() const;
};

class Construction {
 public:
  /// Direct entry points; each runs config.rounds stages.
  static Construction case1_q(ElementStream f, FactorIndex alpha, const ConstructionConfig& config);
  static Construction case1_cpinf(ElementStream f, FactorIndex alpha, const ConstructionConfig& config);
  static Construction case2(ElementStream f, const BigInt& q, const ConstructionConfig& config);
  /// Probes F and dispatches; ProbeInconclusive when the probe cannot decide.
  static Construction dispatch(ElementStream f, const ConstructionConfig& config);

  /// One more stage with the construction's own cluster element.
  void advance();
  /// One more stage with a given nonzero difference of F.
  void advance_with(const Difference& chi);

  std::size_t size() const { return pairs_.size(); }
  Branch branch() const { return branch_; }
  const ElementStream& stream() const { return f_; }
  const ConstructionConfig& config() const { return config_; }
  const std::vector<PairRecord>& pairs() const { return pairs_; }
  /// The spec used for the cluster search of stage n (1-based).
  PrecisionSpec stage_spec(std::size_t n) const;
  /// Elements sample points should be random on: F's window and all pairs.
  std::vector<GroupElement> sample_window() const;

  ConstructionResult result() const;

 private:
  Construction(ElementStream f, Branch branch, ConstructionConfig config, BigInt q, std::optional<FactorIndex> alpha);
  void run_rounds();
  const std::vector<GroupElement>& prefix() const;

  void stage_bounded(const Difference& chi);
  void stage_ladder(const Difference& chi);
  void stage_case2(const Difference& chi);
  void push_pair(std::size_t gamma_index, const Difference& chi, std::optional<FactorIndex> beta);

  ElementStream f_;
  Branch branch_;
  ConstructionConfig config_;
  BigInt q_;
  std::optional<FactorIndex> alpha_;
  std::map<std::string, std::string> provenance_;
  std::vector<PairRecord> pairs_;

  std::optional<BigInt> scale_;
  BigInt level_{1};
  std::set<FactorIndex> excluded_;
  mutable std::shared_ptr<const std::vector<GroupElement>> prefix_;
  mutable std::shared_ptr<const std::map<FactorIndex, std::size_t>> candidates_;  // β → first λ position
};

ConstructionResult build_case1_q(const ElementStream& f, FactorIndex alpha, const ConstructionConfig& config);
ConstructionResult build_case1_cpinf(const ElementStream& f, FactorIndex alpha, const ConstructionConfig& config);
ConstructionResult build_case2(const ElementStream& f, const BigInt& q, const ConstructionConfig& config);
ConstructionResult build_pair(const ElementStream& f, const ConstructionConfig& config);

/// What the dispatch probe saw in the first `probe` elements of F.
struct ProbeReport {
  std::vector<FactorIndex> infinite_images;  // indices whose image looks infinite
  bool many_indices = false;                 // the set of active indices keeps growing
  std::optional<BigInt> q;                   // largest q with I_q looking infinite
  std::string summary;
};
ProbeReport probe_stream(const ElementStream& f, const Budgets& budgets, const BigInt& q_cap);

/// Exact structural checks; returns one line per failed invariant.
std::vector<std::string> check_structure(const ConstructionResult& result, const ElementStream& f);

struct WitnessReport {
  PrecisionSpec spec;
  BigRational chord_bound;             // 1/m
  std::size_t index = 0;               // 1-based n
  std::vector<UnitAngle> values;       // x_j(γ_n)
  std::vector<UnitAngle> values_prime; // x_j(γ_n + χ_n)
  std::vector<BigRational> distances;
  bool within = false;
  bool extended = false;               // n is a new stage of the construction
  std::optional<PairRecord> pair;
  std::size_t pairs_scanned = 0;
};

/// Looks for n with x_j(γ_n) and x_j(γ_n + χ_n) within chord 1/m at every
/// sample point: first among the existing pairs, then (if allowed) by one
/// more stage whose χ is a cluster element for this spec. BudgetExhausted
/// when neither succeeds.
WitnessReport non_i0_witness(const Construction& construction, const PrecisionSpec& spec, std::size_t budget,
                             bool allow_extend = true, std::optional<Construction>* extended = nullptr);

}  // namespace kronpair
