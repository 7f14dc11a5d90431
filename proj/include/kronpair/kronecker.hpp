#pragma once

// Interpolation engines and the brute-force minimax oracle.
//
// Every engine returns a KroneckerCertificate: a witness character, a bound
// in turns, and per-point achieved circular distances. verify_certificate
// re-evaluates the witness at every point exactly, so a certificate never
// has to be trusted.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kronpair/characters.hpp"
#include "kronpair/exact.hpp"
#include "kronpair/groups.hpp"

namespace kronpair {

using Point = std::variant<BigRational, GroupElement>;
using Witness = std::variant<TorusPoint, LadderCharacter, LevelCharacter, ProductCharacter>;

std::string describe(const Point& p);

/// Evaluates a witness at a point. Rational points are fed straight to
/// torus/ladder/level witnesses; group elements go through π_via first.
/// Product witnesses only accept group elements.
UnitAngle witness_evaluate(const Witness& w, const std::optional<FactorIndex>& via, const Point& p);

struct CertificateEntry {
  Point point;
  UnitAngle target;
  UnitAngle value;
  BigRational distance;
};

struct KroneckerCertificate {
  Witness witness;
  std::optional<FactorIndex> via_factor;
  BigRational bound_turns;
  bool strict = false;
  std::vector<CertificateEntry> entries;

  BigRational max_distance() const;
};

/// Evaluates the witness at every point and records the distances.
KroneckerCertificate make_certificate(Witness witness, std::optional<FactorIndex> via, BigRational bound_turns,
                                      bool strict, std::span<const Point> points, std::span<const UnitAngle> targets);

struct Violation {
  std::size_t entry;
  std::string reason;
};

/// Exact re-check: witness value, recorded distance and the bound.
std::vector<Violation> verify_certificate(const KroneckerCertificate& certificate);

/// ε_q as a circular-distance bound: 1/(2q) turns (chord |e^{iπ/q} − 1|).
BigRational epsilon_q(const BigInt& q);
double epsilon_q_chord(const BigInt& q);

/// Nested-interval interpolation on a Hadamard set of nonzero integers with
/// |n_{j+1}| ≥ q·|n_j| and q > 2. Every circular error is ≤ 1/(2(q−1)).
/// Throws RatioTooSmall when q ≤ 2 or the ratio check fails.
KroneckerCertificate hadamard_interpolate(std::span<const BigInt> frequencies, std::span<const UnitAngle> targets,
                                          const BigRational& q);

/// The certified bound of hadamard_interpolate: 1/(2(q−1)) turns.
BigRational hadamard_bound(const BigRational& q);

/// Levels of the character ladder: lcm of denominators seen so far, or the
/// literal factorial ladder B_n! (tiny inputs only).
enum class LevelPolicy { Lcm, Factorial };

struct LadderStage {
  std::size_t index;            // 1-based stage number
  BigInt coverage_level;        // top level once the shift is covered
  BigInt new_level;
  BigInt z;                     // number of admissible values of g(λ)
  UnitAngle shift_value;        // g(s), fixed before the stage
  UnitAngle base;               // g(λ) for K = 0
  UnitAngle desired;            // t − g(s)
  BigInt coset_index;           // chosen value is base + k/z
  BigInt k_choice;              // K of the new rung
  BigRational distance;
};

struct LadderPass {
  LadderCharacter character = LadderCharacter::pinned();
  std::vector<LadderStage> stages;
  KroneckerCertificate certificate;
};

struct LadderInterpolation {
  LadderPass shifted;    // V′ = {λ_n + s_n}
  LadderPass unshifted;  // V = {λ_n}, same level chain, shifts dropped
};

/// Builds a pinned ladder stage by stage so that g(λ_n + s_n) is the
/// admissible value nearest t_n. Throws LadderGapViolated(n) when
/// D(λ_n) ≤ q·(current level) and NotInjective on repeated elements.
LadderInterpolation ladder_interpolate(std::span<const BigRational> lambdas, std::span<const BigRational> shifts,
                                       std::span<const UnitAngle> shifted_targets,
                                       std::span<const UnitAngle> plain_targets, const BigInt& q,
                                       LevelPolicy policy = LevelPolicy::Lcm);

LadderInterpolation ladder_interpolate(std::span<const BigRational> lambdas, std::span<const BigRational> shifts,
                                       std::span<const UnitAngle> targets, const BigInt& q,
                                       LevelPolicy policy = LevelPolicy::Lcm);

/// Incremental form of the lcm ladder, used by the constructions.
class LadderBuilder {
 public:
  LadderBuilder(BigInt q, bool apply_shift);

  /// Covers s, checks the gap for λ, then picks the rung that puts g(λ)
  /// (or g(λ + s) when shifts apply) nearest the target.
  const LadderStage& add_stage(const BigRational& lambda, const BigRational& shift, const UnitAngle& target);

  const LadderCharacter& character() const { return g_; }
  const std::vector<LadderStage>& stages() const { return stages_; }
  /// Current top level.
  const BigInt& level() const { return g_.top().level; }

 private:
  BigInt q_;
  bool apply_shift_;
  LadderCharacter g_ = LadderCharacter::pinned();
  std::vector<LadderStage> stages_;
};

/// Nearest point of the coset base + (1/z)ℤ to `desired`; ties go to the
/// smaller angle. Returns the coset index k ∈ [0, z).
BigInt nearest_coset_index(const UnitAngle& base, const BigInt& z, const UnitAngle& desired);

struct ProductPoint {
  FactorIndex index;        // β_n
  BigRational coordinate;   // π_{β_n}(λ_n), order M_n ≥ q or infinite
  GroupElement residual;    // supported on earlier β only
};

struct ProductStage {
  FactorIndex index;
  ElementOrder order;
  UnitAngle residual_value;
  UnitAngle desired;
  UnitAngle chosen;
  BigRational distance;
};

struct ProductInterpolation {
  ProductCharacter character;
  std::vector<ProductStage> stages;
  KroneckerCertificate certificate;  // on the points unit(β_n, c_n) + ρ_n
};

/// Sets the β_n component so g(c_n) is the M_n-th root coset point nearest
/// g(ρ_n)^{-1} t_n (exact hit for infinite order). The bound is 1/(2q),
/// non-strict. Throws IndexCollision on a repeated β and OrderTooSmall when
/// some M_n < q.
ProductInterpolation product_interpolate(const AmbientPtr& ambient, std::span<const ProductPoint> points,
                                         std::span<const UnitAngle> targets, const BigInt& q);

struct MinimaxResult {
  Witness witness;
  BigRational max_error;
  std::uint64_t candidates = 0;
  std::optional<bool> beats_certificate;  // set when a certified value was supplied
};

struct MinimaxOptions {
  std::uint64_t cap = std::uint64_t{1} << 24;  // maximum number of candidate witnesses
  std::optional<BigRational> certified;       // compare against this max error
};

/// Exhaustive search over x = i/N for frequencies acting on 𝕋 by n·x.
/// Ties keep the lowest grid index.
MinimaxResult minimax_torus_grid(std::span<const BigInt> frequencies, std::span<const UnitAngle> targets,
                                 std::uint64_t resolution, const MinimaxOptions& options = {});

/// A grid search cannot miss the true optimum by more than this.
BigRational torus_grid_slack(std::span<const BigInt> frequencies, std::uint64_t resolution);

/// All pinned ladders on the given level chain (levels[0] must be 1).
MinimaxResult minimax_ladder_cosets(std::span<const BigRational> points, std::span<const UnitAngle> targets,
                                    std::span<const BigInt> levels, const MinimaxOptions& options = {});

/// All characters of the finite subgroup generated by the coordinates of
/// the points (torsion factors only).
MinimaxResult minimax_product_cosets(std::span<const GroupElement> points, std::span<const UnitAngle> targets,
                                     const MinimaxOptions& options = {});

}  // namespace kronpair
