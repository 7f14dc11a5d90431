// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kronpair/constructions.hpp"
#include "kronpair/error.hpp"
#include "kronpair/io.hpp"
#include "kronpair/kronecker.hpp"

using namespace kronpair;

namespace {

constexpr double kRuntimeHadamard = 60.0;
constexpr double kRuntimeLadder = 5.0;
constexpr double kRuntimeWitness = 60.0;
constexpr double kChordTolerance = 1e-12;
constexpr double kOracleChordTolerance = 1e-3;
constexpr double kOracleArgTolerance = 1e-3;
constexpr std::uint64_t kHadamardGrid = std::uint64_t{1} << 20;
constexpr std::uint64_t kSanityGrid = 1000000;
constexpr int kHadamardTrials = 100;
constexpr int kWitnessSpecs = 50;
constexpr std::size_t kMaxM = 6;
constexpr std::uint64_t kSeed = 7;
constexpr std::uint64_t kSpecSeed = 99;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::printf("criterion %d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// ---- criterion 1 ---------------------------------------------------------

struct HadamardRun {
  bool ok = true;
  std::size_t certificates = 0, contradictions = 0, violations = 0, grid_below = 0;
  BigRational worst_ratio;  // max over runs of certified max / bound
  std::string json;
};

HadamardRun hadamard_sweep(bool with_oracle) {
  HadamardRun run;
  Json all = Json::array();
  for (long q : {3L, 4L, 5L}) {
    std::vector<BigInt> freqs;
    BigInt v = 1;
    for (int j = 1; j <= 8; ++j) freqs.push_back(v *= q);
    const BigRational bound = hadamard_bound(BigRational(q));
    for (int trial = 0; trial < kHadamardTrials; ++trial) {
      SeededRng rng{kSeed, static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(trial)};
      std::vector<UnitAngle> targets;
      for (int j = 0; j < 8; ++j) targets.push_back(rng.angle(360));
      const KroneckerCertificate c = hadamard_interpolate(freqs, targets, BigRational(q));
      ++run.certificates;
      const BigRational mx = c.max_distance();
      if (!verify_certificate(c).empty() || mx > bound || c.bound_turns != bound) {
        ++run.violations;
        run.ok = false;
      }
      if (mx / bound > run.worst_ratio) run.worst_ratio = mx / bound;
      if (with_oracle) {
        MinimaxOptions opt;
        opt.certified = mx;
        const MinimaxResult m = minimax_torus_grid(freqs, targets, kHadamardGrid, opt);
        const BigRational slack = torus_grid_slack(freqs, kHadamardGrid);
        if (m.max_error - slack > mx) {
          ++run.contradictions;
          run.ok = false;
        }
        if (m.max_error <= mx) ++run.grid_below;
      }
      all.push_back(certificate_to_json(c));
    }
  }
  run.json = dump_canonical(all);
  return run;
}

Outcome criterion1(std::string& json_out) {
  const auto t0 = Clock::now();
  const HadamardRun run = hadamard_sweep(true);
  const double secs = seconds_since(t0);
  json_out = run.json;
  std::ostringstream d;
  d << run.certificates << " certificates, " << run.violations << " bound violations, " << run.contradictions
    << " oracle contradictions on a 2^20 grid, grid optimum <= certified in " << run.grid_below << "/"
    << run.certificates << ", worst max/bound " << run.worst_ratio.to_double() << ", " << secs << " s";
  return {run.ok && secs < kRuntimeHadamard, d.str()};
}

// ---- criterion 2 ---------------------------------------------------------

Outcome criterion2() {
  const auto t0 = Clock::now();
  const BigInt q(3);
  const std::vector<BigRational> lambdas{BigRational::parse("1/11"), BigRational::parse("1/239"),
                                         BigRational::parse("1/100003")};
  const std::vector<BigRational> shifts{BigRational::parse("1/2"), BigRational::parse("1/11"),
                                        BigRational::parse("3/239")};
  bool ok = true;
  std::size_t stages = 0, enumerated = 0;
  BigInt top_level;
  BigRational worst;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    SeededRng rng{kSeed, 2, trial};
    std::vector<UnitAngle> t, tp;
    for (int j = 0; j < 3; ++j) {
      t.push_back(rng.angle(360));
      tp.push_back(rng.angle(360));
    }
    const LadderInterpolation li = ladder_interpolate(lambdas, shifts, tp, t, q);
    for (const LadderPass* pass : {&li.shifted, &li.unshifted}) {
      const bool shifted = pass == &li.shifted;
      const KroneckerCertificate& c = pass->certificate;
      ok = ok && verify_certificate(c).empty() && c.strict && c.bound_turns == epsilon_q(q);
      for (const auto& e : c.entries) {
        ok = ok && e.distance < epsilon_q(q);
        if (e.distance > worst) worst = e.distance;
      }
      const auto& rungs = pass->character.rungs();
      for (std::size_t k = 0; k + 1 < rungs.size(); ++k) {
        const BigInt ratio = rungs[k + 1].level / rungs[k].level;
        ok = ok && rungs[k + 1].level % rungs[k].level == 0 && rungs[k + 1].value.scaled(ratio) == rungs[k].value;
      }
      top_level = pass->character.top().level;
      ok = ok && top_level < BigInt("1000000000000000");
      // every root choice of the stage's new rung, against the chosen one
      for (std::size_t n = 0; n < pass->stages.size(); ++n) {
        const LadderStage& st = pass->stages[n];
        const LadderCharacter before = pass->character.truncated(st.coverage_level);
        const BigInt j = st.new_level / st.coverage_level;
        const BigRational point = shifted ? lambdas[n] + shifts[n] : lambdas[n];
        const UnitAngle target = shifted ? tp[n] : t[n];
        // new rung value (a + K)/J; the point sits at N/new_level, so its
        // value is N(a + K)/J. With a = p/r this is m_K/(rJ), m_{K+1} = m_K + N r.
        const BigInt big_n = (point * BigRational(st.new_level)).numerator();
        const BigInt p = before.top().value.turns().numerator(), r = before.top().value.turns().denominator();
        const BigInt mod = r * j;
        const BigInt u = target.turns().numerator(), w = target.turns().denominator();
        const BigInt full = mod * w;
        BigInt m = (big_n * p) % mod;
        if (m < 0) m += mod;
        BigInt step = (big_n * r) % mod;
        if (step < 0) step += mod;
        BigInt best_num = full;  // distance = best_num / full
        for (BigInt k = 0; k < j; ++k) {
          BigInt diff = (m * w - u * mod) % full;
          if (diff < 0) diff += full;
          const BigInt other = full - diff;
          const BigInt& dn = diff < other ? diff : other;
          if (dn < best_num) best_num = dn;
          m += step;
          if (m >= mod) m -= mod;
          ++enumerated;
        }
        const BigRational best(best_num, full);
        ok = ok && st.distance == best;
        ++stages;
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << stages << " stages over 20 seeded target sets, " << enumerated << " root choices enumerated, top level "
    << to_string(top_level) << ", worst distance " << worst.to_string() << " < 1/6, " << secs << " s";
  return {ok && secs < kRuntimeLadder, d.str()};
}

// ---- criterion 3 ---------------------------------------------------------

Outcome criterion3() {
  const double c2 = epsilon_q_chord(BigInt(2));
  const double c3 = epsilon_q_chord(BigInt(3));
  const ChordThreshold one{BigRational(1)};
  const bool ok = epsilon_q(BigInt(2)) == BigRational::parse("1/4") &&
                  std::fabs(c2 - std::sqrt(2.0)) < kChordTolerance &&
                  epsilon_q(BigInt(3)) == BigRational::parse("1/6") && one.exact_turns() &&
                  *one.exact_turns() == epsilon_q(BigInt(3)) && std::fabs(c3 - 1.0) < kChordTolerance;
  std::ostringstream d;
  d.precision(17);
  d << "eps_2 = 1/4 turn, chord " << c2 << "; eps_3 = 1/6 turn, chord exactly 1 via the rational threshold";
  return {ok, d.str()};
}

// ---- criteria 4, 5, 6 ----------------------------------------------------

struct Family {
  std::string name;
  ElementStream stream;
  ConstructionConfig config;
};

std::vector<Family> families() {
  ConstructionConfig base;
  base.seed = kSeed;
  base.rounds = 4;
  std::vector<Family> out;
  auto z = make_ambient({{0, FactorSignature::rationals()}});
  out.push_back({"Z, {3^j}", geometric_stream(z, 0, BigInt(3)), base});
  auto z3 = make_ambient({}, FactorSignature::cyclic(BigInt(3)));
  out.push_back({"sum Z(3), generators", unit_generator_stream(z3), base});
  auto z2 = make_ambient({}, FactorSignature::cyclic(BigInt(2)));
  out.push_back({"sum Z(2), generators", unit_generator_stream(z2), base});
  return out;
}

struct WitnessSweep {
  std::size_t found = 0, attempted = 0, extended = 0;
  std::vector<std::string> structure;  // failures, tagged
  std::size_t results_checked = 0;
  std::string json;
  std::string failures;
};

WitnessSweep witness_sweep() {
  WitnessSweep s;
  Json all = Json::array();
  for (const Family& fam : families()) {
    const Construction c = Construction::dispatch(fam.stream, fam.config);
    const ConstructionResult base = c.result();
    auto check = [&](const ConstructionResult& r, const std::string& tag) {
      ++s.results_checked;
      for (const auto& f : check_structure(r, fam.stream)) s.structure.push_back(fam.name + " " + tag + ": " + f);
      if (r.bound_turns > BigRational::parse("1/4")) s.structure.push_back(fam.name + " " + tag + ": bound above 1/4");
    };
    check(base, "base");
    Json fam_json{{"family", fam.name}, {"result", result_to_json(base, Json(nullptr))}, {"witnesses", Json::array()}};
    for (int i = 0; i < kWitnessSpecs; ++i) {
      SeededRng rng{kSpecSeed, kSeed, static_cast<std::uint64_t>(i)};
      const std::size_t m = 1 + rng.below(kMaxM);
      const PrecisionSpec spec = random_precision_spec(c.stream().ambient(), c.sample_window(), m, rng);
      ++s.attempted;
      try {
        std::optional<Construction> next;
        const WitnessReport rep = non_i0_witness(c, spec, c.config().budgets.cluster, true, &next);
        const ChordThreshold th(rep.chord_bound);
        bool all_within = rep.within;
        for (const auto& d : rep.distances) all_within = all_within && th.admits(d, true);
        if (all_within) {
          ++s.found;
        } else {
          s.failures += fam.name + " spec " + std::to_string(i) + " not within; ";
        }
        if (next) {
          ++s.extended;
          check(next->result(), "extended by spec " + std::to_string(i));
        }
        fam_json["witnesses"].push_back(report_to_json(rep));
      } catch (const Error& e) {
        s.failures += fam.name + " spec " + std::to_string(i) + ": " + e.what() + "; ";
        fam_json["witnesses"].push_back(error_to_json(e));
      }
    }
    all.push_back(fam_json);
  }
  s.json = dump_canonical(all);
  return s;
}

Outcome criterion6() {
  auto z2 = make_ambient({}, FactorSignature::cyclic(BigInt(2)));
  const auto f = unit_generator_stream(z2);
  ConstructionConfig cfg;
  cfg.seed = kSeed;
  cfg.rounds = 12;
  cfg.budgets.independence = 10;
  const ConstructionResult r = build_pair(f, cfg);
  bool ok = r.branch == Branch::Case2Order2 && r.bound_turns == BigRational::parse("1/4") && !r.strict &&
            std::fabs(chord_approx(r.bound_turns) - std::sqrt(2.0)) < kChordTolerance &&
            verify_certificate(r.certificate).empty() && verify_certificate(r.certificate_prime).empty();
  ok = ok && r.independence && r.independence->independent && r.independence_prime &&
       r.independence_prime->independent;
  // recheck directly on the projections
  std::set<FactorIndex> betas;
  for (const auto& p : r.pairs) betas.insert(*p.beta);
  std::vector<GroupElement> pe, pep;
  for (const auto& p : r.pairs) {
    pe.push_back(restrict_to(p.gamma, betas));
    pep.push_back(restrict_to(p.gamma_prime, betas));
  }
  const auto a = independence_check(pe, 10), b = independence_check(pep, 10);
  ok = ok && a.independent && b.independent && check_structure(r, f).empty();
  std::ostringstream d;
  d << r.pairs.size() << " pairs, " << a.combinations << " + " << b.combinations
    << " combinations checked up to size 10, weak bound " << r.bound_turns.to_string() << " turn (chord "
    << chord_approx(r.bound_turns) << ")";
  return {ok, d.str()};
}

// ---- criterion 7 ---------------------------------------------------------

Outcome criterion7() {
  const std::vector<BigInt> f{BigInt(1), BigInt(2)};
  const std::vector<UnitAngle> t{UnitAngle(), UnitAngle::parse("1/2")};
  const MinimaxResult m = minimax_torus_grid(f, t, kSanityGrid);
  const double chord = chord_approx(m.max_error);
  const double x = std::get<TorusPoint>(m.witness).x.turns().to_double();
  const bool ok = std::fabs(chord - 1.0) <= kOracleChordTolerance && std::fabs(x - 1.0 / 6.0) <= kOracleArgTolerance;
  std::ostringstream d;
  d.precision(9);
  d << "min-max chord " << chord << " at x = " << x << " turn on a 10^6 grid";
  return {ok, d.str()};
}

}  // namespace

int main() {
  try {
    std::string hadamard_json;
    report(1, "Hadamard interpolation bound", criterion1(hadamard_json));
    report(2, "ladder construction", criterion2());
    report(3, "epsilon_q constants", criterion3());

    const auto t0 = Clock::now();
    const WitnessSweep sweep = witness_sweep();
    const double secs = seconds_since(t0);
    {
      std::ostringstream d;
      d << sweep.found << "/" << sweep.attempted << " specs with m <= 6 gave a witness, " << sweep.extended
        << " by extension, " << secs << " s";
      if (!sweep.failures.empty()) d << "; " << sweep.failures;
      report(4, "non-I0 witnesses", {sweep.found == sweep.attempted && secs < kRuntimeWitness, d.str()});
    }
    {
      std::ostringstream d;
      d << sweep.results_checked << " results checked, " << sweep.structure.size() << " failures";
      for (const auto& s : sweep.structure) d << "; " << s;
      report(5, "structural invariants", {sweep.structure.empty(), d.str()});
    }
    report(6, "order-2 branch", criterion6());
    report(7, "oracle sanity", criterion7());

    const bool same1 = hadamard_sweep(false).json == hadamard_json;
    const bool same4 = witness_sweep().json == sweep.json;
    std::ostringstream d;
    d << "criterion 1 JSON " << (same1 ? "identical" : "differs") << " (" << hadamard_json.size()
      << " bytes), criterion 4 JSON " << (same4 ? "identical" : "differs") << " (" << sweep.json.size() << " bytes)";
    report(8, "determinism", {same1 && same4, d.str()});
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 100;
  }
  return failures;
}
