#pragma once

// Test helpers plus small oracles written directly on mpq_class / long
// double, so they share no search code with the library.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "kronpair/characters.hpp"
#include "kronpair/exact.hpp"
#include "kronpair/groups.hpp"

namespace kptest {

using kronpair::BigInt;
using kronpair::BigRational;
using kronpair::UnitAngle;

inline BigRational R(const char* s) { return BigRational::parse(s); }
inline UnitAngle A(const char* s) { return UnitAngle::parse(s); }
inline BigInt I(long v) { return BigInt(v); }

inline kronpair::AmbientPtr integers() { return kronpair::make_ambient({{0, kronpair::FactorSignature::rationals()}}); }

inline kronpair::GroupElement Z(const kronpair::AmbientPtr& a, long v) {
  return kronpair::GroupElement::unit(a, 0, BigRational(v));
}

// Circular distance of two rationals, computed from scratch.
inline mpq_class oracle_circ(const mpq_class& a, const mpq_class& b) {
  mpq_class d = a - b;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), d.get_num_mpz_t(), d.get_den_mpz_t());
  d -= fl;
  mpq_class other = 1 - d;
  return d < other ? d : other;
}

// Min over x = i/N of max_j circ(n_j x, t_j), in long double.
inline long double oracle_grid_minimax(const std::vector<long>& freqs, const std::vector<long double>& targets,
                                       std::uint64_t n, std::uint64_t* argmin = nullptr) {
  long double best = 1.0L;
  for (std::uint64_t i = 0; i < n; ++i) {
    long double worst = 0.0L;
    for (std::size_t j = 0; j < freqs.size() && worst < best; ++j) {
      const long double v = static_cast<long double>((static_cast<__int128>(freqs[j]) * i) % static_cast<__int128>(n)) /
                            static_cast<long double>(n);
      long double d = std::fabs(v - targets[j]);
      d = std::fmin(d, 1.0L - d);
      worst = std::fmax(worst, d);
    }
    if (worst < best) {
      best = worst;
      if (argmin) *argmin = i;
    }
  }
  return best;
}

inline long double chord_of(long double turns) { return 2.0L * std::sin(3.14159265358979323846264338327950288L * turns); }

}  // namespace kptest
