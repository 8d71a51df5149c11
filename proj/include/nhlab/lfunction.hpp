#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/character.hpp"
#include "nhlab/cyclotomic.hpp"
#include "nhlab/polygon.hpp"

namespace nhlab {

/// Default worker count: $NHLAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned default_threads();

struct LOptions {
  unsigned threads = 0;                      // 0: default_threads()
  std::uint64_t max_points = 1000000000ULL;  // enumeration guard per character sum
};

/// Counts of x in X(F_{q^k}) by the residue c(x) in Z/p^n.
std::vector<std::uint64_t> residue_counts(const ASWCharacter& f, int k, const LOptions& opt = {});

/// S_k = sum over X(F_{q^k}) of zeta^{c(x)}. Throws InfeasibleError if q^k
/// exceeds the guard.
CyclotomicInteger character_sum(const ASWCharacter& f, int k, const LOptions& opt = {});

struct LPolynomial {
  CycloParams ring;
  mpz_class q;
  long degree = 0;
  std::vector<CyclotomicInteger> coeffs;  // coeffs[0] = 1, size degree + 1
  std::vector<CyclotomicInteger> sums;    // S_1, S_2, ... that were used
  std::string character;
  std::vector<std::string> warnings;

  std::string str() const;
};

/// exp(sum_k S_k s^k / k) truncated at s^{terms}; coefficients must be
/// integral (MathCheckFailed otherwise).
std::vector<CyclotomicInteger> exp_of_power_sums(const CycloParams& ring, const std::vector<CyclotomicInteger>& sums);

/// Reduces, checks the ramification guard, computes S_1..S_D (and S_{D+1}
/// when feasible) and assembles L. D is the Hodge-polygon length.
LPolynomial l_polynomial(const ASWCharacter& f, const LOptions& opt = {});

/// The same L-function from the Euler product over closed points of degree
/// <= D. Independent route used as a cross-check; feasible for small D.
std::vector<CyclotomicInteger> l_polynomial_euler(const ASWCharacter& f, long D, const LOptions& opt = {});

/// q-adic Newton polygon of L.
SlopePolygon newton_polygon(const LPolynomial& L);

/// Reduces f and checks the ramification guard.
ASWCharacter prepare(const ASWCharacter& f);

/// The character on A^1 whose coordinates are the polar parts of the f_i at
/// P, written in u = 1/t_P.
ASWCharacter localize(const ASWCharacter& f, const Place& P);

struct LocalTouching {
  Place place;
  SlopePolygon np;
  SlopePolygon hp;
  bool touching = false;
  bool np_above_hp = false;
};

struct TouchingReport {
  Rational r;
  SlopePolygon np;
  SlopePolygon hp;
  bool global = false;
  bool np_above_hp = false;
  std::vector<LocalTouching> locals;
  bool theorem_consistent = false;
};

/// Terminal-point comparison of NP^{<r} and HP^{<r} globally and at each
/// P in S (via localize), with the biconditional evaluated.
TouchingReport check_touching(const ASWCharacter& f, const Rational& r, const LOptions& opt = {});

struct PointCount {
  int k = 0;
  mpz_class from_zeta;
  mpz_class direct;
};

struct ZetaCoverResult {
  std::vector<mpz_class> product;  // prod_j L(j f, s), integer coefficients
  std::vector<LPolynomial> factors;
  std::vector<long> multipliers;
  std::vector<PointCount> counts;
};

/// Numerator of the zeta function of the smooth projective cover
/// F(y) - y = f over P^1, as prod over j = 1..p^n-1 of L(j f), with point
/// counts over F_{q^k}, k <= max_k, checked against brute force.
ZetaCoverResult zeta_cover(const ASWCharacter& f, int max_k = 2, const LOptions& opt = {});

/// Points on the projective cover over F_{q^k} counted by brute force over
/// the cover equation (one point above each ramified place).
mpz_class cover_point_count(const ASWCharacter& f, int k, const LOptions& opt = {});

}  // namespace nhlab
