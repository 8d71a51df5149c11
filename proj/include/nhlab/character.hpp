#pragma once

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/polygon.hpp"
#include "nhlab/ratfunc.hpp"

namespace nhlab {

/// Order-p^n Artin-Schreier-Witt character on P^1 minus S over F_q, given by
/// a Witt vector (f_0, ..., f_{n-1}) of rational functions. S is the set of
/// poles of the f_i; every place of S must be F_q-rational.
class ASWCharacter {
 public:
  /// Infers S from the poles. Throws std::invalid_argument for poles at
  /// non-rational places or wrong coordinate count.
  ASWCharacter(long p, int n, const FieldParams& fq, std::vector<RationalFunction> coords);

  long p() const { return p_; }
  int n() const { return n_; }
  const FieldParams& fq() const { return *fq_; }
  /// q = p^m with m = fq().k.
  mpz_class q() const;
  const std::vector<RationalFunction>& coords() const { return f_; }
  const std::vector<Place>& ramified() const { return S_; }
  bool ramified_at(const Place& P) const;

  std::string str() const;

 private:
  long p_;
  int n_;
  const FieldParams* fq_;
  std::vector<RationalFunction> f_;
  std::vector<Place> S_;
};

/// Artin-Schreier cleanup: repeatedly subtracts g^p - g to remove polar terms
/// whose exponent is divisible by p, at every place, coordinate by coordinate.
ASWCharacter reduce(const ASWCharacter& f);

/// True if no coordinate has a polar term with exponent divisible by p.
bool is_reduced(const ASWCharacter& f);

/// Throws std::invalid_argument unless f_0 has a pole at every place of S
/// (sufficient for total ramification of order p^n at each P).
void require_totally_ramified(const ASWCharacter& f);

struct LocalSwan {
  Place place;
  std::vector<long> breaks;  // d_{P,1} .. d_{P,n}
  long d = 0;                // d_{P,n}
  Rational delta;            // d / p^{n-1}
};

struct SwanData {
  long p = 0;
  int n = 0;
  mpz_class q;
  std::vector<LocalSwan> local;  // in the order of f.ramified()

  const LocalSwan& at(const Place& P) const;
};

/// Break sequences d_{P,i} = max_{j<i} p^{i-1-j} ord_P(f_j); validates
/// d_{P,i+1} >= p d_{P,i} and d_P >= p^{n-1} (MathCheckFailed otherwise).
SwanData swan_conductors(const ASWCharacter& f);

/// {1/d, 2/d, ..., (d-1)/d} in q-adic units.
SlopePolygon local_hodge_polygon(long d, const mpz_class& q);

/// Local polygons concatenated with g-1+|S| slopes 0 and as many slopes 1.
SlopePolygon global_hodge_polygon(const SwanData& swan, int genus = 0);

/// 2g - 2 + sum (d_P + 1).
long l_degree(const SwanData& swan, int genus = 0);

/// Ordinary, delta_P integral and p = 1 mod delta_P for every P.
bool check_equality_conditions(const SwanData& swan, int genus = 0, bool ordinary = true);

/// Character specification text:
///
///   # comment
///   p = 5
///   n = 1          (default 1)
///   q = 25         (default p)
///   f = x^4 + 1/x^2          (n = 1)
///   f0 = x, f1 = 0           (n >= 2; one key per line)
///
/// Expressions use x, integers, + - * / ^, parentheses and `a` for the
/// generator of F_q when q > p.
struct CharacterSpec {
  long p = 0;
  int n = 1;
  mpz_class q = 0;
  std::vector<std::string> coords;
};

CharacterSpec parse_character_spec(const std::string& text);
ASWCharacter build_character(const CharacterSpec& spec);

}  // namespace nhlab
