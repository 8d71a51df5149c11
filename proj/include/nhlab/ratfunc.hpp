#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/ff.hpp"

namespace nhlab {

using ff::FFElem;
using ff::FieldParams;

/// Dense univariate polynomial over F_q, low degree first, no trailing zeros.
class FFPoly {
 public:
  FFPoly() = default;
  explicit FFPoly(const FieldParams& f) : f_(&f) {}
  FFPoly(const FieldParams& f, std::vector<FFElem> coeffs);

  static FFPoly constant(const FFElem& c);
  static FFPoly x(const FieldParams& f);
  /// c * x^e
  static FFPoly monomial(const FFElem& c, int e);

  const FieldParams& field() const { return *f_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  FFElem coeff(int i) const;
  FFElem leading() const;
  const std::vector<FFElem>& coeffs() const { return c_; }

  FFPoly operator-() const;
  FFPoly& operator+=(const FFPoly& o);
  FFPoly& operator-=(const FFPoly& o);
  friend FFPoly operator+(FFPoly a, const FFPoly& b) { return a += b; }
  friend FFPoly operator-(FFPoly a, const FFPoly& b) { return a -= b; }
  friend FFPoly operator*(const FFPoly& a, const FFPoly& b);
  FFPoly scaled(const FFElem& s) const;
  FFPoly pow(unsigned e) const;

  /// Quotient and remainder; throws on division by zero.
  static std::pair<FFPoly, FFPoly> divmod(const FFPoly& a, const FFPoly& b);
  /// Monic gcd (zero if both are zero).
  static FFPoly gcd(FFPoly a, FFPoly b);
  FFPoly monic() const;

  /// Value at a point of F_q.
  FFElem operator()(const FFElem& at) const;
  /// f(t + a) as a polynomial in t.
  FFPoly shifted(const FFElem& a) const;
  /// Multiplicity of the root a (0 if f(a) != 0); f must be nonzero.
  int root_multiplicity(const FFElem& a) const;

  friend bool operator==(const FFPoly& a, const FFPoly& b) { return a.c_ == b.c_; }

  std::string str(const std::string& var = "x") const;

 private:
  void trim();
  const FieldParams* f_ = nullptr;
  std::vector<FFElem> c_;
};

/// A place of P^1 over F_q of degree one: either infinity or x = a.
struct Place {
  bool infinite = false;
  FFElem a;

  static Place at_infinity() { return Place{true, FFElem()}; }
  static Place at(const FFElem& a) { return Place{false, a}; }
  friend bool operator==(const Place& l, const Place& r) {
    return l.infinite == r.infinite && (l.infinite || l.a == r.a);
  }
  /// Infinity sorts last; finite places by enumeration index.
  friend bool operator<(const Place& l, const Place& r) {
    if (l.infinite != r.infinite) return r.infinite;
    return !l.infinite && l.a < r.a;
  }
  std::string str() const;
};

/// Element of F_q(x) in lowest terms with monic denominator.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(const FieldParams& f);
  RationalFunction(FFPoly num, FFPoly den);
  explicit RationalFunction(const FFPoly& poly);

  static RationalFunction constant(const FieldParams& f, long c);
  static RationalFunction x(const FieldParams& f);

  const FieldParams& field() const { return num_.field(); }
  const FFPoly& num() const { return num_; }
  const FFPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  RationalFunction pow(long e) const;

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Pole order at a place (0 if regular there).
  int pole_order(const Place& P) const;
  /// Finite poles (roots of the denominator) in F_q; throws std::invalid_argument
  /// if the denominator has an irreducible factor of degree > 1.
  std::vector<Place> finite_poles() const;

  /// Principal part at P written as a polynomial in the local inverse parameter
  /// u (u = x at infinity, u = 1/(x-a) at x = a), without constant term.
  FFPoly polar_part(const Place& P) const;
  /// Rational function obtained by substituting u = x (infinity) or
  /// u = 1/(x-a) into a polynomial in u.
  static RationalFunction from_local(const FFPoly& in_u, const Place& P);

  /// Value at a finite point, nullopt at a pole.
  std::optional<FFElem> eval(const FFElem& at) const;
  /// Value at infinity, nullopt at a pole.
  std::optional<FFElem> eval_at_infinity() const;

  std::string str() const;

 private:
  void normalize();
  FFPoly num_;
  FFPoly den_;
};

/// Pre-embedded evaluator of a rational function at points of an extension of
/// its coefficient field.
class ExtensionEvaluator {
 public:
  ExtensionEvaluator(const RationalFunction& f, const FieldParams& target);
  std::optional<FFElem> operator()(const FFElem& at) const;
  std::optional<FFElem> at_infinity() const;

 private:
  std::vector<FFElem> num_;
  std::vector<FFElem> den_;
  const FieldParams* target_;
};

/// Parses an expression in x over F_q: integers, x, the generator `a` of F_q
/// (only when q > p), + - * / ^ (integer exponents, possibly negative) and
/// parentheses. Throws std::invalid_argument with a position on bad input.
RationalFunction parse_rational_function(const std::string& text, const FieldParams& f);

/// Integer-valued constant in the ring of a rational function; used by generic
/// Witt-vector evaluation.
inline RationalFunction scalar_like(const RationalFunction& like, const mpz_class& v) {
  const long p = like.field().p;
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
  return RationalFunction::constant(like.field(), r.get_si());
}

}  // namespace nhlab
