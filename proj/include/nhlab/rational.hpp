#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace nhlab {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator (GMP canonical form).
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  explicit Rational(const mpz_class& v) : q_(v) {}
  explicit Rational(const mpq_class& v) : q_(v) { q_.canonicalize(); }
  Rational(const mpz_class& num, const mpz_class& den);
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

  /// Parses "a", "-a" or "a/b".
  static Rational parse(const std::string& text);

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Largest integer <= this.
  mpz_class floor() const;
  double to_double() const { return q_.get_d(); }
  std::string str() const;

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// p-adic valuation of a nonzero integer.
long padic_valuation(const mpz_class& v, long p);

/// A valuation: a finite rational, the symbol Infinite (exact zero), or a
/// lower bound "at least N" produced by fixed-precision scalar models when an
/// element is zero to the working precision.
class Valuation {
 public:
  enum class Kind { finite, infinite, at_least };

  Valuation() : kind_(Kind::infinite) {}
  Valuation(const Rational& v) : kind_(Kind::finite), value_(v) {}  // NOLINT
  Valuation(long v) : kind_(Kind::finite), value_(v) {}             // NOLINT

  static Valuation infinite() { return Valuation(); }
  static Valuation at_least(const Rational& bound) {
    Valuation v(bound);
    v.kind_ = Kind::at_least;
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_infinite() const { return kind_ == Kind::infinite; }
  bool is_bound() const { return kind_ == Kind::at_least; }

  /// Finite value, or the lower bound for at_least. Throws for Infinite.
  const Rational& value() const;

  /// Sum of valuations (valuation of a product). Infinite absorbs; a bound
  /// combined with anything finite stays a bound.
  friend Valuation operator+(const Valuation& a, const Valuation& b);

  /// Smallest certain lower bound of the two (valuation of a sum is >= this).
  static Valuation min(const Valuation& a, const Valuation& b);

  friend bool operator==(const Valuation& a, const Valuation& b);
  std::string str() const;

 private:
  Kind kind_;
  Rational value_;
};

std::ostream& operator<<(std::ostream& os, const Valuation& v);

}  // namespace nhlab
