#include "nhlab/rational.hpp"

#include <stdexcept>

namespace nhlab {

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_class(text));
    return Rational(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  q_ /= o.q_;
  return *this;
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

long padic_valuation(const mpz_class& v, long p) {
  if (v == 0) throw std::domain_error("padic_valuation of zero");
  mpz_class t = v;
  long k = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
    ++k;
  }
  return k;
}

const Rational& Valuation::value() const {
  if (kind_ == Kind::infinite) throw std::domain_error("value() of an infinite valuation");
  return value_;
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return Valuation::infinite();
  const Rational s = a.value_ + b.value_;
  if (a.is_bound() || b.is_bound()) return Valuation::at_least(s);
  return Valuation(s);
}

Valuation Valuation::min(const Valuation& a, const Valuation& b) {
  if (a.is_infinite()) return b;
  if (b.is_infinite()) return a;
  if (a.value_ < b.value_) return a;
  if (b.value_ < a.value_) return b;
  return a.is_bound() ? a : b;
}

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.kind_ != b.kind_) return false;
  return a.is_infinite() || a.value_ == b.value_;
}

std::string Valuation::str() const {
  switch (kind_) {
    case Kind::infinite: return "inf";
    case Kind::at_least: return ">=" + value_.str();
    default: return value_.str();
  }
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

}  // namespace nhlab
