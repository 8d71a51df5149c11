#include "nhlab/ratfunc.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace nhlab {

FFPoly::FFPoly(const FieldParams& f, std::vector<FFElem> coeffs) : f_(&f), c_(std::move(coeffs)) { trim(); }

void FFPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

FFPoly FFPoly::constant(const FFElem& c) { return FFPoly(c.field(), {c}); }

FFPoly FFPoly::x(const FieldParams& f) { return FFPoly(f, {FFElem::zero(f), FFElem::one(f)}); }

FFPoly FFPoly::monomial(const FFElem& c, int e) {
  std::vector<FFElem> v(e + 1, FFElem::zero(c.field()));
  v[e] = c;
  return FFPoly(c.field(), std::move(v));
}

FFElem FFPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return FFElem::zero(*f_);
  return c_[i];
}

FFElem FFPoly::leading() const { return is_zero() ? FFElem::zero(*f_) : c_.back(); }

FFPoly FFPoly::operator-() const {
  FFPoly r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

FFPoly& FFPoly::operator+=(const FFPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), FFElem::zero(*f_));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

FFPoly& FFPoly::operator-=(const FFPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), FFElem::zero(*f_));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

FFPoly operator*(const FFPoly& a, const FFPoly& b) {
  if (a.is_zero() || b.is_zero()) return FFPoly(*a.f_);
  std::vector<FFElem> r(a.c_.size() + b.c_.size() - 1, FFElem::zero(*a.f_));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return FFPoly(*a.f_, std::move(r));
}

FFPoly FFPoly::scaled(const FFElem& s) const {
  FFPoly r(*this);
  for (auto& c : r.c_) c *= s;
  r.trim();
  return r;
}

FFPoly FFPoly::pow(unsigned e) const {
  FFPoly r = constant(FFElem::one(*f_));
  FFPoly b = *this;
  while (e > 0) {
    if (e & 1U) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

std::pair<FFPoly, FFPoly> FFPoly::divmod(const FFPoly& a, const FFPoly& b) {
  if (b.is_zero()) throw std::domain_error("FFPoly: division by zero polynomial");
  FFPoly rem = a;
  if (a.degree() < b.degree()) return {FFPoly(*a.f_), rem};
  std::vector<FFElem> q(a.degree() - b.degree() + 1, FFElem::zero(*a.f_));
  const FFElem inv = b.leading().inverse();
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    const int shift = rem.degree() - b.degree();
    const FFElem c = rem.leading() * inv;
    q[shift] = c;
    for (int i = 0; i <= b.degree(); ++i) rem.c_[shift + i] -= c * b.c_[i];
    rem.trim();
  }
  return {FFPoly(*a.f_, std::move(q)), rem};
}

FFPoly FFPoly::gcd(FFPoly a, FFPoly b) {
  while (!b.is_zero()) {
    FFPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

FFPoly FFPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(leading().inverse());
}

FFElem FFPoly::operator()(const FFElem& at) const {
  FFElem r = FFElem::zero(*f_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * at + *it;
  return r;
}

FFPoly FFPoly::shifted(const FFElem& a) const {
  // Horner in t: f(t + a) = (...(c_d (t + a) + c_{d-1})(t + a) + ...).
  const FFPoly lin(*f_, {a, FFElem::one(*f_)});
  FFPoly r(*f_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + constant(*it);
  return r;
}

int FFPoly::root_multiplicity(const FFElem& a) const {
  if (is_zero()) throw std::domain_error("root_multiplicity of zero polynomial");
  const FFPoly s = shifted(a);
  int m = 0;
  while (s.c_[m].is_zero()) ++m;
  return m;
}

namespace {

std::string coeff_str(const FFElem& c) {
  if (c.is_prime_field()) return std::to_string(c.coeff(0));
  // a-polynomial form for elements outside the prime field
  std::ostringstream os;
  bool first = true;
  os << "(";
  for (int i = c.field().k - 1; i >= 0; --i) {
    if (c.coeff(i) == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) os << c.coeff(i);
    else {
      if (c.coeff(i) != 1) os << c.coeff(i) << "*";
      os << "a";
      if (i > 1) os << "^" << i;
    }
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string FFPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = c_[i].is_one();
    if (i == 0 || !unit) os << coeff_str(c_[i]);
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::string Place::str() const {
  if (infinite) return "inf";
  if (a.is_prime_field()) return "x-" + std::to_string(a.coeff(0));
  return "x-" + coeff_str(a);
}

RationalFunction::RationalFunction(const FieldParams& f)
    : num_(f), den_(FFPoly::constant(FFElem::one(f))) {}

RationalFunction::RationalFunction(FFPoly num, FFPoly den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

RationalFunction::RationalFunction(const FFPoly& poly)
    : num_(poly), den_(FFPoly::constant(FFElem::one(poly.field()))) {}

RationalFunction RationalFunction::constant(const FieldParams& f, long c) {
  return RationalFunction(FFPoly::constant(FFElem(f, c)));
}

RationalFunction RationalFunction::x(const FieldParams& f) { return RationalFunction(FFPoly::x(f)); }

void RationalFunction::normalize() {
  if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
  if (num_.is_zero()) {
    den_ = FFPoly::constant(FFElem::one(den_.field()));
    return;
  }
  const FFPoly g = FFPoly::gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = FFPoly::divmod(num_, g).first;
    den_ = FFPoly::divmod(den_, g).first;
  }
  const FFElem lc = den_.leading().inverse();
  num_ = num_.scaled(lc);
  den_ = den_.scaled(lc);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r(*this);
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw std::domain_error("RationalFunction: division by zero");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

RationalFunction RationalFunction::pow(long e) const {
  if (e < 0) return constant(field(), 1) / pow(-e);
  return RationalFunction(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

int RationalFunction::pole_order(const Place& P) const {
  if (is_zero()) return 0;
  if (P.infinite) return std::max(0, num_.degree() - den_.degree());
  return den_.root_multiplicity(P.a);
}

std::vector<Place> RationalFunction::finite_poles() const {
  std::vector<Place> out;
  if (den_.degree() <= 0) return out;
  FFPoly rest = den_;
  for (const FFElem& a : ff::enumerate(field())) {
    const int m = den_.root_multiplicity(a);
    if (m == 0) continue;
    out.push_back(Place::at(a));
    const FFPoly lin(field(), {-a, FFElem::one(field())});
    rest = FFPoly::divmod(rest, lin.pow(static_cast<unsigned>(m))).first;
  }
  if (rest.degree() > 0)
    throw std::invalid_argument("pole at a place of degree > 1 (factor of " + den_.str() +
                                " without roots in the coefficient field); only rational places are supported");
  return out;
}

FFPoly RationalFunction::polar_part(const Place& P) const {
  const FieldParams& f = field();
  if (P.infinite) {
    FFPoly q = FFPoly::divmod(num_, den_).first;
    if (q.is_zero()) return q;
    std::vector<FFElem> c = q.coeffs();
    c[0] = FFElem::zero(f);
    return FFPoly(f, std::move(c));
  }
  const int e = den_.root_multiplicity(P.a);
  if (e == 0) return FFPoly(f);
  const FFPoly n = num_.shifted(P.a);
  const FFPoly d = den_.shifted(P.a);
  // d = t^e * d1 with d1(0) != 0; expand n / d1 to order t^{e-1}.
  std::vector<FFElem> d1(e, FFElem::zero(f));
  for (int i = 0; i < e; ++i) d1[i] = d.coeff(i + e);
  const FFElem inv0 = d1[0].inverse();
  std::vector<FFElem> s(e, FFElem::zero(f));
  for (int i = 0; i < e; ++i) {
    FFElem acc = n.coeff(i);
    for (int j = 1; j <= i; ++j) acc -= d1[j] * s[i - j];
    s[i] = acc * inv0;
  }
  // s_i t^{i-e} = s_i u^{e-i}
  std::vector<FFElem> u(e + 1, FFElem::zero(f));
  for (int i = 0; i < e; ++i) u[e - i] = s[i];
  return FFPoly(f, std::move(u));
}

RationalFunction RationalFunction::from_local(const FFPoly& in_u, const Place& P) {
  if (P.infinite) return RationalFunction(in_u);
  const FieldParams& f = in_u.field();
  if (in_u.is_zero()) return RationalFunction(f);
  const int E = in_u.degree();
  const FFPoly lin(f, {-P.a, FFElem::one(f)});
  FFPoly num(f);
  for (int j = 0; j <= E; ++j) num += lin.pow(static_cast<unsigned>(E - j)).scaled(in_u.coeff(j));
  return RationalFunction(num, lin.pow(static_cast<unsigned>(E)));
}

std::optional<FFElem> RationalFunction::eval(const FFElem& at) const {
  const FFElem d = den_(at);
  if (d.is_zero()) return std::nullopt;
  return num_(at) * d.inverse();
}

std::optional<FFElem> RationalFunction::eval_at_infinity() const {
  if (num_.degree() > den_.degree()) return std::nullopt;
  if (num_.degree() < den_.degree()) return FFElem::zero(field());
  return num_.leading();
}

std::string RationalFunction::str() const {
  if (den_.degree() == 0) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

ExtensionEvaluator::ExtensionEvaluator(const RationalFunction& f, const FieldParams& target) : target_(&target) {
  const ff::Embedding& emb = ff::embedding(f.field(), target);
  for (const auto& c : f.num().coeffs()) num_.push_back(emb(c));
  for (const auto& c : f.den().coeffs()) den_.push_back(emb(c));
}

std::optional<FFElem> ExtensionEvaluator::operator()(const FFElem& at) const {
  FFElem d = FFElem::zero(*target_);
  for (auto it = den_.rbegin(); it != den_.rend(); ++it) d = d * at + *it;
  if (d.is_zero()) return std::nullopt;
  FFElem n = FFElem::zero(*target_);
  for (auto it = num_.rbegin(); it != num_.rend(); ++it) n = n * at + *it;
  if (den_.size() == 1 && d.is_one()) return n;
  return n * d.inverse();
}

std::optional<FFElem> ExtensionEvaluator::at_infinity() const {
  if (num_.size() > den_.size()) return std::nullopt;
  if (num_.size() < den_.size()) return FFElem::zero(*target_);
  return num_.back();
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const FieldParams& f) : s_(text), f_(f) {}

  RationalFunction parse() {
    RationalFunction r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("cannot parse '" + s_ + "' at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  RationalFunction expr() {
    RationalFunction r = term();
    for (;;) {
      const char c = peek();
      if (c == '+') { ++pos_; r += term(); }
      else if (c == '-') { ++pos_; r -= term(); }
      else return r;
    }
  }

  RationalFunction term() {
    RationalFunction r = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') { ++pos_; r *= unary(); }
      else if (c == '/') {
        ++pos_;
        RationalFunction d = unary();
        if (d.is_zero()) fail("division by zero");
        r /= d;
      } else if (c == '(' || c == 'x' || c == 'a' || std::isdigit(static_cast<unsigned char>(c))) {
        r *= power();  // implicit multiplication, e.g. 2x or (x-1)(x+1)
      } else {
        return r;
      }
    }
  }

  RationalFunction unary() {
    const char c = peek();
    if (c == '-') { ++pos_; return -unary(); }
    if (c == '+') { ++pos_; return unary(); }
    return power();
  }

  RationalFunction power() {
    RationalFunction base = atom();
    if (peek() != '^') return base;
    ++pos_;
    const long e = exponent();
    if (e < 0 && base.is_zero()) fail("negative power of zero");
    return base.pow(e);
  }

  long exponent() {
    bool paren = false;
    if (peek() == '(') { paren = true; ++pos_; }
    bool neg = false;
    if (peek() == '-') { neg = true; ++pos_; }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
    long e = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      e = e * 10 + (s_[pos_] - '0');
      if (e > 100000) fail("exponent too large");
      ++pos_;
    }
    if (paren) {
      if (peek() != ')') fail("expected ')'");
      ++pos_;
    }
    return neg ? -e : e;
  }

  RationalFunction atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    if (c == 'x') { ++pos_; return RationalFunction::x(f_); }
    if (c == 'a') {
      if (f_.k == 1) fail("'a' denotes the generator of F_q and needs q > p");
      ++pos_;
      return RationalFunction(FFPoly::constant(FFElem::generator(f_)));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class v(s_.substr(start, pos_ - start));
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(f_.p));
      return RationalFunction::constant(f_, r.get_si());
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  std::string s_;
  const FieldParams& f_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_rational_function(const std::string& text, const FieldParams& f) {
  return Parser(text, f).parse();
}

}  // namespace nhlab
