#include "nhlab/cyclotomic.hpp"

#include <sstream>
#include <stdexcept>

namespace nhlab {

namespace {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// In-place reduction of a power vector modulo Phi_{p^n}:
// x^phi = -(1 + x^step + ... + x^{(p-2) step}).
void reduce_mod_phi(std::vector<mpz_class>& v, const CycloParams& cp) {
  for (long i = static_cast<long>(v.size()) - 1; i >= cp.phi; --i) {
    if (v[i] == 0) continue;
    const mpz_class c = v[i];
    v[i] = 0;
    const long base = i - cp.phi;
    for (long t = 0; t <= cp.p - 2; ++t) v[base + t * cp.step] -= c;
  }
  v.resize(cp.phi);
}

}  // namespace

CycloParams::CycloParams(long p_, int n_) : p(p_), n(n_) {
  if (!is_prime(p)) throw std::invalid_argument("CycloParams: p must be prime");
  if (n < 1) throw std::invalid_argument("CycloParams: n must be positive");
  step = 1;
  for (int i = 1; i < n; ++i) step *= p;
  order = step * p;
  phi = step * (p - 1);
}

CyclotomicInteger::CyclotomicInteger(const CycloParams& params)
    : params_(params), coeffs_(params.phi) {}

CyclotomicInteger::CyclotomicInteger(const CycloParams& params, std::vector<mpz_class> coeffs)
    : params_(params), coeffs_(std::move(coeffs)) {
  if (static_cast<long>(coeffs_.size()) != params_.phi)
    throw std::invalid_argument("CyclotomicInteger: coefficient vector must have length phi");
}

CyclotomicInteger CyclotomicInteger::from_integer(const CycloParams& params, const mpz_class& v) {
  CyclotomicInteger c(params);
  c.coeffs_[0] = v;
  return c;
}

CyclotomicInteger CyclotomicInteger::zeta(const CycloParams& params) {
  std::vector<mpz_class> pw(2);
  pw[1] = 1;
  return from_powers(params, std::move(pw));
}

CyclotomicInteger CyclotomicInteger::pi(const CycloParams& params) {
  return zeta(params) - from_integer(params, 1);
}

CyclotomicInteger CyclotomicInteger::from_residue_counts(const CycloParams& params,
                                                         std::span<const std::uint64_t> counts) {
  if (static_cast<long>(counts.size()) != params.order)
    throw std::invalid_argument("from_residue_counts: need p^n counts");
  std::vector<mpz_class> pw(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) pw[j] = static_cast<unsigned long>(counts[j]);
  return from_powers(params, std::move(pw));
}

CyclotomicInteger CyclotomicInteger::from_powers(const CycloParams& params,
                                                 std::vector<mpz_class> powers) {
  if (static_cast<long>(powers.size()) < params.phi) powers.resize(params.phi);
  reduce_mod_phi(powers, params);
  return CyclotomicInteger(params, std::move(powers));
}

bool CyclotomicInteger::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CyclotomicInteger::is_one() const { return coeffs_[0] == 1 && is_rational_integer(); }

bool CyclotomicInteger::is_rational_integer() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

mpz_class CyclotomicInteger::eval_at_one() const {
  mpz_class s = 0;
  for (const auto& c : coeffs_) s += c;
  return s;
}

long CyclotomicInteger::residue() const {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), eval_at_one().get_mpz_t(), static_cast<unsigned long>(params_.p));
  return r.get_si();
}

CyclotomicInteger CyclotomicInteger::operator-() const {
  CyclotomicInteger r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CyclotomicInteger& CyclotomicInteger::operator+=(const CyclotomicInteger& o) {
  if (!(params_ == o.params_)) throw std::invalid_argument("cyclotomic ring mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CyclotomicInteger& CyclotomicInteger::operator-=(const CyclotomicInteger& o) {
  if (!(params_ == o.params_)) throw std::invalid_argument("cyclotomic ring mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CyclotomicInteger operator*(const CyclotomicInteger& a, const CyclotomicInteger& b) {
  if (!(a.params_ == b.params_)) throw std::invalid_argument("cyclotomic ring mismatch");
  const long phi = a.params_.phi;
  std::vector<mpz_class> prod(2 * phi - 1);
  for (long i = 0; i < phi; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (long j = 0; j < phi; ++j) {
      if (b.coeffs_[j] == 0) continue;
      mpz_addmul(prod[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
  }
  return CyclotomicInteger::from_powers(a.params_, std::move(prod));
}

CyclotomicInteger CyclotomicInteger::scaled(const mpz_class& k) const {
  CyclotomicInteger r(*this);
  for (auto& c : r.coeffs_) c *= k;
  return r;
}

CyclotomicInteger CyclotomicInteger::pow(unsigned long e) const {
  CyclotomicInteger result = from_integer(params_, 1);
  CyclotomicInteger base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

std::optional<CyclotomicInteger> CyclotomicInteger::divide_exact(const mpz_class& k) const {
  if (k == 0) throw std::domain_error("divide_exact by zero");
  CyclotomicInteger r(*this);
  for (auto& c : r.coeffs_) {
    if (!mpz_divisible_p(c.get_mpz_t(), k.get_mpz_t())) return std::nullopt;
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), k.get_mpz_t());
  }
  return r;
}

// c is divisible by pi iff c(1) = 0 mod p. Writing c(1) = p m, the polynomial
// c(x) - m Phi(x) vanishes at 1 (Phi(1) = p) and has degree phi, so the
// quotient by (x - 1) is already a reduced representative.
std::optional<CyclotomicInteger> CyclotomicInteger::divide_by_pi() const {
  const mpz_class s = eval_at_one();
  if (!mpz_divisible_ui_p(s.get_mpz_t(), static_cast<unsigned long>(params_.p))) return std::nullopt;
  const mpz_class m = s / params_.p;
  const long phi = params_.phi;
  std::vector<mpz_class> a(phi + 1);
  for (long i = 0; i < phi; ++i) a[i] = coeffs_[i];
  for (long t = 0; t < params_.p; ++t) a[t * params_.step] -= m;
  std::vector<mpz_class> b(phi);
  b[phi - 1] = a[phi];
  for (long i = phi - 1; i >= 1; --i) b[i - 1] = a[i] + b[i];
  if (a[0] + b[0] != 0) throw std::logic_error("divide_by_pi: nonzero remainder");
  return CyclotomicInteger(params_, std::move(b));
}

CyclotomicInteger CyclotomicInteger::conjugate(long a) const {
  const long order = params_.order;
  long am = ((a % order) + order) % order;
  if (am % params_.p == 0) throw std::invalid_argument("conjugate: exponent must be prime to p");
  std::vector<mpz_class> pw(order);
  for (long i = 0; i < params_.phi; ++i) pw[(am * i) % order] += coeffs_[i];
  return from_powers(params_, std::move(pw));
}

bool operator==(const CyclotomicInteger& a, const CyclotomicInteger& b) {
  return a.params_ == b.params_ && a.coeffs_ == b.coeffs_;
}

std::string CyclotomicInteger::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const mpz_class& c = coeffs_[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const mpz_class mag = abs(c);
    if (i == 0) os << mag;
    else {
      if (mag != 1) os << mag << "*";
      os << "z";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

Valuation pi_valuation(const CyclotomicInteger& c) {
  if (c.is_zero()) return Valuation::infinite();
  const CycloParams& cp = c.params();
  // Strip the rational p-content first: v_pi(p) = phi.
  mpz_class g = 0;
  for (const auto& x : c.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  long k = padic_valuation(g, cp.p);
  CyclotomicInteger cur = c;
  if (k > 0) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(cp.p), static_cast<unsigned long>(k));
    cur = *cur.divide_exact(pk);
  }
  long v = k * cp.phi;
  while (auto next = cur.divide_by_pi()) {
    cur = std::move(*next);
    ++v;
  }
  return Valuation(Rational(v));
}

long log_p_exact(const mpz_class& q, long p) {
  if (q < p) throw std::invalid_argument("q must be a positive power of p");
  mpz_class t = q;
  long k = 0;
  while (t > 1) {
    if (!mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p)))
      throw std::invalid_argument("q = " + q.get_str() + " is not a power of p = " + std::to_string(p));
    t /= p;
    ++k;
  }
  return k;
}

Valuation q_valuation(const CyclotomicInteger& c, const mpz_class& q) {
  const long a = log_p_exact(q, c.params().p);
  const Valuation v = pi_valuation(c);
  if (v.is_infinite()) return v;
  return Valuation(v.value() / Rational(a * c.params().phi));
}

}  // namespace nhlab
