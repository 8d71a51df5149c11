#include "nhlab/dwork.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <algorithm>
#include <sstream>

#include "nhlab/errors.hpp"

namespace nhlab::dwork {

namespace {

using u128 = unsigned __int128;

mpz_class mpz_from_u64(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

std::uint64_t u64_from_mpz(const mpz_class& v) {
  std::uint64_t r = 0;
  std::size_t count = 0;
  mpz_export(&r, &count, 1, sizeof(r), 0, 0, v.get_mpz_t());
  return count ? r : 0;
}

mpz_class reduce(const mpz_class& v, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

// pi-adic valuation of sum a_i zeta^i with a_i in [0, p^c).
Valuation residue_valuation(const PadicRing& R, const std::vector<mpz_class>& a) {
  const long p = R.p;
  long k = -1;
  for (const auto& x : a) {
    if (x == 0) continue;
    const long v = padic_valuation(x, p);
    if (k < 0 || v < k) k = v;
  }
  if (k < 0) return Valuation::at_least(R.N);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  // Reduction of a / p^k in F_p[t]; its order of vanishing at t = 1 is the
  // remaining valuation, since pi = zeta - 1 and (p) = (pi)^{p-1}.
  std::vector<long> b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_class q = a[i] / pk;
    b[i] = mpz_fdiv_ui(q.get_mpz_t(), static_cast<unsigned long>(p));
  }
  long r = 0;
  for (;;) {
    long at_one = 0;
    for (const long x : b) at_one = (at_one + x) % p;
    if (at_one != 0) break;
    // b <- b / (t - 1), synthetic division from the top.
    std::vector<long> q(b.size() > 1 ? b.size() - 1 : 0);
    long carry = 0;
    for (long i = static_cast<long>(b.size()) - 1; i >= 1; --i) {
      carry = (carry + b[i]) % p;
      q[i - 1] = carry;
    }
    b.swap(q);
    ++r;
    if (b.empty()) throw MathCheckFailed("residue_valuation: nonzero residue vanished");
  }
  const long v = (p - 1) * k + r;
  if (v >= R.N) return Valuation::at_least(R.N);
  return Valuation(v);
}

}  // namespace

const PadicRing& padic_ring(long p, int N) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::unique_ptr<PadicRing>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, N}];
  if (!slot) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("padic ring: p must be an odd prime");
    if (N < 1) throw std::invalid_argument("padic ring: precision must be positive");
    auto R = std::make_unique<PadicRing>();
    R->p = p;
    R->N = N;
    R->c = static_cast<int>((N + p - 2) / (p - 1));
    R->params = CycloParams(p, 1);
    mpz_ui_pow_ui(R->modulus.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(R->c));
    if (mpz_sizeinbase(R->modulus.get_mpz_t(), 2) <= 64) R->modulus64 = u64_from_mpz(R->modulus);
    slot = std::move(R);
  }
  return *slot;
}

PadicScalar::PadicScalar(const PadicRing& ring, std::vector<mpz_class> coeffs) : ring_(&ring), a_(std::move(coeffs)) {
  if (static_cast<long>(a_.size()) != ring.p - 1) throw std::invalid_argument("PadicScalar: need p - 1 coefficients");
  for (auto& x : a_) x = reduce(x, ring.modulus);
}

PadicScalar PadicScalar::from_cyclotomic(const PadicRing& ring, const CyclotomicInteger& c) {
  if (!(c.params() == ring.params)) throw std::invalid_argument("PadicScalar: ring mismatch");
  return PadicScalar(ring, c.coeffs());
}

PadicScalar PadicScalar::zeta(const PadicRing& ring) {
  return from_cyclotomic(ring, CyclotomicInteger::zeta(ring.params));
}

bool PadicScalar::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

CyclotomicInteger PadicScalar::to_cyclotomic() const { return CyclotomicInteger(ring_->params, a_); }

PadicScalar PadicScalar::operator-() const {
  PadicScalar r(*this);
  for (auto& x : r.a_)
    if (x != 0) x = ring_->modulus - x;
  return r;
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  PadicScalar r(a);
  for (std::size_t i = 0; i < r.a_.size(); ++i) {
    r.a_[i] += b.a_[i];
    if (r.a_[i] >= a.ring_->modulus) r.a_[i] -= a.ring_->modulus;
  }
  return r;
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
  PadicScalar r(a);
  for (std::size_t i = 0; i < r.a_.size(); ++i) {
    r.a_[i] -= b.a_[i];
    if (r.a_[i] < 0) r.a_[i] += a.ring_->modulus;
  }
  return r;
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  // Product modulo t^p - 1, then t^{p-1} = -(1 + ... + t^{p-2}).
  const long p = a.ring_->p;
  std::vector<mpz_class> cyc(p);
  for (long i = 0; i < p - 1; ++i) {
    if (a.a_[i] == 0) continue;
    for (long j = 0; j < p - 1; ++j) {
      if (b.a_[j] == 0) continue;
      mpz_addmul(cyc[(i + j) % p].get_mpz_t(), a.a_[i].get_mpz_t(), b.a_[j].get_mpz_t());
    }
  }
  std::vector<mpz_class> out(p - 1);
  for (long i = 0; i < p - 1; ++i) out[i] = cyc[i] - cyc[p - 1];
  return PadicScalar(*a.ring_, std::move(out));
}

PadicScalar PadicScalar::pow(unsigned long e) const {
  PadicScalar r = scalar_like(*this, 1);
  PadicScalar b = *this;
  while (e) {
    if (e & 1UL) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::string PadicScalar::str() const { return to_cyclotomic().str() + " mod " + ring_->modulus.get_str(); }

Valuation valuation(const PadicScalar& x) { return residue_valuation(x.ring(), x.coeffs()); }

PadicScalar scalar_like(const PadicScalar& like, const mpz_class& v) {
  std::vector<mpz_class> a(like.ring().p - 1);
  a[0] = v;
  return PadicScalar(like.ring(), std::move(a));
}

bool fast_path_available(const PadicRing& ring) { return ring.modulus64 != 0 && ring.p - 1 <= FastPadic::kMaxPhi; }

FastPadic FastPadic::from(const PadicScalar& x) {
  if (!fast_path_available(x.ring())) throw std::invalid_argument("FastPadic: ring does not fit 64-bit residues");
  FastPadic r(x.ring());
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) r.a_[i] = u64_from_mpz(x.coeffs()[i]);
  return r;
}

PadicScalar FastPadic::to_reference() const {
  std::vector<mpz_class> a(ring_->p - 1);
  for (long i = 0; i < ring_->p - 1; ++i) a[i] = mpz_from_u64(a_[i]);
  return PadicScalar(*ring_, std::move(a));
}

FastPadic FastPadic::operator-() const {
  FastPadic r(*ring_);
  for (long i = 0; i < ring_->p - 1; ++i) r.a_[i] = a_[i] ? ring_->modulus64 - a_[i] : 0;
  return r;
}

FastPadic operator+(const FastPadic& a, const FastPadic& b) {
  FastPadic r(*a.ring_);
  const std::uint64_t m = a.ring_->modulus64;
  for (long i = 0; i < a.ring_->p - 1; ++i) {
    const u128 s = static_cast<u128>(a.a_[i]) + b.a_[i];
    r.a_[i] = static_cast<std::uint64_t>(s >= m ? s - m : s);
  }
  return r;
}

FastPadic operator-(const FastPadic& a, const FastPadic& b) {
  FastPadic r(*a.ring_);
  const std::uint64_t m = a.ring_->modulus64;
  for (long i = 0; i < a.ring_->p - 1; ++i)
    r.a_[i] = a.a_[i] >= b.a_[i] ? a.a_[i] - b.a_[i] : static_cast<std::uint64_t>(static_cast<u128>(a.a_[i]) + m - b.a_[i]);
  return r;
}

FastPadic operator*(const FastPadic& a, const FastPadic& b) {
  const long p = a.ring_->p;
  const std::uint64_t m = a.ring_->modulus64;
  std::array<u128, FastPadic::kMaxPhi + 1> cyc{};
  if (m < (std::uint64_t{1} << 59)) {
    // Products stay below 2^118; at most 16 of them per slot.
    for (long i = 0; i < p - 1; ++i) {
      if (!a.a_[i]) continue;
      for (long j = 0; j < p - 1; ++j) {
        long k = i + j;
        if (k >= p) k -= p;
        cyc[k] += static_cast<u128>(a.a_[i]) * b.a_[j];
      }
    }
    for (long k = 0; k < p; ++k) cyc[k] %= m;
  } else {
    for (long i = 0; i < p - 1; ++i) {
      if (!a.a_[i]) continue;
      for (long j = 0; j < p - 1; ++j) {
        long k = i + j;
        if (k >= p) k -= p;
        cyc[k] += static_cast<u128>(a.a_[i]) * b.a_[j] % m;
        if (cyc[k] >= m) cyc[k] -= m;
      }
    }
  }
  FastPadic r(*a.ring_);
  const u128 top = cyc[p - 1];
  for (long i = 0; i < p - 1; ++i) r.a_[i] = static_cast<std::uint64_t>(cyc[i] >= top ? cyc[i] - top : cyc[i] + m - top);
  return r;
}

Valuation valuation(const FastPadic& x) {
  const PadicScalar ref = x.to_reference();
  return residue_valuation(x.ring(), ref.coeffs());
}

FastPadic scalar_like(const FastPadic& like, const mpz_class& v) {
  return FastPadic::from(scalar_like(PadicScalar(like.ring()), v));
}

namespace {

// Inverse of a unit by Newton iteration y <- y (2 - u y) from the residue inverse.
PadicScalar unit_inverse(const PadicScalar& u) {
  const PadicRing& R = u.ring();
  const long res = u.to_cyclotomic().residue();
  if (res == 0) throw std::invalid_argument("unit_inverse: not a unit");
  mpz_class y0;
  mpz_invert(y0.get_mpz_t(), mpz_class(res).get_mpz_t(), mpz_class(R.p).get_mpz_t());
  PadicScalar y = scalar_like(u, y0);
  const PadicScalar one = scalar_like(u, 1);
  const PadicScalar two = scalar_like(u, 2);
  for (int it = 0; it < 64; ++it) {
    if (u * y == one) return y;
    y = y * (two - u * y);
  }
  throw MathCheckFailed("unit_inverse: Newton iteration did not converge");
}

mpz_class teichmuller(long a, const PadicRing& R) {
  mpz_class x = a;
  for (int i = 0; i < R.c; ++i) mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(R.p), R.modulus.get_mpz_t());
  return x;
}

template <class S>
S lift(const PadicScalar& x);
template <>
PadicScalar lift<PadicScalar>(const PadicScalar& x) {
  return x;
}
template <>
FastPadic lift<FastPadic>(const PadicScalar& x) {
  return FastPadic::from(x);
}

PadicScalar lower(const PadicScalar& x) { return x; }
PadicScalar lower(const FastPadic& x) { return x.to_reference(); }

// theta_k, k = 0..M, from e_k = pi^k / k! = (-1)^a p^{a-s} pi^b / k!' with
// k = (p-1) a + b, s = v_p(k!) <= a and k!' the prime-to-p part of k!.
template <class S>
std::vector<S> theta_series(const S& pi, long M) {
  const PadicRing& R = pi.ring();
  const long p = R.p;
  std::vector<S> pib{scalar_like(pi, 1)};
  for (long b = 1; b < p - 1; ++b) pib.push_back(pib.back() * pi);
  std::vector<S> e;
  mpz_class fact_unit = 1;
  long s = 0;
  for (long k = 0; k <= M; ++k) {
    if (k > 0) {
      long kk = k;
      while (kk % p == 0) {
        kk /= p;
        ++s;
      }
      fact_unit = reduce(fact_unit * kk, R.modulus);
    }
    const long a = k / (p - 1);
    const long b = k % (p - 1);
    if (s > a) throw MathCheckFailed("splitting function coefficient " + std::to_string(k) + " is not integral");
    mpz_class factor;
    if (a - s >= R.c) {
      factor = 0;
    } else {
      mpz_ui_pow_ui(factor.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a - s));
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), fact_unit.get_mpz_t(), R.modulus.get_mpz_t());
      factor = reduce(factor * inv, R.modulus);
      if (a % 2) factor = reduce(-factor, R.modulus);
    }
    e.push_back(scalar_like(pi, factor) * pib[b]);
  }
  // exp(pi u) exp(-pi u^p): theta_k = sum_j (-1)^j e_j e_{k - p j}.
  std::vector<S> theta(M + 1, scalar_like(pi, 0));
  for (long k = 0; k <= M; ++k) {
    S acc = scalar_like(pi, 0);
    for (long j = 0; p * j <= k; ++j) {
      const S t = e[j] * e[k - p * j];
      acc = (j % 2) ? acc - t : acc + t;
    }
    theta[k] = acc;
  }
  return theta;
}

void require_structure_input(const FFPoly& f, long p) {
  if (f.field().k != 1 || f.field().p != p) throw std::invalid_argument("frobenius structure: f must have coefficients in F_p");
  if (f.degree() < 1) throw std::invalid_argument("frobenius structure: f must be non-constant");
  if (!f.coeff(0).is_zero()) throw std::invalid_argument("frobenius structure: f must have no constant term");
  for (int j = 1; j <= f.degree(); ++j)
    if (j % p == 0 && !f.coeff(j).is_zero())
      throw std::invalid_argument("frobenius structure: exponent " + std::to_string(j) + " is divisible by p");
}

template <class S>
std::vector<S> structure_series(const FFPoly& f, const S& pi, long M) {
  const PadicRing& R = pi.ring();
  require_structure_input(f, R.p);
  const std::vector<S> theta = theta_series(pi, M);
  std::vector<S> E(M + 1, scalar_like(pi, 0));
  E[0] = scalar_like(pi, 1);
  for (int j = 1; j <= f.degree(); ++j) {
    const long a = static_cast<long>(f.coeff(j).index());
    if (a == 0) continue;
    const S tau = scalar_like(pi, teichmuller(a, R));
    // factor(u) = sum_k theta_k tau^k u^{jk}
    std::vector<std::pair<long, S>> factor;
    S tk = scalar_like(pi, 1);
    for (long k = 0; static_cast<long>(j) * k <= M; ++k) {
      factor.emplace_back(static_cast<long>(j) * k, theta[k] * tk);
      tk = tk * tau;
    }
    std::vector<S> next(M + 1, scalar_like(pi, 0));
    for (long i = 0; i <= M; ++i) {
      if (E[i] == scalar_like(pi, 0)) continue;
      for (const auto& [deg, c] : factor) {
        if (i + deg > M) break;
        next[i + deg] = next[i + deg] + E[i] * c;
      }
    }
    E.swap(next);
  }
  return E;
}

template <class S>
ValuedMatrix<S> build_matrix(const std::vector<S>& E, long size, long p) {
  const long deg = static_cast<long>(E.size()) - 1;
  if (deg < p * (size - 1))
    throw std::invalid_argument("theta_matrix: series degree " + std::to_string(deg) + " is below p (size - 1) = " +
                                std::to_string(p * (size - 1)));
  ValuedMatrix<S> m(static_cast<std::size_t>(size), scalar_like(E[0], 0));
  for (long r = 0; r < size; ++r)
    for (long k = 0; k < size; ++k) {
      const long idx = p * r - k;
      if (idx >= 0 && idx <= deg) m(r, k) = E[idx];
    }
  return m;
}

template <class S>
std::vector<S> fredholm(const ValuedMatrix<S>& m) {
  if (m.size() <= kMaxMinorSize) return fredholm_coefficients_by_minors(m);
  return fredholm_coefficients(m);
}

struct FredholmData {
  std::vector<PadicScalar> coeffs;
  std::vector<Valuation> entry_vals;  // v(E_j), j = 0 .. p size
};

template <class S>
FredholmData fredholm_with(const FFPoly& f, long size, const PadicRing& R) {
  const DworkPi pi = dwork_pi(R.p, R.N);
  const S pis = lift<S>(pi.pi);
  const auto E = structure_series(f, pis, R.p * size);
  FredholmData out;
  out.entry_vals = valuations_of(E);
  const auto C = fredholm(build_matrix(E, size, R.p));
  for (const auto& c : C) out.coeffs.push_back(lower(c));
  return out;
}

FredholmData fredholm_data(const FFPoly& f, long size, int N, Backend backend) {
  const PadicRing& R = padic_ring(f.field().p, N);
  const bool fast = backend == Backend::fast || (backend == Backend::automatic && fast_path_available(R));
  if (fast) {
    if (!fast_path_available(R)) throw std::invalid_argument("fast backend unavailable for p^c = " + R.modulus.get_str());
    return fredholm_with<FastPadic>(f, size, R);
  }
  return fredholm_with<PadicScalar>(f, size, R);
}

}  // namespace

DworkPi dwork_pi(long p, int N) {
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("dwork_pi: p must be an odd prime");
  if (N < 3) throw std::invalid_argument("dwork_pi: precision must be at least 3");
  const PadicRing& R = padic_ring(p, N);
  const CycloParams& cp = R.params;
  // u = (zeta - 1)^{p-1} / p is a unit congruent to -1 mod pi.
  const CyclotomicInteger pi0 = CyclotomicInteger::pi(cp);
  const auto u_exact = pi0.pow(static_cast<unsigned long>(p - 1)).divide_exact(mpz_class(p));
  if (!u_exact) throw MathCheckFailed("dwork_pi: p does not divide (zeta - 1)^{p-1}");
  const PadicScalar u = PadicScalar::from_cyclotomic(R, *u_exact);
  // w^{p-1} = -1/u with w = 1 mod pi; then pi_D = (zeta - 1) w.
  const PadicScalar target = -unit_inverse(u);
  mpz_class inv_pm1;
  mpz_invert(inv_pm1.get_mpz_t(), mpz_class(p - 1).get_mpz_t(), R.modulus.get_mpz_t());
  const PadicScalar k = scalar_like(u, inv_pm1);
  PadicScalar w = scalar_like(u, 1);
  const long max_iter = static_cast<long>(p - 1) * R.c + 8;
  bool converged = false;
  for (long it = 0; it < max_iter; ++it) {
    const PadicScalar err = w.pow(static_cast<unsigned long>(p - 1)) - target;
    if (err.is_zero()) {
      converged = true;
      break;
    }
    w = w - err * k;
  }
  if (!converged) throw MathCheckFailed("dwork_pi: iteration did not converge");
  DworkPi out{PadicScalar::from_cyclotomic(R, pi0) * w};
  if (!(out.pi.pow(static_cast<unsigned long>(p - 1)) + scalar_like(u, p)).is_zero())
    throw MathCheckFailed("dwork_pi: pi^{p-1} + p does not vanish");
  const Valuation diff = valuation(out.pi - PadicScalar::from_cyclotomic(R, pi0));
  if (diff.is_finite() && diff.value() < Rational(2)) throw MathCheckFailed("dwork_pi: pi is not zeta - 1 mod pi^2");
  return out;
}

GrowthCertificate compose(const GrowthCertificate& x, const GrowthCertificate& y) {
  return {x.m < y.m ? y.m : x.m, x.b + y.b};
}

bool satisfies(const TruncatedSeries& s, const GrowthCertificate& g) {
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    const Valuation v = valuation(s.coeffs[k]);
    if (!v.is_finite()) continue;
    if (v.value() < (Rational(static_cast<long>(k)) - g.b) / g.m) return false;
  }
  return true;
}

TruncatedSeries splitting_function(const DworkPi& pi, long M) {
  TruncatedSeries s;
  s.coeffs = theta_series(pi.pi, M);
  const long p = pi.pi.ring().p;
  const GrowthCertificate g{Rational(p * p, p - 1), Rational(0)};
  if (!satisfies(s, g)) throw MathCheckFailed("splitting function violates its growth certificate");
  s.cert = g;
  return s;
}

TruncatedSeries frobenius_structure(const FFPoly& f, const DworkPi& pi, long M) {
  TruncatedSeries s;
  s.coeffs = structure_series(f, pi.pi, M);
  const long p = pi.pi.ring().p;
  GrowthCertificate g{Rational(0), Rational(0)};
  for (int j = 1; j <= f.degree(); ++j)
    if (!f.coeff(j).is_zero()) g = compose(g, GrowthCertificate{Rational(j * p * p, p - 1), Rational(0)});
  if (!satisfies(s, g)) throw MathCheckFailed("Frobenius structure violates its growth certificate");
  s.cert = g;
  return s;
}

GrowthCheck check_growth(const TruncatedSeries& s, const Rational& slope) {
  GrowthCheck g;
  g.slope = slope;
  bool first = true;
  for (std::size_t k = 1; k < s.coeffs.size(); ++k) {
    const Valuation v = valuation(s.coeffs[k]);
    if (!v.is_finite()) continue;
    const Rational ratio = v.value() / Rational(static_cast<long>(k));
    if (first || ratio < g.worst_ratio) g.worst_ratio = ratio;
    first = false;
    if (v.value() < slope * Rational(static_cast<long>(k)) && g.holds) {
      g.holds = false;
      g.first_violation = static_cast<long>(k);
    }
  }
  return g;
}

ValuedMatrix<PadicScalar> theta_matrix(const TruncatedSeries& E, long size) {
  if (E.coeffs.empty()) throw std::invalid_argument("theta_matrix: empty series");
  return build_matrix(E.coeffs, size, E.coeffs[0].ring().p);
}

std::vector<PadicScalar> fredholm_series(const FFPoly& f, long size, int N, Backend backend) {
  return fredholm_data(f, size, N, backend).coeffs;
}

namespace {

// Lower bounds for v(c_k) of the truncated matrix A, A(m, k) = E_{pm - k}.
// Conjugating by diag(pi^{g k}) keeps principal minors, so v(c_k) is at least
// the sum of the k smallest row minima of v(E_{pm - k}) + g (k - m), for any g.
// E_j vanishes unless the gcd of the exponents of f divides j; entries known
// only to precision N are bounded by the splitting-function certificate.
std::vector<Rational> fredholm_lower_bounds(const FFPoly& f, const std::vector<Valuation>& entry_vals, long size,
                                            const PadicRing& R) {
  const long p = R.p;
  const long d = f.degree();
  long step = 0;
  for (int j = 1; j <= d; ++j)
    if (!f.coeff(j).is_zero()) step = std::gcd(step, static_cast<long>(j));
  const Rational cert(p - 1, d * p * p);
  std::vector<std::optional<Rational>> ell(entry_vals.size());
  for (std::size_t j = 0; j < entry_vals.size(); ++j) {
    if (static_cast<long>(j) % step != 0 || entry_vals[j].is_infinite()) continue;
    Rational v = entry_vals[j].value();
    if (entry_vals[j].is_bound()) v = std::max(v, cert * Rational(static_cast<long>(j)));
    ell[j] = v;
  }
  const Rational huge(1L << 40);
  std::vector<Rational> best(size + 1, Rational(0));
  const long grid = 8 * p;
  for (long gi = 0; gi <= grid; ++gi) {
    const Rational g(gi, grid * d);
    std::vector<Rational> rows;
    for (long m = 0; m < size; ++m) {
      std::optional<Rational> r;
      for (long k = 0; k < size && k <= p * m; ++k) {
        const auto& e = ell[p * m - k];
        if (!e) continue;
        const Rational v = *e + g * Rational(k - m);
        if (!r || v < *r) r = v;
      }
      rows.push_back(r ? *r : huge);
    }
    std::sort(rows.begin(), rows.end());
    Rational acc(0);
    for (long k = 1; k <= size; ++k) {
      acc += rows[k - 1];
      if (acc > best[k]) best[k] = acc;
    }
  }
  return best;
}

OracleRun run_once(const FFPoly& f, long size, int N, Backend backend, const Rational& cutoff_pi) {
  const PadicRing& R = padic_ring(f.field().p, N);
  OracleRun run;
  run.size = size;
  run.precision = N;
  const bool fast = backend == Backend::fast || (backend == Backend::automatic && fast_path_available(R));
  run.backend = fast ? "fast" : "reference";
  const FredholmData data = fredholm_data(f, size, N, fast ? Backend::fast : Backend::reference);
  std::vector<Valuation> vals = valuations_of(data.coeffs);
  const auto bounds = fredholm_lower_bounds(f, data.entry_vals, size, R);
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (vals[k].is_bound() && bounds[k] > vals[k].value()) vals[k] = Valuation::at_least(bounds[k]);
  run.c_np = polygon_of_valuations(vals, PolygonUnit::pi_adic(R.p, 1), cutoff_pi);
  return run;
}

struct Stable {
  OracleRun run;
  OracleRun check;
  int escalations = 0;
};

Stable stabilized_c_np(const FFPoly& f, const Rational& cutoff_pi, const OracleOptions& opt) {
  const long p = f.field().p;
  const long d = f.degree();
  long size = opt.size > 0 ? opt.size : std::max(8L, 10 * d);
  int N = opt.precision > 0 ? opt.precision : static_cast<int>(std::max(40L, 4 * (p - 1) * d));
  std::string last;
  for (int esc = 0; esc <= opt.max_escalations; ++esc) {
    try {
      OracleRun a = run_once(f, size, N, opt.backend, cutoff_pi);
      OracleRun b = run_once(f, 2 * size, N + 20, opt.backend, cutoff_pi);
      if (a.c_np == b.c_np) return {a, b, esc};
      last = "size " + std::to_string(size) + ", N " + std::to_string(N) + " gives " + a.c_np.str() + " but size " +
             std::to_string(2 * size) + ", N " + std::to_string(N + 20) + " gives " + b.c_np.str();
    } catch (const PrecisionExhausted& e) {
      last = std::string("size ") + std::to_string(size) + ", N " + std::to_string(N) + ": " + e.what();
    }
    size *= 2;
    N += 20;
  }
  throw PrecisionExhausted("Fredholm polygon did not stabilize; needs more than size " + std::to_string(size / 2) +
                           " and N " + std::to_string(N - 20) + " (" + last + ")");
}

SlopePolygon strip_slope_zero(const SlopePolygon& c_np) {
  if (c_np.empty() || !c_np.slopes()[0].is_zero())
    throw MathCheckFailed("Fredholm series has no slope-0 segment to strip: " + c_np.str());
  std::vector<Rational> rest(c_np.slopes().begin() + 1, c_np.slopes().end());
  return SlopePolygon::from_slopes(std::move(rest), c_np.unit());
}

}  // namespace

OracleResult local_np_oracle(const FFPoly& f, const Rational& r, OracleOptions opt) {
  if (r > Rational(1) || r.sign() <= 0) throw std::invalid_argument("local_np_oracle: need 0 < r <= 1");
  const long p = f.field().p;
  require_structure_input(f, p);
  const Stable st = stabilized_c_np(f, r * Rational(p - 1), opt);
  OracleResult res;
  res.run = st.run;
  res.check = st.check;
  res.escalations = st.escalations;
  res.stripped = strip_slope_zero(st.run.c_np);
  res.np = scale(res.stripped, Rational(1, p - 1), PolygonUnit::q_adic(mpz_class(p)));
  const DworkPi pi = dwork_pi(p, st.run.precision);
  const long M = p * st.run.size;
  res.theta_growth = check_growth(splitting_function(pi, M), Rational(p - 1, p * p));
  res.structure_growth = check_growth(frobenius_structure(f, pi, M), Rational(p - 1, p * f.degree()));
  return res;
}

SlopePolygon hp_delta(long p, const Rational& delta, long len) {
  std::vector<Rational> s;
  for (long k = 1; k <= len; ++k) s.push_back(Rational(k * (p - 1)) / delta);
  return SlopePolygon::from_slopes(std::move(s), PolygonUnit::pi_adic(p, 1));
}

PolygonCheck hodge_bound_check(const FFPoly& f, const Rational& e, OracleOptions opt) {
  const long p = f.field().p;
  require_structure_input(f, p);
  PolygonCheck out;
  const Stable st = stabilized_c_np(f, e * Rational(p - 1), opt);
  out.np = strip_slope_zero(st.run.c_np);
  out.hp = hp_delta(p, Rational(f.degree()), out.np.length());
  out.ok = lies_on_or_above(out.np, out.hp);
  out.diagnostic = "C-series NP " + out.np.str() + (out.ok ? " lies on or above " : " dips below ") + "HP(" +
                   std::to_string(f.degree()) + ") " + out.hp.str();
  return out;
}

PolygonCheck block_periodicity_check(const FFPoly& f, int blocks, OracleOptions opt) {
  const long p = f.field().p;
  require_structure_input(f, p);
  if (blocks < 1) throw std::invalid_argument("block_periodicity_check: blocks must be positive");
  const long d = f.degree();
  PolygonCheck out;
  // Slopes below blocks + 1/2 (q-adic) reach x = blocks * d in the generic case.
  const Rational cutoff = (Rational(blocks) + Rational(1, 2)) * Rational(p - 1);
  const Stable st = stabilized_c_np(f, cutoff, opt);
  out.np = strip_slope_zero(st.run.c_np);
  out.hp = hp_delta(p, Rational(d), std::max(out.np.length(), blocks * d));
  out.ok = true;
  std::vector<std::string> diag;
  for (long n = 1; n <= blocks; ++n) {
    for (const long x : {n * d - 1, n * d}) {
      if (x > out.np.length()) {
        out.ok = false;
        diag.push_back("x=" + std::to_string(x) + ": NP below the cutoff ends at " + std::to_string(out.np.length()));
        continue;
      }
      const Rational a = out.np.value_at(x);
      const Rational b = out.hp.value_at(x);
      diag.push_back("x=" + std::to_string(x) + ": NP " + a.str() + ", HP " + b.str());
      if (a != b) out.ok = false;
    }
  }
  for (std::size_t i = 0; i < diag.size(); ++i) out.diagnostic += (i ? "; " : "") + diag[i];
  return out;
}

}  // namespace nhlab::dwork
