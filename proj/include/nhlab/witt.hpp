#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/ff.hpp"

namespace nhlab::ff {
/// Integer constant in the ring of `like` (reduced mod p).
inline FFElem scalar_like(const FFElem& like, const mpz_class& v) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(like.field().p));
  return FFElem(like.field(), r.get_si());
}
}  // namespace nhlab::ff

namespace nhlab::witt {

inline mpz_class scalar_like(const mpz_class&, const mpz_class& v) { return v; }

/// Sparse multivariate polynomial with integer coefficients.
struct IntPoly {
  using Exponents = std::vector<std::uint16_t>;
  std::map<Exponents, mpz_class> terms;
  int nvars = 0;

  std::string str() const;
};

/// Structure polynomials of p-typical Witt vectors of length n. Variables
/// 0..n-1 are the components of the first argument, n..2n-1 of the second.
struct WittStructure {
  long p = 0;
  int n = 0;
  std::vector<IntPoly> sum;
  std::vector<IntPoly> prod;
  std::vector<IntPoly> neg;  // in n variables
};

/// Derives the structure polynomials from the ghost components over Q and
/// checks integrality. Requires 1 <= n <= 4.
WittStructure build_structure(long p, int n);

/// Cached, thread-safe access to build_structure(p, n).
const WittStructure& structure(long p, int n);

/// Ghost component w_i = sum_{j<=i} p^j x_j^{p^{i-j}} over the integers.
std::vector<mpz_class> ghost(long p, std::span<const mpz_class> x);

template <class T>
T evaluate(const IntPoly& poly, std::span<const T> vars) {
  if (static_cast<int>(vars.size()) != poly.nvars) throw std::invalid_argument("evaluate: arity mismatch");
  const T& like = vars[0];
  std::vector<std::vector<T>> powers(vars.size());
  T acc = scalar_like(like, mpz_class(0));
  for (const auto& [exps, coeff] : poly.terms) {
    T term = scalar_like(like, coeff);
    for (std::size_t v = 0; v < exps.size(); ++v) {
      const unsigned e = exps[v];
      if (e == 0) continue;
      auto& pw = powers[v];
      if (pw.empty()) pw.push_back(vars[v]);
      while (pw.size() < e) pw.push_back(pw.back() * vars[v]);
      term = term * pw[e - 1];
    }
    acc = acc + term;
  }
  return acc;
}

/// Length-n Witt vector over a commutative ring T.
template <class T>
struct WittVector {
  const WittStructure* s = nullptr;
  std::vector<T> c;

  WittVector() = default;
  WittVector(const WittStructure& st, std::vector<T> comps) : s(&st), c(std::move(comps)) {
    if (static_cast<int>(c.size()) != s->n) throw std::invalid_argument("WittVector: wrong length");
  }

  friend bool operator==(const WittVector& a, const WittVector& b) { return a.s == b.s && a.c == b.c; }
};

namespace detail {
template <class T>
std::vector<T> concat(const WittVector<T>& a, const WittVector<T>& b) {
  if (a.s != b.s) throw std::invalid_argument("Witt structure mismatch");
  std::vector<T> v = a.c;
  v.insert(v.end(), b.c.begin(), b.c.end());
  return v;
}
}  // namespace detail

template <class T>
WittVector<T> witt_add(const WittVector<T>& a, const WittVector<T>& b) {
  const auto v = detail::concat(a, b);
  std::vector<T> out;
  for (const auto& poly : a.s->sum) out.push_back(evaluate<T>(poly, v));
  return WittVector<T>(*a.s, std::move(out));
}

template <class T>
WittVector<T> witt_mul(const WittVector<T>& a, const WittVector<T>& b) {
  const auto v = detail::concat(a, b);
  std::vector<T> out;
  for (const auto& poly : a.s->prod) out.push_back(evaluate<T>(poly, v));
  return WittVector<T>(*a.s, std::move(out));
}

template <class T>
WittVector<T> witt_neg(const WittVector<T>& a) {
  std::vector<T> out;
  for (const auto& poly : a.s->neg) out.push_back(evaluate<T>(poly, std::span<const T>(a.c)));
  return WittVector<T>(*a.s, std::move(out));
}

template <class T>
WittVector<T> witt_zero(const WittStructure& s, const T& like) {
  return WittVector<T>(s, std::vector<T>(s.n, scalar_like(like, mpz_class(0))));
}

template <class T>
WittVector<T> witt_one(const WittStructure& s, const T& like) {
  auto z = witt_zero(s, like);
  z.c[0] = scalar_like(like, mpz_class(1));
  return z;
}

/// j * a by double-and-add; negative j uses witt_neg.
template <class T>
WittVector<T> witt_scalar(long j, const WittVector<T>& a) {
  if (j < 0) return witt_scalar(-j, witt_neg(a));
  WittVector<T> acc = witt_zero(*a.s, a.c[0]);
  WittVector<T> base = a;
  while (j > 0) {
    if (j & 1L) acc = witt_add(acc, base);
    j >>= 1;
    if (j > 0) base = witt_add(base, base);
  }
  return acc;
}

/// Componentwise p-power map; the Witt Frobenius over a perfect field of
/// characteristic p.
WittVector<ff::FFElem> witt_frobenius(const WittVector<ff::FFElem>& a);

/// sum_{i<m} F^i(a) for a over F_{p^m}, returned over the prime field F_p.
WittVector<ff::FFElem> witt_trace(const WittVector<ff::FFElem>& a);

/// Identification W_n(F_p) -> Z/p^n: sum_i p^i tau(a_i) with tau the
/// Teichmuller lift. Components must lie in the prime field.
std::uint64_t to_residue(const WittVector<ff::FFElem>& a);

/// Teichmuller lift of a mod p to Z/p^n, as a residue in [0, p^n).
std::uint64_t teichmuller(long a, long p, int n);

}  // namespace nhlab::witt
