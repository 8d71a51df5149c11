#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/cyclotomic.hpp"
#include "nhlab/errors.hpp"
#include "nhlab/polygon.hpp"
#include "nhlab/rational.hpp"

namespace nhlab {

// Scalar models. A model T provides +, -, *, unary -, and, found by ADL:
//   Valuation valuation(const T&)
//   T scalar_like(const T& like, const mpz_class& v)
//   PolygonUnit polygon_unit(const T& like)
// Optional: local_quotient(a, b) (q with q b = a when v(a) >= v(b); enables
// elimination) and frobenius(x) (enables semilinear iteration).

inline Valuation valuation(const CyclotomicInteger& c) { return pi_valuation(c); }
inline CyclotomicInteger scalar_like(const CyclotomicInteger& like, const mpz_class& v) {
  return CyclotomicInteger::from_integer(like.params(), v);
}
inline PolygonUnit polygon_unit(const CyclotomicInteger& like) {
  return PolygonUnit::pi_adic(like.params().p, like.params().n);
}

/// Exact rational integer with its p-adic valuation (uniformizer p).
struct PadicInteger {
  mpz_class v;
  long p = 0;

  PadicInteger operator-() const { return {-v, p}; }
  friend PadicInteger operator+(const PadicInteger& a, const PadicInteger& b) { return {a.v + b.v, a.p}; }
  friend PadicInteger operator-(const PadicInteger& a, const PadicInteger& b) { return {a.v - b.v, a.p}; }
  friend PadicInteger operator*(const PadicInteger& a, const PadicInteger& b) { return {a.v * b.v, a.p}; }
  friend bool operator==(const PadicInteger& a, const PadicInteger& b) { return a.v == b.v; }
};

Valuation valuation(const PadicInteger& x);
inline PadicInteger scalar_like(const PadicInteger& like, const mpz_class& v) { return {v, like.p}; }
inline PolygonUnit polygon_unit(const PadicInteger& like) { return PolygonUnit::pi_adic(like.p, 0); }

/// Z/p^N with p^N < 2^63. Contexts are interned and never freed.
struct ZpContext {
  long p = 0;
  int N = 0;
  std::uint64_t modulus = 0;
};
const ZpContext& zp_context(long p, int N);

struct ZpResidue {
  const ZpContext* ctx = nullptr;
  std::uint64_t v = 0;

  ZpResidue operator-() const;
  friend ZpResidue operator+(const ZpResidue& a, const ZpResidue& b);
  friend ZpResidue operator-(const ZpResidue& a, const ZpResidue& b);
  friend ZpResidue operator*(const ZpResidue& a, const ZpResidue& b);
  friend bool operator==(const ZpResidue& a, const ZpResidue& b) { return a.v == b.v; }
};

/// Finite for nonzero residues; at_least(N) for 0.
Valuation valuation(const ZpResidue& x);
ZpResidue scalar_like(const ZpResidue& like, const mpz_class& v);
inline PolygonUnit polygon_unit(const ZpResidue& like) { return PolygonUnit::pi_adic(like.ctx->p, 0); }
ZpResidue local_quotient(const ZpResidue& a, const ZpResidue& b);

/// Unramified quadratic extension Z_p[w]/p^N, w^2 + c1 w + c0 = 0 with the
/// reduction of x^2 + c1 x + c0 the modulus of F_{p^2}. Frobenius w -> -c1 - w.
struct Zq2Context {
  long p = 0;
  int N = 0;
  std::uint64_t modulus = 0;
  std::uint64_t c0 = 0;
  std::uint64_t c1 = 0;
};
const Zq2Context& zq2_context(long p, int N);

struct Zq2 {
  const Zq2Context* ctx = nullptr;
  std::uint64_t a = 0;  // a + b w
  std::uint64_t b = 0;

  Zq2 operator-() const;
  friend Zq2 operator+(const Zq2& x, const Zq2& y);
  friend Zq2 operator-(const Zq2& x, const Zq2& y);
  friend Zq2 operator*(const Zq2& x, const Zq2& y);
  friend bool operator==(const Zq2& x, const Zq2& y) { return x.a == y.a && x.b == y.b; }
};

Valuation valuation(const Zq2& x);
Zq2 scalar_like(const Zq2& like, const mpz_class& v);
inline PolygonUnit polygon_unit(const Zq2& like) { return PolygonUnit::pi_adic(like.ctx->p, 0); }
Zq2 local_quotient(const Zq2& a, const Zq2& b);
Zq2 frobenius(const Zq2& x);

/// Square matrix over a scalar model, row-major. The zero element fixes the
/// model instance (ring, precision) for entries created internally.
template <class T>
class ValuedMatrix {
 public:
  ValuedMatrix(std::size_t n, const T& zero) : n_(n), zero_(zero), a_(n * n, zero) {}

  static ValuedMatrix identity(std::size_t n, const T& zero) {
    ValuedMatrix m(n, zero);
    const T one = scalar_like(zero, 1);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t size() const { return n_; }
  const T& zero() const { return zero_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  friend ValuedMatrix operator+(const ValuedMatrix& x, const ValuedMatrix& y) {
    x.require_same_shape(y);
    ValuedMatrix r(x.n_, x.zero_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }
  friend ValuedMatrix operator-(const ValuedMatrix& x, const ValuedMatrix& y) {
    x.require_same_shape(y);
    ValuedMatrix r(x.n_, x.zero_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
  }
  friend ValuedMatrix operator*(const ValuedMatrix& x, const ValuedMatrix& y) {
    x.require_same_shape(y);
    ValuedMatrix r(x.n_, x.zero_);
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t k = 0; k < x.n_; ++k) {
        const T& xik = x(i, k);
        for (std::size_t j = 0; j < x.n_; ++j) r(i, j) = r(i, j) + xik * y(k, j);
      }
    return r;
  }

  friend bool operator==(const ValuedMatrix& x, const ValuedMatrix& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

  /// Principal submatrix on the given indices, in the given order.
  ValuedMatrix principal(const std::vector<std::size_t>& idx) const {
    ValuedMatrix r(idx.size(), zero_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(idx[i], idx[j]);
    return r;
  }

  void require_same_shape(const ValuedMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("matrix shape mismatch");
  }

 private:
  std::size_t n_;
  T zero_;
  std::vector<T> a_;
};

/// Lower hull of the points (i, vals[i]); vals[0] must be 0. Infinite values
/// are skipped. Bounds ("at least N") are resolved by computing the hull with
/// each bound point placed at N and with it omitted: the two hulls must agree
/// (below the cutoff, when one is given, and the result is then truncated
/// below it), otherwise PrecisionExhausted is thrown.
SlopePolygon polygon_of_valuations(const std::vector<Valuation>& vals, const PolygonUnit& unit,
                                   const std::optional<Rational>& cutoff = std::nullopt);

/// Largest n for which hodge_polygon enumerates minors.
inline constexpr std::size_t kMaxMinorSize = 8;

template <class T>
std::vector<Valuation> column_valuations(const ValuedMatrix<T>& m) {
  std::vector<Valuation> out;
  for (std::size_t j = 0; j < m.size(); ++j) {
    Valuation v = Valuation::infinite();
    for (std::size_t i = 0; i < m.size(); ++i) v = Valuation::min(v, valuation(m(i, j)));
    out.push_back(v);
  }
  return out;
}

struct ColumnHodge {
  SlopePolygon polygon;         // finite column valuations
  long infinite_columns = 0;    // exactly zero columns
  std::vector<Rational> bounds;  // columns zero to working precision: valuation >= bound
};

template <class T>
ColumnHodge column_hodge(const ValuedMatrix<T>& m) {
  ColumnHodge out;
  std::vector<Rational> s;
  for (const auto& v : column_valuations(m)) {
    if (v.is_infinite()) ++out.infinite_columns;
    else if (v.is_bound()) out.bounds.push_back(v.value());
    else s.push_back(v.value());
  }
  out.polygon = SlopePolygon::from_slopes(std::move(s), polygon_unit(m.zero()));
  return out;
}

/// cHP^{<r}; throws PrecisionExhausted if an unresolved column might lie below r.
template <class T>
SlopePolygon column_hodge_below(const ValuedMatrix<T>& m, const Rational& r) {
  const ColumnHodge ch = column_hodge(m);
  for (const auto& b : ch.bounds)
    if (b < r) throw PrecisionExhausted("column valuation only known to be >= " + b.str() + ", below r = " + r.str());
  return truncate_below(ch.polygon, r);
}

/// Calls visit(row_mask, col_mask, det) for every nonempty square minor.
/// Expansion along the last row over column subsets; n <= 16.
template <class T, class Fn>
void for_each_minor(const ValuedMatrix<T>& m, Fn&& visit) {
  const std::size_t n = m.size();
  if (n > 16) throw std::invalid_argument("for_each_minor: matrix too large");
  const std::uint32_t full = (1U << n);
  std::vector<T> base(full, m.zero());
  base[0] = scalar_like(m.zero(), 1);
  std::function<void(std::size_t, int, std::uint32_t, const std::vector<T>&)> dfs =
      [&](std::size_t next_row, int depth, std::uint32_t rows, const std::vector<T>& dp) {
        for (std::size_t r = next_row; r < n; ++r) {
          std::vector<T> nd(full, m.zero());
          for (std::uint32_t S = 1; S < full; ++S) {
            if (std::popcount(S) != depth + 1) continue;
            T acc = m.zero();
            for (std::size_t j = 0; j < n; ++j) {
              if (!(S >> j & 1U)) continue;
              const T term = m(r, j) * dp[S & ~(1U << j)];
              if (std::popcount(S >> (j + 1)) % 2) acc = acc - term;
              else acc = acc + term;
            }
            nd[S] = acc;
            visit(rows | (1U << r), S, nd[S]);
          }
          dfs(r + 1, depth + 1, rows | (1U << r), nd);
        }
      };
  dfs(0, 0, 0, base);
}

/// v(wedge^k) = min valuation of the k x k minors, k = 0..n, by enumeration.
template <class T>
std::vector<Valuation> exterior_valuations_by_minors(const ValuedMatrix<T>& m) {
  std::vector<Valuation> best(m.size() + 1, Valuation::infinite());
  best[0] = Valuation(0);
  for_each_minor(m, [&](std::uint32_t, std::uint32_t cols, const T& det) {
    const int k = std::popcount(cols);
    best[k] = Valuation::min(best[k], valuation(det));
  });
  return best;
}

template <class T>
concept HasLocalQuotient = requires(const T& a) {
  { local_quotient(a, a) } -> std::convertible_to<T>;
};

template <class T>
concept HasFrobenius = requires(const T& a) {
  { frobenius(a) } -> std::convertible_to<T>;
};

/// Invariant-factor valuations by pivoting on an entry of least valuation and
/// clearing its column with row operations; v(wedge^k) is the sum of the k
/// smallest. Exact in residue models, where unimodular operations preserve
/// the ideals of minors modulo the working precision.
template <HasLocalQuotient T>
std::vector<Valuation> exterior_valuations_by_elimination(ValuedMatrix<T> m) {
  const std::size_t n = m.size();
  std::vector<bool> row_done(n, false), col_done(n, false);
  std::vector<Valuation> inv;
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    Rational best;
    for (std::size_t i = 0; i < n; ++i) {
      if (row_done[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (col_done[j]) continue;
        const Valuation v = valuation(m(i, j));
        if (!v.is_finite()) continue;
        if (!piv || v.value() < best) {
          piv = {i, j};
          best = v.value();
        }
      }
    }
    if (!piv) {
      // Remaining block is zero (exactly or to working precision).
      Valuation rest = Valuation::infinite();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!row_done[i] && !col_done[j]) rest = Valuation::min(rest, valuation(m(i, j)));
      for (std::size_t k = step; k < n; ++k) inv.push_back(rest);
      break;
    }
    const auto [pi, pj] = *piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (row_done[i] || i == pi) continue;
      const T q = local_quotient(m(i, pj), m(pi, pj));
      for (std::size_t j = 0; j < n; ++j)
        if (!col_done[j]) m(i, j) = m(i, j) - q * m(pi, j);
    }
    row_done[pi] = true;
    col_done[pj] = true;
    inv.emplace_back(best);
  }
  std::vector<Valuation> out{Valuation(0)};
  Valuation acc(0);
  for (const auto& v : inv) {
    acc = acc + v;
    out.push_back(acc);
  }
  return out;
}

template <class T>
std::vector<Valuation> exterior_valuations(const ValuedMatrix<T>& m) {
  if (m.size() <= kMaxMinorSize) return exterior_valuations_by_minors(m);
  if constexpr (HasLocalQuotient<T>) {
    return exterior_valuations_by_elimination(m);
  } else {
    throw InfeasibleError("hodge_polygon: " + std::to_string(m.size()) +
                          "x" + std::to_string(m.size()) + " matrix needs elimination, which this scalar model lacks");
  }
}

template <class T>
SlopePolygon hodge_polygon(const ValuedMatrix<T>& m, const std::optional<Rational>& cutoff = std::nullopt) {
  return polygon_of_valuations(exterior_valuations(m), polygon_unit(m.zero()), cutoff);
}

/// Coefficients c_0..c_n of det(I - sM), computed division-free (Berkowitz).
template <class T>
std::vector<T> fredholm_coefficients(const ValuedMatrix<T>& m) {
  const std::size_t n = m.size();
  const T zero = m.zero();
  const T one = scalar_like(zero, 1);
  std::vector<T> vect{one};
  if (n == 0) return vect;
  vect.push_back(-m(0, 0));
  std::vector<T> q, v, w;
  for (std::size_t r = 1; r < n; ++r) {
    // q = (1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C) for the leading r x r block A.
    q.assign(r + 2, zero);
    q[0] = one;
    q[1] = -m(r, r);
    v.assign(r, zero);
    for (std::size_t i = 0; i < r; ++i) v[i] = m(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      T acc = zero;
      for (std::size_t j = 0; j < r; ++j) acc = acc + m(r, j) * v[j];
      q[k + 2] = -acc;
      if (k + 1 == r) break;
      w.assign(r, zero);
      for (std::size_t i = 0; i < r; ++i) {
        T s = zero;
        for (std::size_t j = 0; j < r; ++j) s = s + m(i, j) * v[j];
        w[i] = s;
      }
      v.swap(w);
    }
    std::vector<T> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] = next[i] + q[i - j] * vect[j];
    vect.swap(next);
  }
  return vect;
}

/// c_k = (-1)^k * (sum of k x k principal minors). Exhaustive reference.
template <class T>
std::vector<T> fredholm_coefficients_by_minors(const ValuedMatrix<T>& m) {
  std::vector<T> c(m.size() + 1, m.zero());
  c[0] = scalar_like(m.zero(), 1);
  for_each_minor(m, [&](std::uint32_t rows, std::uint32_t cols, const T& det) {
    if (rows != cols) return;
    const int k = std::popcount(rows);
    c[k] = (k % 2) ? c[k] - det : c[k] + det;
  });
  return c;
}

template <class T>
std::vector<Valuation> valuations_of(const std::vector<T>& xs) {
  std::vector<Valuation> out;
  for (const auto& x : xs) out.push_back(valuation(x));
  return out;
}

/// NP of det(I - sM); truncated below the cutoff when one is given.
template <class T>
SlopePolygon newton_polygon(const ValuedMatrix<T>& m, const std::optional<Rational>& cutoff = std::nullopt) {
  return polygon_of_valuations(valuations_of(fredholm_coefficients(m)), polygon_unit(m.zero()), cutoff);
}

template <class T>
struct Slice {
  std::vector<std::size_t> indices;
  ValuedMatrix<T> matrix;
};

/// I^{<r}: columns of valuation strictly below r, and the principal submatrix.
template <class T>
Slice<T> slice_below(const ValuedMatrix<T>& m, const Rational& r) {
  const auto cols = column_valuations(m);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].is_bound() && cols[i].value() < r)
      throw PrecisionExhausted("slice_below: column " + std::to_string(i) + " only known to be >= " +
                               cols[i].value().str());
    if (cols[i].is_finite() && cols[i].value() < r) idx.push_back(i);
  }
  return {idx, m.principal(idx)};
}

namespace detail {
// v > bound decided, or PrecisionExhausted.
inline bool exceeds(const Valuation& v, const Rational& bound, bool strict, const char* what) {
  if (v.is_infinite()) return true;
  if (v.is_finite()) return strict ? v.value() > bound : v.value() >= bound;
  if (strict ? v.value() > bound : v.value() >= bound) return true;
  throw PrecisionExhausted(std::string(what) + ": valuation only known to be >= " + v.value().str());
}
}  // namespace detail

/// Column conditions for e = M' - M: v(e col i) > v(M col i) on I^{<r}(M),
/// and v(e col i) >= r elsewhere.
template <class T>
bool is_r_perturbation(const ValuedMatrix<T>& m, const ValuedMatrix<T>& mp, const Rational& r) {
  m.require_same_shape(mp);
  const auto cm = column_valuations(m);
  const auto ce = column_valuations(mp - m);
  for (std::size_t i = 0; i < cm.size(); ++i) {
    if (cm[i].is_bound() && cm[i].value() < r)
      throw PrecisionExhausted("is_r_perturbation: column " + std::to_string(i) + " undecided");
    const bool small = cm[i].is_finite() && cm[i].value() < r;
    const bool ok = small ? detail::exceeds(ce[i], cm[i].value(), true, "is_r_perturbation")
                          : detail::exceeds(ce[i], r, false, "is_r_perturbation");
    if (!ok) return false;
  }
  return true;
}

/// NP^{<r}(M) and cHP^{<r}(M) share their terminal point.
template <class T>
bool touching(const ValuedMatrix<T>& m, const Rational& r) {
  return shares_terminal_point(newton_polygon(m, r), column_hodge_below(m, r));
}

template <HasFrobenius T>
ValuedMatrix<T> frobenius(const ValuedMatrix<T>& m) {
  ValuedMatrix<T> r(m.size(), m.zero());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = frobenius(m(i, j));
  return r;
}

/// F^{v-1}(M) ... F(M) M: the matrix of the v-th iterate of x -> F(x) M
/// acting on row vectors.
template <class T>
ValuedMatrix<T> semilinear_iterate(const ValuedMatrix<T>& m, int v) {
  if (v < 1) throw std::invalid_argument("semilinear_iterate: v must be positive");
  if constexpr (HasFrobenius<T>) {
    ValuedMatrix<T> result = m;
    ValuedMatrix<T> fk = m;
    for (int i = 1; i < v; ++i) {
      fk = frobenius(fk);
      result = fk * result;
    }
    return result;
  } else {
    if (v == 1) return m;
    throw std::invalid_argument("semilinear_iterate: scalar model has no Frobenius");
  }
}

/// Z_p-matrix (2n x 2n) of x -> F(x) M on Z_q^n with basis e_j, w e_j.
ValuedMatrix<ZpResidue> associated_block_matrix(const ValuedMatrix<Zq2>& m);

// Seeded random property suites (hand-rolled generators, geometric valuations).

struct SuiteReport {
  std::string name;
  long trials = 0;
  long passed = 0;
  long nontrivial = 0;  // trials where the tested implication had a true premise
  long redrawn = 0;     // draws discarded as undecidable at the working precision
  std::vector<std::string> failures;  // first few, with the trial seed

  bool ok() const { return passed == trials; }
};

/// Random n x n matrices over Z_p mod p^N with constructed r-perturbations:
/// touching(M, r) must imply touching(M', r) with the same NP^{<r} terminal
/// point. Characteristic polynomials are checked against minor sums. A draw
/// whose polygons are undecidable at p^N is discarded and redrawn (at most
/// 20 times per trial) and counted in SuiteReport::redrawn.
SuiteReport perturbation_suite(long trials, std::uint64_t seed, std::size_t n = 6, long p = 3, int N = 20);

/// Random exact integer matrices of size 1..max_n: HP slopes >= cHP slopes
/// with agreement up to any common point, the four-polygon coincidence under
/// touching (with the equivalent slice criterion), and NP over HP with equal
/// endpoints when det != 0. HP by minors is also compared with elimination
/// over Z/p^N.
SuiteReport hodge_suite(long count, std::uint64_t seed, std::size_t max_n = 6, long p = 3);

/// Random n x n matrices over Z_{p^2} mod p^N: NP_p of the associated block
/// matrix equals NP_{p^2} of the iterate with every slope doubled in
/// multiplicity. Undecidable draws are redrawn as in perturbation_suite.
SuiteReport root_suite(long trials, std::uint64_t seed, std::size_t n = 3, long p = 3, int N = 20);

}  // namespace nhlab
