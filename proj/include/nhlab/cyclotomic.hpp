#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/rational.hpp"

namespace nhlab {

/// Parameters of the ring Z[zeta_{p^n}]: the prime, the level, and derived
/// sizes. phi = p^{n-1}(p-1) is both the rank of the power basis and the
/// ramification index of Q_p(zeta_{p^n}) over Q_p.
struct CycloParams {
  long p = 0;
  int n = 0;
  long order = 0;  // p^n
  long step = 0;   // p^{n-1}
  long phi = 0;    // p^{n-1}(p-1)

  CycloParams() = default;
  CycloParams(long p, int n);
  friend bool operator==(const CycloParams&, const CycloParams&) = default;
};

/// Exact element of Z[zeta_{p^n}], stored in the power basis 1, z, ..., z^{phi-1}
/// of Z[x]/Phi_{p^n}(x). Immutable-by-convention value type.
class CyclotomicInteger {
 public:
  CyclotomicInteger() = default;
  explicit CyclotomicInteger(const CycloParams& params);
  CyclotomicInteger(const CycloParams& params, std::vector<mpz_class> coeffs);

  static CyclotomicInteger from_integer(const CycloParams& params, const mpz_class& v);
  static CyclotomicInteger zeta(const CycloParams& params);
  /// pi = zeta - 1, the uniformizer above p.
  static CyclotomicInteger pi(const CycloParams& params);
  /// sum_j counts[j] * zeta^j for j in [0, p^n).
  static CyclotomicInteger from_residue_counts(const CycloParams& params,
                                               std::span<const std::uint64_t> counts);
  /// Reduces an arbitrary-length coefficient vector (in powers of zeta) mod Phi_{p^n}.
  static CyclotomicInteger from_powers(const CycloParams& params, std::vector<mpz_class> powers);

  const CycloParams& params() const { return params_; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  /// True if the element lies in Z (all non-constant coefficients vanish).
  bool is_rational_integer() const;

  /// Value of the representative at x = 1.
  mpz_class eval_at_one() const;
  /// Residue map to Z/pZ (reduction modulo the maximal ideal (pi)).
  long residue() const;

  CyclotomicInteger operator-() const;
  CyclotomicInteger& operator+=(const CyclotomicInteger& o);
  CyclotomicInteger& operator-=(const CyclotomicInteger& o);
  friend CyclotomicInteger operator+(CyclotomicInteger a, const CyclotomicInteger& b) { return a += b; }
  friend CyclotomicInteger operator-(CyclotomicInteger a, const CyclotomicInteger& b) { return a -= b; }
  friend CyclotomicInteger operator*(const CyclotomicInteger& a, const CyclotomicInteger& b);
  CyclotomicInteger& operator*=(const CyclotomicInteger& o) { return *this = *this * o; }
  CyclotomicInteger scaled(const mpz_class& k) const;
  CyclotomicInteger pow(unsigned long e) const;

  /// Divides every coefficient by k; nullopt if some coefficient is not divisible.
  std::optional<CyclotomicInteger> divide_exact(const mpz_class& k) const;

  /// Exact quotient by pi, or nullopt if pi does not divide this element.
  std::optional<CyclotomicInteger> divide_by_pi() const;

  /// Galois action zeta -> zeta^a, gcd(a, p) = 1.
  CyclotomicInteger conjugate(long a) const;

  friend bool operator==(const CyclotomicInteger& a, const CyclotomicInteger& b);

  std::string str() const;

 private:
  CycloParams params_;
  std::vector<mpz_class> coeffs_;
};

/// Largest k with pi^k | c, normalized so v(pi) = 1; Infinite for c = 0.
Valuation pi_valuation(const CyclotomicInteger& c);

/// pi-adic valuation divided by v_pi(q) = v_p(q) * phi, so that v(q) = 1.
/// Throws std::invalid_argument if q is not a power of p.
Valuation q_valuation(const CyclotomicInteger& c, const mpz_class& q);

/// v_p(q) for q a power of p, or throws.
long log_p_exact(const mpz_class& q, long p);

}  // namespace nhlab
