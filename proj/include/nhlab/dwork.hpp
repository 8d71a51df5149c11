#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhlab/cyclotomic.hpp"
#include "nhlab/polygon.hpp"
#include "nhlab/ratfunc.hpp"
#include "nhlab/valmat.hpp"

namespace nhlab::dwork {

/// Z[zeta_p]/p^c in the power basis 1, zeta, ..., zeta^{p-2}, with
/// c = ceil(N / (p-1)) so that pi-adic valuations below N are exact.
/// Interned; never freed.
struct PadicRing {
  long p = 0;
  int N = 0;
  int c = 0;
  mpz_class modulus;            // p^c
  std::uint64_t modulus64 = 0;  // p^c when it fits in 64 bits, else 0
  CycloParams params;
};
const PadicRing& padic_ring(long p, int N);

/// Reference scalar: GMP coefficients reduced into [0, p^c).
class PadicScalar {
 public:
  PadicScalar() = default;
  explicit PadicScalar(const PadicRing& ring) : ring_(&ring), a_(ring.p - 1) {}
  PadicScalar(const PadicRing& ring, std::vector<mpz_class> coeffs);

  static PadicScalar from_cyclotomic(const PadicRing& ring, const CyclotomicInteger& c);
  static PadicScalar zeta(const PadicRing& ring);

  const PadicRing& ring() const { return *ring_; }
  const std::vector<mpz_class>& coeffs() const { return a_; }
  bool is_zero() const;
  CyclotomicInteger to_cyclotomic() const;

  PadicScalar operator-() const;
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  friend bool operator==(const PadicScalar& a, const PadicScalar& b) { return a.a_ == b.a_; }
  PadicScalar pow(unsigned long e) const;

  std::string str() const;

 private:
  const PadicRing* ring_ = nullptr;
  std::vector<mpz_class> a_;
};

/// pi-adic valuation (v(pi) = 1, v(p) = p - 1); at_least(N) once >= N.
Valuation valuation(const PadicScalar& x);
PadicScalar scalar_like(const PadicScalar& like, const mpz_class& v);
inline PolygonUnit polygon_unit(const PadicScalar& like) { return PolygonUnit::pi_adic(like.ring().p, 1); }

/// Fixed-width scalar for p <= 17 and p^c < 2^64; same semantics as
/// PadicScalar.
class FastPadic {
 public:
  static constexpr int kMaxPhi = 16;

  FastPadic() = default;
  explicit FastPadic(const PadicRing& ring) : ring_(&ring) {}
  static FastPadic from(const PadicScalar& x);
  PadicScalar to_reference() const;

  const PadicRing& ring() const { return *ring_; }

  FastPadic operator-() const;
  friend FastPadic operator+(const FastPadic& a, const FastPadic& b);
  friend FastPadic operator-(const FastPadic& a, const FastPadic& b);
  friend FastPadic operator*(const FastPadic& a, const FastPadic& b);
  friend bool operator==(const FastPadic& a, const FastPadic& b) { return a.a_ == b.a_; }

 private:
  const PadicRing* ring_ = nullptr;
  std::array<std::uint64_t, kMaxPhi> a_{};
};

Valuation valuation(const FastPadic& x);
FastPadic scalar_like(const FastPadic& like, const mpz_class& v);
inline PolygonUnit polygon_unit(const FastPadic& like) { return PolygonUnit::pi_adic(like.ring().p, 1); }

/// True if FastPadic can represent the ring.
bool fast_path_available(const PadicRing& ring);

struct DworkPi {
  PadicScalar pi;
};

/// The root of x^{p-1} + p = 0 congruent to zeta - 1 modulo pi^2, to pi-adic
/// precision N. p odd, N >= 3. Throws MathCheckFailed if the iteration does
/// not converge or the result fails its defining checks.
DworkPi dwork_pi(long p, int N);

/// v(c_k) >= (k - b) / m for all k.
struct GrowthCertificate {
  Rational m;
  Rational b;
};

/// Certificate of a product: m is the larger, b the sum.
GrowthCertificate compose(const GrowthCertificate& x, const GrowthCertificate& y);

struct TruncatedSeries {
  std::vector<PadicScalar> coeffs;  // c_0 .. c_M in the variable u
  std::optional<GrowthCertificate> cert;
};

/// True if every coefficient meets the bound; coefficients that vanish to the
/// working precision are accepted.
bool satisfies(const TruncatedSeries& s, const GrowthCertificate& g);

/// exp(pi u - pi u^p) to u-degree M. Asserts integrality (by construction
/// the factorial cancellation) and the certificate (p^2/(p-1), 0).
TruncatedSeries splitting_function(const DworkPi& pi, long M);

/// prod_j theta(tau(a_j) u^j) to u-degree M for f = sum a_j u^j over F_p with
/// no constant term and p not dividing any exponent. Certified with
/// (d p^2/(p-1), 0), d = deg f.
TruncatedSeries frobenius_structure(const FFPoly& f, const DworkPi& pi, long M);

struct GrowthCheck {
  Rational slope;                   // claimed: v(c_k) >= slope * k
  bool holds = true;
  long first_violation = -1;
  Rational worst_ratio;             // min over k >= 1 of v(c_k) / k among decided coefficients
};

/// Scans the coefficients against v(c_k) >= slope * k.
GrowthCheck check_growth(const TruncatedSeries& s, const Rational& slope);

/// Matrix of g -> U_p(E g) on u^0..u^{size-1}: entry (m, k) = E_{pm - k}.
/// Throws std::invalid_argument if E has degree below p (size - 1).
ValuedMatrix<PadicScalar> theta_matrix(const TruncatedSeries& E, long size);

enum class Backend { automatic, fast, reference };

/// Coefficients of det(I - s Theta) for the truncated matrix of f, computed
/// with the chosen backend and returned as reference scalars.
std::vector<PadicScalar> fredholm_series(const FFPoly& f, long size, int N, Backend backend = Backend::automatic);

struct OracleOptions {
  long size = 0;      // matrix size; 0 selects max(8, 10 d)
  int precision = 0;  // N; 0 selects max(40, 4 (p-1) d)
  Backend backend = Backend::automatic;
  int max_escalations = 3;
};

struct OracleRun {
  long size = 0;
  int precision = 0;
  std::string backend;
  SlopePolygon c_np;  // pi-adic NP of C below the cutoff
};

struct OracleResult {
  SlopePolygon np;        // q-adic local NP^{<r}
  SlopePolygon stripped;  // pi-adic C-series NP below the cutoff, one slope 0 removed
  OracleRun run;          // accepted run
  OracleRun check;        // stabilization rerun at (2 size, N + 20)
  GrowthCheck theta_growth;
  GrowthCheck structure_growth;  // against (p-1)/(p d)
  int escalations = 0;
};

/// Local NP^{<r} (q-adic, q = p) of the character f on A^1 through the
/// trace formula: NP of the Fredholm series truncated below r (p-1), one
/// slope 0 removed, rescaled. Accepted once a rerun at (2 size, N + 20)
/// gives the same polygon; otherwise both are raised, up to
/// max_escalations times, before PrecisionExhausted is thrown.
OracleResult local_np_oracle(const FFPoly& f, const Rational& r, OracleOptions opt = {});

/// HP(delta) = {k (p-1) / delta : k >= 1} in pi-adic units, first len slopes.
SlopePolygon hp_delta(long p, const Rational& delta, long len);

struct PolygonCheck {
  bool ok = false;
  SlopePolygon np;  // stripped C-series NP (pi-adic)
  SlopePolygon hp;  // HP(delta), same length
  std::string diagnostic;
};

/// Stripped C-series NP below cutoff e (q-adic units) lies on or above
/// HP(delta), delta = deg f.
PolygonCheck hodge_bound_check(const FFPoly& f, const Rational& e, OracleOptions opt = {});

/// Stripped C-series NP and HP(delta) take the same values at x = n d - 1
/// and x = n d for n = 1..blocks.
PolygonCheck block_periodicity_check(const FFPoly& f, int blocks, OracleOptions opt = {});

}  // namespace nhlab::dwork
