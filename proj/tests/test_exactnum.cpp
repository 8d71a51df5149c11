#include <doctest.h>

#include <random>

#include "nhlab/cyclotomic.hpp"
#include "nhlab/rational.hpp"

using namespace nhlab;

namespace {

// Determinant by fraction-free (Bareiss) elimination.
mpz_class bareiss_det(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Res(Phi_{p^n}, c) from the Sylvester matrix; equals the absolute norm of c.
mpz_class norm_by_resultant(const CyclotomicInteger& c) {
  const CycloParams& cp = c.params();
  std::vector<mpz_class> phi(cp.phi + 1);
  for (long i = 0; i < cp.p; ++i) phi[i * cp.step] = 1;
  std::vector<mpz_class> g = c.coeffs();
  while (g.size() > 1 && g.back() == 0) g.pop_back();
  const std::size_t m = phi.size() - 1, k = g.size() - 1;
  if (k == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), g[0].get_mpz_t(), m);
    return r;
  }
  const std::size_t n = m + k;
  std::vector<std::vector<mpz_class>> s(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= m; ++j) s[i][i + j] = phi[m - j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= k; ++j) s[k + i][i + j] = g[k - j];
  return bareiss_det(std::move(s));
}

CyclotomicInteger random_element(const CycloParams& cp, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-6, 6);
  std::uniform_int_distribution<int> shift(0, 3);
  std::vector<mpz_class> c(cp.phi);
  for (auto& x : c) x = coeff(rng);
  CyclotomicInteger out(cp, c);
  // Multiply by a random power of pi so valuations above 0 are exercised.
  return out * CyclotomicInteger::pi(cp).pow(static_cast<unsigned long>(shift(rng)));
}

}  // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6).den() == 2);
  CHECK(Rational(3, -6).num() == -1);
  CHECK(Rational::parse("-3/9") == Rational(-1, 3));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("pi-adic valuation examples") {
  const CycloParams c3(3, 1);
  CHECK(pi_valuation(CyclotomicInteger::from_integer(c3, 3)) == Valuation(2));
  CHECK(pi_valuation(CyclotomicInteger::pi(c3)) == Valuation(1));
  CHECK(pi_valuation(CyclotomicInteger(c3)).is_infinite());

  const CyclotomicInteger one_plus_two_zeta(c3, {1, 2});
  CHECK(pi_valuation(one_plus_two_zeta) == Valuation(1));
  // Norm oracle: N(1 + 2 zeta) = Phi_3(-2) = 3.
  CHECK(norm_by_resultant(one_plus_two_zeta) == 3);
  // Two rounds of division by pi: the first succeeds, the second does not.
  const auto q1 = one_plus_two_zeta.divide_by_pi();
  REQUIRE(q1.has_value());
  CHECK_FALSE(q1->divide_by_pi().has_value());
  CHECK(*q1 * CyclotomicInteger::pi(c3) == one_plus_two_zeta);
}

TEST_CASE("q-adic valuation examples") {
  const CycloParams c3(3, 1);
  CHECK(q_valuation(CyclotomicInteger::from_integer(c3, 3), 3) == Valuation(1));
  CHECK(q_valuation(CyclotomicInteger(c3, {1, 2}), 3) == Valuation(Rational(1, 2)));
  const CycloParams c9(3, 2);
  CHECK(pi_valuation(CyclotomicInteger::from_integer(c9, 3)) == Valuation(6));
  CHECK(q_valuation(CyclotomicInteger::from_integer(c9, 3), 3) == Valuation(1));
  CHECK(q_valuation(CyclotomicInteger::from_integer(c9, 3), 9) == Valuation(Rational(1, 2)));
  CHECK_THROWS_AS(q_valuation(CyclotomicInteger::from_integer(c3, 3), 6), std::invalid_argument);
}

TEST_CASE("cyclotomic ring identities") {
  for (const auto& cp : {CycloParams(3, 1), CycloParams(5, 1), CycloParams(3, 2)}) {
    const auto z = CyclotomicInteger::zeta(cp);
    CHECK(z.pow(static_cast<unsigned long>(cp.order)).is_one());
    CHECK_FALSE(z.pow(static_cast<unsigned long>(cp.order / cp.p)).is_one());
    // 1 + z^{p^{n-1}} + ... + z^{(p-1)p^{n-1}} = 0
    CyclotomicInteger s(cp);
    for (long i = 0; i < cp.p; ++i) s += z.pow(static_cast<unsigned long>(i * cp.step));
    CHECK(s.is_zero());
    CHECK(z.conjugate(2).conjugate((cp.order + 1) / 2) == z);
  }
}

TEST_CASE("valuation is multiplicative and ultrametric on random pairs") {
  std::mt19937_64 rng(17);
  for (const auto& cp : {CycloParams(3, 1), CycloParams(5, 1), CycloParams(3, 2)}) {
    for (int t = 0; t < 1000; ++t) {
      const auto a = random_element(cp, rng);
      const auto b = random_element(cp, rng);
      if (a.is_zero() || b.is_zero()) continue;
      const Valuation va = pi_valuation(a), vb = pi_valuation(b);
      CHECK(pi_valuation(a * b) == va + vb);
      const auto sum = a + b;
      if (sum.is_zero()) continue;
      const Rational vs = pi_valuation(sum).value();
      CHECK(vs >= std::min(va.value(), vb.value()));
      if (va.value() != vb.value()) CHECK(vs == std::min(va.value(), vb.value()));
    }
  }
}

TEST_CASE("valuation agrees with the p-adic valuation of the norm") {
  std::mt19937_64 rng(23);
  for (const auto& cp : {CycloParams(3, 1), CycloParams(5, 1), CycloParams(7, 1), CycloParams(3, 2)}) {
    for (int t = 0; t < 1000 / 4; ++t) {
      const auto a = random_element(cp, rng);
      if (a.is_zero()) continue;
      const mpz_class norm = norm_by_resultant(a);
      REQUIRE(norm != 0);
      // Totally ramified of degree phi: v_pi = v_p(N).
      CHECK(pi_valuation(a) == Valuation(padic_valuation(norm, cp.p)));
    }
  }
}

TEST_CASE("residue map is a ring homomorphism") {
  std::mt19937_64 rng(29);
  for (const auto& cp : {CycloParams(3, 1), CycloParams(5, 1), CycloParams(3, 2)}) {
    for (int t = 0; t < 300; ++t) {
      const auto a = random_element(cp, rng);
      const auto b = random_element(cp, rng);
      CHECK((a + b).residue() == (a.residue() + b.residue()) % cp.p);
      CHECK((a * b).residue() == (a.residue() * b.residue()) % cp.p);
    }
  }
}

TEST_CASE("valuation bookkeeping") {
  CHECK(Valuation::min(Valuation(3), Valuation::at_least(Rational(3))).is_bound());
  CHECK((Valuation(2) + Valuation::at_least(Rational(5))).is_bound());
  CHECK((Valuation(2) + Valuation::infinite()).is_infinite());
  CHECK(Valuation::min(Valuation(1), Valuation::infinite()) == Valuation(1));
}
