#include <doctest.h>

#include <random>

#include "nhlab/witt.hpp"

using namespace nhlab;
using namespace nhlab::witt;
using ff::FFElem;

namespace {

mpz_class eval_int(const IntPoly& poly, const std::vector<mpz_class>& vars) {
  return evaluate<mpz_class>(poly, std::span<const mpz_class>(vars));
}

WittVector<FFElem> vec(const WittStructure& s, const ff::FieldParams& f, std::vector<long> comps) {
  std::vector<FFElem> c;
  for (const long x : comps) c.emplace_back(f, x);
  return WittVector<FFElem>(s, std::move(c));
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("sum polynomials: level 0 and the ghost-derived level 1") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-20, 20);
  for (long p : {2L, 3L, 5L}) {
    const WittStructure& s = structure(p, 2);
    for (int t = 0; t < 100; ++t) {
      const std::vector<mpz_class> v{d(rng), d(rng), d(rng), d(rng)};  // x0 x1 y0 y1
      CHECK(eval_int(s.sum[0], v) == v[0] + v[2]);
      // p x_1 + x_0^p + p y_1 + y_0^p = (x_0 + y_0)^p + p S_1
      mpz_class lhs, a, b, c;
      mpz_pow_ui(a.get_mpz_t(), v[0].get_mpz_t(), p);
      mpz_pow_ui(b.get_mpz_t(), v[2].get_mpz_t(), p);
      const mpz_class sum0 = v[0] + v[2];
      mpz_pow_ui(c.get_mpz_t(), sum0.get_mpz_t(), p);
      lhs = a + b - c;
      CHECK(eval_int(s.sum[1], v) == v[1] + v[3] + lhs / p);
    }
  }
  const std::vector<mpz_class> v{7, -2, 5, 11};
  CHECK(eval_int(structure(2, 2).sum[1], v) == v[1] + v[3] - v[0] * v[2]);
  CHECK(eval_int(structure(3, 2).sum[1], v) == v[1] + v[3] - (v[0] * v[0] * v[2] + v[0] * v[2] * v[2]));
}

TEST_CASE("ghost map is a ring homomorphism over Z") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-9, 9);
  for (const auto& [p, n] : std::vector<std::pair<long, int>>{{2, 3}, {3, 3}, {5, 2}, {2, 4}}) {
    const WittStructure& s = structure(p, n);
    for (int t = 0; t < 1000 / 4; ++t) {
      std::vector<mpz_class> a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a[i] = d(rng);
        b[i] = d(rng);
      }
      const WittVector<mpz_class> wa(s, a), wb(s, b);
      const auto ga = ghost(p, a), gb = ghost(p, b);
      const auto gs = ghost(p, witt_add(wa, wb).c);
      const auto gm = ghost(p, witt_mul(wa, wb).c);
      const auto gn = ghost(p, witt_neg(wa).c);
      for (int i = 0; i < n; ++i) {
        CHECK(gs[i] == ga[i] + gb[i]);
        CHECK(gm[i] == ga[i] * gb[i]);
        CHECK(gn[i] == -ga[i]);
      }
    }
  }
}

TEST_CASE("structure is rejected outside the guard") {
  CHECK_THROWS(build_structure(3, 5));
  CHECK_THROWS(build_structure(3, 0));
}

TEST_CASE("identities over F_p") {
  const auto& F = ff::field(5, 1);
  const WittStructure& s = structure(5, 3);
  const auto a = vec(s, F, {2, 4, 1});
  CHECK(witt_add(a, witt_zero(s, FFElem(F))) == a);
  CHECK(witt_mul(witt_one(s, FFElem(F)), a) == a);
  CHECK(witt_add(a, witt_neg(a)) == witt_zero(s, FFElem(F)));
}

TEST_CASE("Teichmuller residues") {
  const WittStructure& s = structure(3, 2);
  const auto& F = ff::field(3, 1);
  CHECK(to_residue(vec(s, F, {1, 0})) == 1);
  CHECK(to_residue(vec(s, F, {1, 1})) == 4);
  CHECK(to_residue(vec(s, F, {0, 0})) == 0);
  // tau(2) is the square root of unity congruent to 2: -1 mod 9.
  CHECK(teichmuller(2, 3, 2) == 8);
  CHECK(teichmuller(2, 5, 3) * teichmuller(2, 5, 3) % 125 == 124);
}

TEST_CASE("W_n(F_p) is isomorphic to Z/p^n") {
  SUBCASE("exhaustive p = 3, n = 2") {
    const WittStructure& s = structure(3, 2);
    const auto& F = ff::field(3, 1);
    std::vector<WittVector<FFElem>> all;
    for (long a = 0; a < 3; ++a)
      for (long b = 0; b < 3; ++b) all.push_back(vec(s, F, {a, b}));
    std::vector<bool> hit(9, false);
    for (const auto& x : all) {
      hit[to_residue(x)] = true;
      for (const auto& y : all) {
        CHECK(to_residue(witt_add(x, y)) == (to_residue(x) + to_residue(y)) % 9);
        CHECK(to_residue(witt_mul(x, y)) == (to_residue(x) * to_residue(y)) % 9);
      }
    }
    for (bool h : hit) CHECK(h);
  }
  SUBCASE("random p = 5, n = 3") {
    const WittStructure& s = structure(5, 3);
    const auto& F = ff::field(5, 1);
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> d(0, 4);
    const std::uint64_t m = ipow(5, 3);
    for (int t = 0; t < 300; ++t) {
      const auto x = vec(s, F, {d(rng), d(rng), d(rng)});
      const auto y = vec(s, F, {d(rng), d(rng), d(rng)});
      CHECK(to_residue(witt_add(x, y)) == (to_residue(x) + to_residue(y)) % m);
      CHECK(to_residue(witt_mul(x, y)) == (to_residue(x) * to_residue(y)) % m);
    }
  }
}

TEST_CASE("Witt trace") {
  const auto& F3 = ff::field(3, 1);
  const auto& F9 = ff::field(3, 2);
  const WittStructure& s = structure(3, 2);

  const auto a1 = vec(s, F3, {2, 1});
  CHECK(witt_trace(a1) == a1);

  // a = (t, 0) over F_9: the two conjugates added by hand with
  // S_1 = x_1 + y_1 - (x_0^2 y_0 + x_0 y_0^2).
  const FFElem t = FFElem::generator(F9);
  const WittVector<FFElem> a(s, {t, FFElem(F9)});
  const FFElem x0 = t, y0 = t.pow(3);
  const FFElem c0 = x0 + y0;
  const FFElem c1 = -(x0 * x0 * y0 + x0 * y0 * y0);
  REQUIRE(c0.is_prime_field());
  REQUIRE(c1.is_prime_field());
  const auto tr = witt_trace(a);
  CHECK(tr.c[0] == FFElem(F3, c0.coeff(0)));
  CHECK(tr.c[1] == FFElem(F3, c1.coeff(0)));

  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    const auto& F81 = ff::field(3, 4);
    const WittStructure& s3 = structure(3, 3);
    auto rnd = [&] {
      std::vector<FFElem> c;
      for (int j = 0; j < 3; ++j) c.push_back(FFElem::from_index(F81, rng() % F81.size));
      return WittVector<FFElem>(s3, c);
    };
    const auto x = rnd(), y = rnd();
    CHECK(witt_trace(witt_frobenius(x)) == witt_trace(x));
    CHECK(witt_trace(witt_add(x, y)) == witt_add(witt_trace(x), witt_trace(y)));
  }
}
