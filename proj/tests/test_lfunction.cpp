#include <doctest.h>

#include <random>

#include "nhlab/errors.hpp"
#include "nhlab/lfunction.hpp"

using namespace nhlab;

namespace {

ASWCharacter make(const std::string& text) { return prepare(build_character(parse_character_spec(text))); }

// Order-p character sum by direct enumeration: sum of zeta^{Tr f(x)} over the
// points of F_{q^k} (plus infinity) where f is regular.
CyclotomicInteger direct_sum(const ASWCharacter& g, int k) {
  REQUIRE(g.n() == 1);
  const CycloParams cp(g.p(), 1);
  const FieldParams& ext = ff::field(g.p(), g.fq().k * k);
  const ExtensionEvaluator ev(g.coords()[0], ext);
  const auto z = CyclotomicInteger::zeta(cp);
  CyclotomicInteger s(cp);
  for (const auto& x : ff::enumerate(ext))
    if (const auto y = ev(x)) s += z.pow(static_cast<unsigned long>(ff::absolute_trace(*y)));
  if (const auto y = ev.at_infinity()) s += z.pow(static_cast<unsigned long>(ff::absolute_trace(*y)));
  return s;
}

ASWCharacter multiple(const ASWCharacter& g, long j) {
  std::vector<RationalFunction> c;
  for (const auto& f : g.coords()) c.push_back(f * RationalFunction::constant(g.fq(), j));
  return ASWCharacter(g.p(), g.n(), g.fq(), c);
}

std::vector<Rational> R(std::initializer_list<Rational> xs) { return xs; }

// Random reduced order-p character over F_p with small total degree.
ASWCharacter random_character(long p, std::mt19937_64& rng) {
  const FieldParams& F = ff::field(p, 1);
  for (;;) {
    RationalFunction f(F);
    const std::vector<Place> places{Place::at_infinity(), Place::at(FFElem(F, 0)), Place::at(FFElem(F, 1))};
    const int used = 1 + static_cast<int>(rng() % 2);
    int total = 0;
    for (int i = 0; i < used; ++i) {
      const int e = 1 + static_cast<int>(rng() % (p == 3 ? 5 : 4));
      if (e % p == 0) continue;
      total += e + 1;
      f += RationalFunction::from_local(FFPoly::monomial(FFElem(F, 1 + static_cast<long>(rng() % (p - 1))), e),
                                        places[i]);
      if (e > 1 && rng() % 2) f += RationalFunction::from_local(FFPoly::monomial(FFElem(F, 1), e - 1), places[i]);
    }
    if (total == 0 || total - 2 > (p == 3 ? 5 : 4)) continue;
    return ASWCharacter(p, 1, F, {f});
  }
}

}  // namespace

TEST_CASE("character sums") {
  const CycloParams c3(3, 1);
  CHECK(character_sum(make("p = 3\nf = x"), 1).is_zero());
  CHECK(character_sum(make("p = 3\nf = x^2"), 1) == CyclotomicInteger(c3, {1, 2}));
  CHECK(residue_counts(make("p = 3\nf = x"), 1) == std::vector<std::uint64_t>{1, 1, 1});

  for (const char* t : {"p = 3\nf = x^2", "p = 5\nf = x^4", "p = 3\nf = x^2 + 1/x", "p = 3\nq = 9\nf = a*x + 1/(x-1)",
                        "p = 2\nf = x^3 + 1/x", "p = 7\nf = x^3"}) {
    const auto g = make(t);
    for (int k = 1; k <= 3; ++k) CHECK(character_sum(g, k) == direct_sum(g, k));
  }

  const auto g = make("p = 3\nf = x^4 + x");
  LOptions one, many;
  one.threads = 1;
  many.threads = 5;
  CHECK(character_sum(g, 4, one) == character_sum(g, 4, many));
  LOptions tiny;
  tiny.max_points = 10;
  CHECK_THROWS_AS(character_sum(g, 3, tiny), InfeasibleError);
}

TEST_CASE("exp of power sums needs integral coefficients") {
  const CycloParams c3(3, 1);
  const auto one = CyclotomicInteger::from_integer(c3, 1);
  CHECK_THROWS_AS(exp_of_power_sums(c3, {one, CyclotomicInteger(c3)}), MathCheckFailed);
  const auto e = exp_of_power_sums(c3, {one, one});
  REQUIRE(e.size() == 3);
  CHECK(e[1] == one);
  CHECK(e[2] == one);
}

TEST_CASE("L-polynomial examples") {
  const CycloParams c3(3, 1);
  const auto L1 = l_polynomial(make("p = 3\nf = x"));
  CHECK(L1.degree == 0);
  CHECK(L1.coeffs.size() == 1);

  // Degree one: L = 1 + S_1 s, so S_2 = -S_1^2.
  const auto g2 = make("p = 3\nf = x^2");
  const auto L2 = l_polynomial(g2);
  REQUIRE(L2.degree == 1);
  CHECK(L2.coeffs[1] == CyclotomicInteger(c3, {1, 2}));
  CHECK(direct_sum(g2, 2) == -(direct_sum(g2, 1) * direct_sum(g2, 1)));
  CHECK(newton_polygon(L2).slopes() == R({Rational(1, 2)}));

  const auto L4 = l_polynomial(make("p = 5\nf = x^4"));
  CHECK(newton_polygon(L4).slopes() == R({Rational(1, 4), Rational(1, 2), Rational(3, 4)}));

  // x -> x^5 permutes F_3, F_9 and F_27, so S_1 = S_2 = S_3 = 0 and L = 1 + (S_4 / 4) s^4.
  const auto g5 = make("p = 3\nf = x^5");
  const auto L5 = l_polynomial(g5);
  REQUIRE(L5.degree == 4);
  for (int k = 1; k <= 3; ++k) CHECK(direct_sum(g5, k).is_zero());
  const auto s4 = direct_sum(g5, 4);
  const auto c4 = s4.divide_exact(4);
  REQUIRE(c4.has_value());
  CHECK(L5.coeffs == std::vector<CyclotomicInteger>{CyclotomicInteger::from_integer(c3, 1), CyclotomicInteger(c3),
                                                    CyclotomicInteger(c3), CyclotomicInteger(c3), *c4});
  const auto np5 = newton_polygon(L5);
  const auto hp5 = global_hodge_polygon(swan_conductors(g5));
  CHECK(np5.slopes() == R({Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  CHECK(lies_on_or_above(np5, hp5));
  CHECK(shares_terminal_point(np5, hp5));
  CHECK(np5 != hp5);
}

TEST_CASE("Euler product route agrees") {
  for (const char* t : {"p = 3\nf = x^2", "p = 3\nf = x^2 + 1/x", "p = 5\nf = x^3", "p = 2\nf = x^3", "p = 3\nq = 9\nf = a*x^2",
                        "p = 3\nn = 2\nf0 = x\nf1 = 0", "p = 3\nf = x^4"}) {
    const auto g = make(t);
    const auto L = l_polynomial(g);
    CHECK(l_polynomial_euler(g, L.degree) == L.coeffs);
  }
}

TEST_CASE("localization") {
  const auto g = make("p = 3\nf = x + 2/(x-1)^2");
  const auto& F = g.fq();
  const auto at1 = localize(g, Place::at(FFElem(F, 1)));
  CHECK(at1.coords()[0] == parse_rational_function("2*x^2", F));
  CHECK(at1.ramified().size() == 1);
  CHECK(at1.ramified()[0].infinite);
  CHECK(localize(g, Place::at_infinity()).coords()[0] == RationalFunction::x(F));
}

TEST_CASE("touching examples") {
  const auto eq = check_touching(make("p = 5\nf = x^4"), Rational(1, 2));
  CHECK(eq.global);
  CHECK(eq.theorem_consistent);

  const auto strict = check_touching(make("p = 3\nf = x^5"), Rational(1, 2));
  CHECK_FALSE(strict.global);
  CHECK(strict.hp.slopes() == R({Rational(1, 5), Rational(2, 5), Rational(3, 5), Rational(4, 5)}));
  REQUIRE(strict.locals.size() == 1);
  CHECK_FALSE(strict.locals[0].touching);
  CHECK(strict.theorem_consistent);

  // Below r = 0 both polygons are empty.
  CHECK(check_touching(make("p = 3\nf = x^5"), Rational(0)).global);

  // Two places, one of which fails to touch below 1/2.
  const auto two = check_touching(make("p = 3\nf = x^4 + 1/x"), Rational(1, 2));
  REQUIRE(two.locals.size() == 2);
  CHECK(two.locals[0].touching);
  CHECK_FALSE(two.locals[1].touching);
  CHECK_FALSE(two.global);
  CHECK(two.theorem_consistent);
}

TEST_CASE("zeta function of the cover") {
  // y^3 - y = x^2: L(f) L(2f) = (1 + (1 + 2z) s)(1 + (1 + 2z^2) s) = 1 + 3 s^2.
  const auto z = zeta_cover(make("p = 3\nf = x^2"), 2);
  CHECK(z.product == std::vector<mpz_class>{1, 0, 3});
  REQUIRE(z.counts.size() == 2);
  // Over F_3 every y solves y^3 - y = 0: three affine points and one at infinity.
  CHECK(z.counts[0].direct == 4);
  CHECK(z.counts[0].from_zeta == 4);
  // q^2 + 1 - (a^2 + b^2) with a + b = 0, ab = 3.
  CHECK(z.counts[1].direct == 16);
  CHECK(z.counts[1].from_zeta == 16);
  CHECK(cover_point_count(make("p = 3\nf = x^2"), 1) == 4);

  const auto z2 = zeta_cover(make("p = 3\nn = 2\nf0 = x\nf1 = 0"), 2);
  for (const auto& c : z2.counts) CHECK(c.from_zeta == c.direct);
}

TEST_CASE("Galois equivariance, symmetry and the Hodge bound on random characters") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 40; ++t) {
    const long p = t % 2 ? 5 : 3;
    const auto g = prepare(random_character(p, rng));
    const auto L = l_polynomial(g);
    const auto np = newton_polygon(L);
    const auto hp = global_hodge_polygon(swan_conductors(g));
    CHECK(lies_on_or_above(np, hp));
    CHECK(shares_terminal_point(np, hp));
    const auto& s = np.slopes();
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] + s[s.size() - 1 - i] == 1);

    const long j = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(p - 1));
    const auto Lj = l_polynomial(multiple(g, j));
    REQUIRE(Lj.coeffs.size() == L.coeffs.size());
    for (std::size_t i = 0; i < L.coeffs.size(); ++i) CHECK(Lj.coeffs[i] == L.coeffs[i].conjugate(j));
  }
}
