#include <doctest.h>

#include <map>
#include <random>

#include "nhlab/character.hpp"
#include "nhlab/errors.hpp"

using namespace nhlab;

namespace {

ASWCharacter make(const std::string& text) { return build_character(parse_character_spec(text)); }

// Histogram of absolute traces of f_0 over the affine points of F_{q^k} where
// f_0 is regular, plus infinity.
std::map<long, long> trace_histogram(const ASWCharacter& g, int k) {
  const FieldParams& ext = ff::field(g.p(), g.fq().k * k);
  const ExtensionEvaluator ev(g.coords()[0], ext);
  std::map<long, long> h;
  for (const auto& x : ff::enumerate(ext))
    if (const auto y = ev(x)) ++h[ff::absolute_trace(*y)];
  if (const auto y = ev.at_infinity()) ++h[ff::absolute_trace(*y)];
  return h;
}

std::vector<Rational> R(std::initializer_list<Rational> xs) { return xs; }

}  // namespace

TEST_CASE("spec parsing") {
  const auto s = parse_character_spec("# demo\np = 3\nn = 2\nf0 = x\nf1 = x^2 + 1/x\n");
  CHECK(s.p == 3);
  CHECK(s.n == 2);
  CHECK(s.q == 3);
  CHECK(s.coords == std::vector<std::string>{"x", "x^2 + 1/x"});
  CHECK(parse_character_spec("p=5\nf=x^4").coords == std::vector<std::string>{"x^4"});
  CHECK(parse_character_spec("p=3\nn=3\nf2=x").coords == std::vector<std::string>{"0", "0", "x"});

  CHECK_THROWS_AS(parse_character_spec("p = 4\nf = x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_character_spec("f = x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_character_spec("p = 3\ng = x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_character_spec("p = 3\nf1 = x"), std::invalid_argument);
  CHECK_THROWS_AS(make("p = 3\nq = 10\nf = x"), std::invalid_argument);
  CHECK_THROWS_AS(make("p = 3\nf = x^2 +"), std::invalid_argument);
  // x^2 + 1 has no root in F_3: the pole is not rational.
  CHECK_THROWS_AS(make("p = 3\nf = 1/(x^2+1)"), std::invalid_argument);
  CHECK_NOTHROW(make("p = 3\nq = 9\nf = a*x + 1/(x - a)"));
}

TEST_CASE("reduction removes p-divisible polar exponents and keeps the character") {
  const auto g1 = make("p = 3\nf = x^3");
  CHECK_FALSE(is_reduced(g1));
  CHECK(reduce(g1).coords()[0] == RationalFunction::x(g1.fq()));

  const auto g2 = make("p = 5\nf = x^10 + x");
  const auto r2 = reduce(g2);
  CHECK(is_reduced(r2));
  CHECK(r2.coords()[0] == make("p = 5\nf = x^2 + x").coords()[0]);

  for (const char* text : {"p = 3\nf = x^3", "p = 5\nf = x^10 + x", "p = 3\nf = x^6 + 1/x^3 + x",
                           "p = 3\nq = 9\nf = a*x^3 + 1/(x-1)^3", "p = 2\nf = x^4 + x^3"}) {
    const auto g = make(text);
    const auto r = reduce(g);
    CHECK(is_reduced(r));
    for (int k = 1; k <= 2; ++k) CHECK(trace_histogram(g, k) == trace_histogram(r, k));
  }
}

TEST_CASE("ramification guard") {
  CHECK_NOTHROW(require_totally_ramified(make("p = 3\nn = 2\nf0 = x\nf1 = x^2")));
  CHECK_THROWS_AS(require_totally_ramified(make("p = 3\nn = 2\nf0 = 0\nf1 = x")), std::invalid_argument);
  CHECK_THROWS_AS(require_totally_ramified(make("p = 3\nn = 2\nf0 = x\nf1 = 1/x")), std::invalid_argument);
}

TEST_CASE("Swan conductors") {
  const auto s1 = swan_conductors(make("p = 5\nf = x^4"));
  REQUIRE(s1.local.size() == 1);
  CHECK(s1.local[0].place.infinite);
  CHECK(s1.local[0].d == 4);
  CHECK(s1.local[0].delta == 4);

  // Breaks for (x, 0) over p = 3: d_1 = 1, d_2 = 3 * 1.
  const auto s2 = swan_conductors(make("p = 3\nn = 2\nf0 = x\nf1 = 0"));
  CHECK(s2.local[0].breaks == std::vector<long>{1, 3});
  CHECK(s2.local[0].delta == 1);

  // (x, x^4): d_2 = max(3 * 1, 4) = 4, delta = 4/3.
  const auto s3 = swan_conductors(make("p = 3\nn = 2\nf0 = x\nf1 = x^4"));
  CHECK(s3.local[0].breaks == std::vector<long>{1, 4});
  CHECK(s3.local[0].delta == Rational(4, 3));

  const auto s4 = swan_conductors(make("p = 3\nf = x + 2/(x-1)^2"));
  REQUIRE(s4.local.size() == 2);
  CHECK(s4.at(Place::at(FFElem(ff::field(3, 1), 1))).d == 2);
  CHECK(s4.at(Place::at_infinity()).d == 1);
}

TEST_CASE("Hodge polygons and L-degree") {
  const mpz_class q = 5;
  CHECK(local_hodge_polygon(4, q).slopes() == R({Rational(1, 4), Rational(1, 2), Rational(3, 4)}));
  CHECK(local_hodge_polygon(1, q).empty());

  const auto s1 = swan_conductors(make("p = 5\nf = x^4"));
  CHECK(global_hodge_polygon(s1) == local_hodge_polygon(4, q));
  CHECK(l_degree(s1) == 3);

  const auto s2 = swan_conductors(make("p = 3\nf = x + 1/x"));
  CHECK(global_hodge_polygon(s2).slopes() == R({0, 1}));
  CHECK(l_degree(s2) == 2);
  CHECK(global_hodge_polygon(s2, 1).slopes() == R({0, 0, 1, 1}));
  CHECK(l_degree(s2, 1) == 4);
}

TEST_CASE("equality conditions") {
  CHECK(check_equality_conditions(swan_conductors(make("p = 5\nf = x^4"))));
  CHECK(check_equality_conditions(swan_conductors(make("p = 7\nf = x^3"))));
  CHECK_FALSE(check_equality_conditions(swan_conductors(make("p = 3\nf = x^5"))));
  CHECK_FALSE(check_equality_conditions(swan_conductors(make("p = 5\nf = x^4")), 0, false));
  CHECK(check_equality_conditions(swan_conductors(make("p = 3\nn = 2\nf0 = x\nf1 = 0"))));
  CHECK_FALSE(check_equality_conditions(swan_conductors(make("p = 3\nn = 2\nf0 = x\nf1 = x^4"))));
}

TEST_CASE("global Hodge polygon is symmetric with length equal to the L-degree") {
  std::mt19937_64 rng(53);
  const FieldParams& F = ff::field(5, 1);
  for (int t = 0; t < 200; ++t) {
    // Random reduced polar parts at up to three rational places.
    RationalFunction f(F);
    std::vector<Place> places{Place::at_infinity(), Place::at(FFElem(F, 0)), Place::at(FFElem(F, 2))};
    const int used = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < used; ++i) {
      int e = 1 + static_cast<int>(rng() % 9);
      if (e % 5 == 0) ++e;
      f += RationalFunction::from_local(FFPoly::monomial(FFElem(F, 1 + static_cast<long>(rng() % 4)), e), places[i]);
    }
    const ASWCharacter g(5, 1, F, {f});
    const int genus = static_cast<int>(rng() % 3);
    const SwanData swan = swan_conductors(g);
    const SlopePolygon hp = global_hodge_polygon(swan, genus);
    REQUIRE(hp.length() == l_degree(swan, genus));
    CHECK(hp.terminal().y * 2 == Rational(hp.length()));
    const auto& s = hp.slopes();
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] + s[s.size() - 1 - i] == 1);
  }
}
