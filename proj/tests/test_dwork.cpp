#include <doctest.h>

#include "nhlab/character.hpp"
#include "nhlab/dwork.hpp"
#include "nhlab/errors.hpp"
#include "nhlab/lfunction.hpp"

using namespace nhlab;
using namespace nhlab::dwork;

namespace {

FFPoly monomial(long p, long c, int e) { return FFPoly::monomial(FFElem(ff::field(p, 1), c), e); }

std::vector<Rational> R(std::initializer_list<Rational> xs) { return xs; }

// Local NP from character sums, computed independently of the trace formula.
SlopePolygon sum_np(const std::string& spec, const Rational& r) {
  const auto g = prepare(build_character(parse_character_spec(spec)));
  return truncate_below(newton_polygon(l_polynomial(g)), r);
}

}  // namespace

TEST_CASE("Dwork pi") {
  for (long p : {3L, 5L, 7L}) {
    const DworkPi d = dwork_pi(p, 30);
    const PadicRing& ring = d.pi.ring();
    const auto one = PadicScalar::from_cyclotomic(ring, CyclotomicInteger::from_integer(ring.params, 1));
    CHECK((d.pi.pow(static_cast<unsigned long>(p - 1)) + scalar_like(one, p)).is_zero());
    CHECK(valuation(d.pi) == Valuation(1));
    const Valuation diff = valuation(d.pi - (PadicScalar::zeta(ring) - one));
    CHECK((diff.is_infinite() || diff.value() >= 2));
  }
}

TEST_CASE("splitting function") {
  const long p = 5;
  const DworkPi d = dwork_pi(p, 40);
  const auto th = splitting_function(d, 40);
  REQUIRE(th.coeffs.size() == 41);
  const auto one = scalar_like(d.pi, 1);
  CHECK(th.coeffs[0] == one);
  CHECK(th.coeffs[1] == d.pi);
  // Below u^p the series agrees with exp(pi u): k! c_k = pi^k.
  mpz_class fact = 1;
  for (long k = 2; k < p; ++k) {
    fact *= k;
    CHECK(th.coeffs[k] * scalar_like(one, fact) == d.pi.pow(static_cast<unsigned long>(k)));
  }
  REQUIRE(th.cert.has_value());
  CHECK(satisfies(th, *th.cert));
  const auto th3 = splitting_function(dwork_pi(3, 40), 40);
  CHECK(satisfies(th3, *th3.cert));
  CHECK(check_growth(th3, Rational(1) / th3.cert->m).holds);
}

TEST_CASE("Frobenius structure series") {
  const DworkPi d = dwork_pi(3, 30);
  const auto th = splitting_function(d, 20);
  const auto e1 = frobenius_structure(monomial(3, 1, 1), d, 20);
  CHECK(e1.coeffs == th.coeffs);
  CHECK_THROWS(frobenius_structure(FFPoly(ff::field(3, 1)), d, 20));
  CHECK_THROWS(frobenius_structure(monomial(3, 1, 3), d, 20));
  CHECK_THROWS(frobenius_structure(monomial(3, 1, 1) + FFPoly::constant(FFElem(ff::field(3, 1), 1)), d, 20));

  const auto c = compose(GrowthCertificate{2, 1}, GrowthCertificate{3, 2});
  CHECK(c.m == 3);
  CHECK(c.b == 3);
}

TEST_CASE("theta matrix entries") {
  const DworkPi d = dwork_pi(3, 30);
  const auto one = scalar_like(d.pi, 1);
  TruncatedSeries unit{{one, PadicScalar(d.pi.ring()), PadicScalar(d.pi.ring()), PadicScalar(d.pi.ring())}, {}};
  const auto m1 = theta_matrix(unit, 2);
  CHECK(m1(0, 0) == one);
  CHECK(m1(0, 1).is_zero());
  CHECK(m1(1, 0).is_zero());
  CHECK(m1(1, 1).is_zero());

  // Entry (1, 1) is E_{3 - 1} = pi^2 / 2 for E = theta.
  const auto th = splitting_function(d, 20);
  const auto m = theta_matrix(th, 4);
  CHECK(m(1, 1) * scalar_like(one, 2) == d.pi.pow(2));
  CHECK(m(0, 0) == one);
  CHECK(m(2, 1) == th.coeffs[5]);
  CHECK_THROWS_AS(theta_matrix(th, 10), std::invalid_argument);

  for (long size = 1; size <= 5; ++size) {
    const auto ms = theta_matrix(th, size);
    CHECK(fredholm_coefficients(ms) == fredholm_coefficients_by_minors(ms));
  }
}

TEST_CASE("fast and reference backends agree") {
  for (const auto& [p, e] : std::vector<std::pair<long, int>>{{3, 2}, {5, 4}, {3, 4}, {7, 3}}) {
    const FFPoly f = monomial(p, 1, e) + monomial(p, 2, 1);
    const PadicRing& ring = padic_ring(p, 40);
    REQUIRE(fast_path_available(ring));
    CHECK(fredholm_series(f, 12, 40, Backend::fast) == fredholm_series(f, 12, 40, Backend::reference));
  }
}

TEST_CASE("local NP through the trace formula") {
  const auto a = local_np_oracle(monomial(3, 1, 2), 1);
  CHECK(a.np == sum_np("p = 3\nf = x^2", 1));
  CHECK(a.np.slopes() == R({Rational(1, 2)}));
  CHECK(a.theta_growth.holds);
  CHECK(a.run.c_np == a.check.c_np);
  CHECK(a.check.size == 2 * a.run.size);
  CHECK(a.check.precision == a.run.precision + 20);

  const auto b = local_np_oracle(monomial(5, 1, 4), 1);
  CHECK(b.np == sum_np("p = 5\nf = x^4", 1));
  CHECK(b.np.slopes() == R({Rational(1, 4), Rational(1, 2), Rational(3, 4)}));

  const auto c = local_np_oracle(monomial(7, 1, 3), Rational(1, 2));
  CHECK(c.np == sum_np("p = 7\nf = x^3", Rational(1, 2)));
  CHECK(c.np.slopes() == R({Rational(1, 3)}));

  CHECK_THROWS_AS(local_np_oracle(monomial(3, 1, 2), 0), std::invalid_argument);
  CHECK_THROWS_AS(local_np_oracle(monomial(3, 1, 2), 2), std::invalid_argument);
}

TEST_CASE("Hodge bound and block periodicity of the Fredholm series") {
  CHECK(hp_delta(3, 2, 3).slopes() == R({1, 2, 3}));
  CHECK(hp_delta(5, 4, 2).slopes() == R({1, 2}));
  const auto h = hodge_bound_check(monomial(3, 1, 2), 1);
  CHECK(h.ok);
  REQUIRE_FALSE(h.np.empty());
  CHECK(h.np.slopes().front() == 1);
  CHECK(h.hp.slopes().front() == 1);

  const auto b = block_periodicity_check(monomial(5, 1, 4), 1);
  CHECK_MESSAGE(b.ok, b.diagnostic);
}
