#include <doctest.h>

#include <algorithm>
#include <random>

#include "nhlab/polygon.hpp"

using namespace nhlab;

namespace {

std::vector<Rational> R(std::initializer_list<Rational> xs) { return xs; }

SlopePolygon P(std::initializer_list<Rational> xs) { return SlopePolygon::from_slopes(xs); }

// Height of the lower hull at integer x: the minimum over all chords through
// pairs of points that straddle x.
Rational hull_height(const std::vector<Vertex>& pts, long x) {
  std::optional<Rational> best;
  for (const auto& a : pts)
    for (const auto& b : pts) {
      if (a.x > x || b.x < x) continue;
      Rational y = a.y;
      if (b.x != a.x) y = a.y + (b.y - a.y) * Rational(x - a.x, b.x - a.x);
      else if (a.x != x) continue;
      if (!best || y < *best) best = y;
    }
  return *best;
}

SlopePolygon random_polygon(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), num(0, 12), den(1, 4);
  std::vector<Rational> s(len(rng));
  for (auto& x : s) x = Rational(num(rng), den(rng));
  return SlopePolygon::from_slopes(s);
}

}  // namespace

TEST_CASE("construction, truncation and concatenation") {
  const auto a = P({Rational(1, 2), 0, 1});
  CHECK(a.slopes() == R({0, Rational(1, 2), 1}));
  CHECK(a.terminal().x == 3);
  CHECK(a.terminal().y == Rational(3, 2));
  CHECK(a.value_at(2) == Rational(1, 2));
  CHECK(truncate_below(a, 1).slopes() == R({0, Rational(1, 2)}));
  CHECK(truncate_below(a, Rational(1, 2)).slopes() == R({0}));
  CHECK(truncate_below(a, 0).empty());
  CHECK(concat(P({1, 3}), P({2})).slopes() == R({1, 2, 3}));
  CHECK_THROWS_AS(concat(SlopePolygon::from_slopes({1}, PolygonUnit::q_adic(3)), P({1})), std::invalid_argument);

  const auto v = P({0, 0, 1, 1, 2}).vertices();
  REQUIRE(v.size() == 4);
  CHECK(v[1].x == 2);
  CHECK(v[2].x == 4);
  CHECK(v[3].y == 4);
}

TEST_CASE("scale retags the unit") {
  const auto a = SlopePolygon::from_slopes({1, 2}, PolygonUnit::pi_adic(3, 1));
  const auto b = scale(a, Rational(1, 2), PolygonUnit::q_adic(3));
  CHECK(b.slopes() == R({Rational(1, 2), 1}));
  CHECK(b.unit() == PolygonUnit::q_adic(3));
}

TEST_CASE("Newton polygon of polynomials") {
  const CycloParams c3(3, 1);
  const auto pi_unit = PolygonUnit::pi_adic(3, 1);
  const auto q_unit = PolygonUnit::q_adic(3);
  auto Z = [&](long k) { return CyclotomicInteger::from_integer(c3, k); };

  // 1 + s + 3 s^2: pi-adic slopes 0 and v_pi(3) = 2 = p - 1.
  CHECK(np_of_polynomial({Z(1), Z(1), Z(3)}, pi_unit).slopes() == R({0, 2}));
  CHECK(np_of_polynomial({Z(1), Z(1), Z(3)}, q_unit).slopes() == R({0, 1}));
  // 1 + (1 + 2 zeta) s has q-adic slope 1/2.
  CHECK(np_of_polynomial({Z(1), CyclotomicInteger(c3, {1, 2})}, q_unit).slopes() == R({Rational(1, 2)}));
  // 1 + 0 s + 9 s^2: the zero coefficient is skipped.
  CHECK(np_of_polynomial({Z(1), Z(0), Z(9)}, q_unit).slopes() == R({1, 1}));
  CHECK_THROWS(np_of_polynomial({Z(2), Z(1)}, q_unit));
}

TEST_CASE("np_of_valuations matches the brute-force hull") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> len(1, 9), val(0, 15), gap(0, 3);
  for (int t = 0; t < 500; ++t) {
    const int n = len(rng);
    std::vector<Valuation> vals{Valuation(0)};
    std::vector<Vertex> pts{{0, Rational(0)}};
    for (int i = 1; i <= n; ++i) {
      if (i < n && gap(rng) == 0) {
        vals.push_back(Valuation::infinite());
        continue;
      }
      const Rational v(val(rng), 1 + gap(rng));
      vals.push_back(Valuation(v));
      pts.push_back({i, v});
    }
    const auto np = np_of_valuations(vals, {});
    REQUIRE(np.length() == n);
    for (long x = 0; x <= n; ++x) CHECK(np.value_at(x) == hull_height(pts, x));
  }
}

TEST_CASE("NP of a product is the concatenation of the factors") {
  // Product of linear factors 1 - a_i s with a_i = 3^{e_i} u_i has slopes e_i.
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> e(0, 3), u(1, 2), n(1, 5);
  const CycloParams c3(3, 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<CyclotomicInteger> poly{CyclotomicInteger::from_integer(c3, 1)};
    std::vector<Rational> expected;
    const int k = n(rng);
    for (int i = 0; i < k; ++i) {
      const int ei = e(rng);
      expected.push_back(ei);
      long a = u(rng);
      for (int j = 0; j < ei; ++j) a *= 3;
      std::vector<CyclotomicInteger> next(poly.size() + 1, CyclotomicInteger(c3));
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j] += poly[j];
        next[j + 1] -= poly[j] * CyclotomicInteger::from_integer(c3, a);
      }
      poly = std::move(next);
    }
    std::sort(expected.begin(), expected.end());
    CHECK(np_of_polynomial(poly, PolygonUnit::q_adic(3)).slopes() == expected);
  }
}

TEST_CASE("comparison is a partial order and respects truncation and concat") {
  CHECK(lies_on_or_above(P({1, 1}), P({0, 2})));
  CHECK_FALSE(lies_on_or_above(P({0, 2}), P({1, 1})));
  CHECK(shares_terminal_point(P({1, 1}), P({0, 2})));
  CHECK_FALSE(shares_terminal_point(P({1}), P({1, 1})));

  std::mt19937_64 rng(37);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_polygon(rng, 6), b = random_polygon(rng, 6), c = random_polygon(rng, 6);
    CHECK(lies_on_or_above(a, a));
    if (a.length() == b.length() && lies_on_or_above(a, b) && lies_on_or_above(b, a)) CHECK(a == b);
    const long m = std::min({a.length(), b.length(), c.length()});
    auto cut = [m](const SlopePolygon& x) {
      std::vector<Rational> s(x.slopes().begin(), x.slopes().begin() + m);
      return SlopePolygon::from_slopes(s);
    };
    if (lies_on_or_above(cut(a), cut(b)) && lies_on_or_above(cut(b), cut(c))) CHECK(lies_on_or_above(cut(a), cut(c)));

    // Truncation distributes over concatenation.
    const Rational r(static_cast<long>(rng() % 13), 1 + static_cast<long>(rng() % 3));
    CHECK(truncate_below(concat(a, b), r) == concat(truncate_below(a, r), truncate_below(b, r)));
    // Slope-wise domination survives concatenation with a common polygon.
    if (a.length() == b.length()) {
      bool dominates = true;
      for (long i = 0; i < a.length(); ++i) dominates = dominates && a.slopes()[i] >= b.slopes()[i];
      if (dominates) CHECK(lies_on_or_above(concat(a, c), concat(b, c)));
    }
  }
}

TEST_CASE("CSV and SVG artifacts") {
  const auto csv = to_csv(P({Rational(1, 2), 1}));
  CHECK(csv.rfind("index,x,y_num,y_den\n", 0) == 0);
  CHECK(csv.find("1,1,1,2") != std::string::npos);
  CHECK(csv.find("2,2,3,2") != std::string::npos);
  const auto svg = to_svg({{"NP", P({1, 1})}, {"HP", P({0, 2})}}, "demo");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg == to_svg({{"NP", P({1, 1})}, {"HP", P({0, 2})}}, "demo"));
}
