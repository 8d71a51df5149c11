#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "nhlab/ff.hpp"

using namespace nhlab::ff;

namespace {

FFElem random_elem(const FieldParams& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, f.size - 1);
  return FFElem::from_index(f, d(rng));
}

}  // namespace

TEST_CASE("enumeration sizes and symmetry") {
  CHECK(enumerate(field(3, 1)).size() == 3);
  const auto f81 = enumerate(field(3, 4));
  CHECK(f81.size() == 81);
  std::set<std::uint64_t> seen;
  for (const auto& x : f81) seen.insert(x.index());
  CHECK(seen.size() == 81);

  FFElem sum = FFElem::zero(field(5, 2));
  for (const auto& x : enumerate(field(5, 2))) sum += x;
  CHECK(sum.is_zero());
}

TEST_CASE("chunks partition the enumeration") {
  for (const auto* f : {&field(3, 4), &field(5, 2), &field(2, 5)}) {
    for (unsigned parts : {1U, 3U, 7U, 200U}) {
      std::vector<std::uint64_t> got;
      for (const auto& r : enumeration_chunks(*f, parts))
        for_each_element(*f, r, [&](const FFElem& x) { got.push_back(x.index()); });
      REQUIRE(got.size() == f->size);
      for (std::uint64_t i = 0; i < f->size; ++i) CHECK(got[i] == i);
    }
  }
}

TEST_CASE("modulus choice is the smallest irreducible") {
  // x^2 + 1 is the first irreducible quadratic over F_3 in the c_0 + 3 c_1 order.
  CHECK(field(3, 2).modulus == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(field(2, 2).modulus == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(is_irreducible(3, {1, 0, 1}));
  CHECK_FALSE(is_irreducible(5, {1, 0, 1}));  // 2^2 = -1 mod 5
  // Cross-check against root counting for cubics over F_5: a cubic is
  // irreducible exactly when it has no root.
  for (std::uint32_t c0 = 0; c0 < 5; ++c0)
    for (std::uint32_t c1 = 0; c1 < 5; ++c1)
      for (std::uint32_t c2 = 0; c2 < 5; ++c2) {
        bool root = false;
        for (std::uint32_t x = 0; x < 5; ++x) root = root || (c0 + c1 * x + c2 * x * x + x * x * x) % 5 == 0;
        CHECK(is_irreducible(5, {c0, c1, c2, 1}) == !root);
      }
}

TEST_CASE("absolute trace examples") {
  CHECK(absolute_trace(FFElem::one(field(3, 3))) == 0);
  CHECK(absolute_trace(FFElem::one(field(3, 2))) == 2);
  CHECK(absolute_trace(FFElem::zero(field(3, 4))) == 0);
  const FFElem a = FFElem::generator(field(3, 2));
  CHECK((a * a + FFElem::one(field(3, 2))).is_zero());
  CHECK((a + a.pow(3)).is_zero());
  CHECK(absolute_trace(a) == 0);
}

TEST_CASE("trace is linear, surjective and matches the Frobenius sum") {
  for (int k = 1; k <= 4; ++k) {
    for (long p : {2L, 3L, 5L}) {
      if (k == 4 && p == 5) continue;
      const FieldParams& f = field(p, k);
      std::set<long> image;
      const auto all = enumerate(f);
      for (const auto& x : all) {
        const long t = absolute_trace(x);
        image.insert(t);
        const FFElem direct = frobenius_trace_sum(x);
        CHECK(direct.is_prime_field());
        CHECK(static_cast<long>(direct.coeff(0)) == t);
      }
      CHECK(static_cast<long>(image.size()) == p);
      std::mt19937_64 rng(static_cast<std::uint64_t>(p * 10 + k));
      for (int t = 0; t < 50; ++t) {
        const FFElem x = random_elem(f, rng), y = random_elem(f, rng);
        const long c = static_cast<long>(rng() % static_cast<std::uint64_t>(p));
        CHECK(absolute_trace(x.scaled(c) + y) == (c * absolute_trace(x) + absolute_trace(y)) % p);
      }
    }
  }
}

TEST_CASE("Frobenius is an automorphism fixing exactly the prime field") {
  for (int k = 1; k <= 4; ++k) {
    const FieldParams& f = field(3, k);
    std::set<std::uint64_t> images;
    long fixed = 0;
    for (const auto& x : enumerate(f)) {
      const FFElem fx = x.frobenius();
      images.insert(fx.index());
      if (fx == x) {
        ++fixed;
        CHECK(x.is_prime_field());
      }
    }
    CHECK(images.size() == f.size);
    CHECK(fixed == 3);
  }
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(5);
  const FieldParams& f = field(5, 3);
  for (int t = 0; t < 500; ++t) {
    const FFElem x = random_elem(f, rng), y = random_elem(f, rng), z = random_elem(f, rng);
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((x * y) * z == x * (y * z));
    if (!x.is_zero()) CHECK((x * x.inverse()).is_one());
    CHECK(x.pow(f.size) == x);
  }
}

TEST_CASE("embeddings are homomorphisms") {
  CHECK(embed(FFElem::one(field(3, 2)), field(3, 4)).is_one());
  const FFElem two = embed(FFElem(field(3, 1), 2), field(3, 4));
  CHECK(two.is_prime_field());
  CHECK(two.coeff(0) == 2);
  CHECK_THROWS_AS(embed(FFElem::one(field(3, 2)), field(3, 3)), std::invalid_argument);

  std::mt19937_64 rng(11);
  for (const auto& [a, b] : std::vector<std::pair<int, int>>{{2, 4}, {2, 6}, {3, 6}, {1, 5}}) {
    const FieldParams& src = field(3, a);
    const FieldParams& dst = field(3, b);
    for (int t = 0; t < 1000 / 4; ++t) {
      const FFElem x = random_elem(src, rng), y = random_elem(src, rng);
      CHECK(embed(x * y, dst) == embed(x, dst) * embed(y, dst));
      CHECK(embed(x + y, dst) == embed(x, dst) + embed(y, dst));
    }
    // The image of the generator is a root of the source modulus.
    const FFElem g = embedding(src, dst).image_of_generator();
    FFElem acc = FFElem::zero(dst);
    for (int i = a; i >= 0; --i) acc = acc * g + FFElem(dst, static_cast<long>(src.modulus[i]));
    CHECK(acc.is_zero());
  }
}
