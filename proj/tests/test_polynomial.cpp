#include <doctest.h>

#include <random>

#include "zsiglab/polynomial.hpp"

using namespace zsig;

namespace {

const NumberField Q;

Polynomial poly(std::initializer_list<long> low_first) {
  std::vector<FieldElement> c;
  for (long v : low_first) c.emplace_back(v);
  return Polynomial(Q, c);
}

}  // namespace

TEST_CASE("basic arithmetic") {
  const Polynomial f = poly({1, 0, 1});  // x^2 + 1
  CHECK(f.degree() == 2);
  CHECK(f.evaluate(3) == FieldElement(10));
  CHECK(f.derivative() == poly({0, 2}));
  CHECK(f.compose(f) == poly({2, 0, 2, 0, 1}));
  CHECK(f.pow(2) == poly({1, 0, 2, 0, 1}));
  CHECK((f - f).is_zero());
  CHECK((f - f).degree() == -1);
}

TEST_CASE("divmod reconstructs") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> u(-9, 9);
  for (int k = 0; k < 50; ++k) {
    Polynomial a = poly({u(rng), u(rng), u(rng), u(rng), u(rng), 1});
    Polynomial b = poly({u(rng), u(rng), 3});
    auto [q, r] = a.divmod(b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
  }
}

TEST_CASE("resultant and discriminant") {
  CHECK(discriminant(poly({1, 0, 1})) == FieldElement(-4));
  CHECK(discriminant(poly({2, 0, 2, 0, 1})) == FieldElement(512));  // x^4 + 2x^2 + 2
  CHECK(discriminant(poly({-2, 0, 0, 1})) == FieldElement(-108));  // x^3 - 2
  // Res(x - a, g) = g(a)
  const Polynomial g = poly({5, -3, 0, 2});
  CHECK(resultant(poly({-7, 1}), g) == g.evaluate(7));
  // common root gives zero
  CHECK(resultant(poly({-1, 0, 1}), poly({1, 1})) == FieldElement(0));
}

TEST_CASE("discriminant over Q(i)") {
  const NumberField Qi = NumberField::imaginary_quadratic(1);
  // x^2 - i : disc = 4i
  const Polynomial f(Qi, {FieldElement(Qi, 0, -1), FieldElement(Qi, 0), FieldElement(Qi, 1)});
  CHECK(discriminant(f) == FieldElement(Qi, 0, 4));
}
