#include <doctest.h>

#include <cmath>
#include <random>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/error.hpp"
#include "zsiglab/heights.hpp"
#include "zsiglab/quadratic.hpp"

using namespace zsig;

namespace {

const NumberField Q;

UnicriticalMap m(long gamma, long c, int d = 2) { return UnicriticalMap::make(Q, d, gamma, c); }

}  // namespace

TEST_CASE("decomposition examples") {
  const auto a = decompose(m(0, 3), 0, 3, 2);
  CHECK(a.u == FieldElement(1));
  CHECK(a.d_part == FieldElement(3));
  CHECK(a.y == FieldElement(7));
  CHECK(a.valid());

  const auto b = decompose(m(0, 1), 0, 3, 2);
  CHECK(b.u == FieldElement(1));
  CHECK(b.d_part == FieldElement(5));
  CHECK(b.y == FieldElement(1));

  const auto c = decompose(m(0, 1), FieldElement::rational(mpq_class(1, 2)), 2, 2);
  CHECK(c.value == FieldElement::rational(mpq_class(41, 16)));
  CHECK(c.u == FieldElement::rational(mpq_class(1, 16)));
  CHECK(c.d_part == FieldElement(41));
  CHECK(c.y == FieldElement(1));
  REQUIRE(c.S.size() == 1);
  CHECK(c.S[0].rational_prime == 2);
  CHECK(c.valid());
}

TEST_CASE("decomposition over random data") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> u(-5, 5), den(1, 4);
  const NumberField Qi = NumberField::imaginary_quadratic(1);
  int done = 0;
  for (int k = 0; k < 60; ++k) {
    const NumberField& K = k % 3 == 0 ? Qi : Q;
    const auto f = UnicriticalMap::make(K, 2 + k % 2, FieldElement(K, u(rng), K.is_rational() ? 0 : u(rng)),
                                        FieldElement(K, u(rng), K.is_rational() ? 0 : u(rng)));
    const FieldElement alpha(K, mpq_class(u(rng), den(rng)));
    const int n = 1 + k % 4;
    const int l = 2 + k % 2;
    if (iterate(f, alpha, n).at(n).is_zero()) continue;
    SUnitDecomposition dec;
    try {
      dec = decompose(f, alpha, n, l);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::BudgetExceeded);
      continue;
    }
    ++done;
    CHECK(dec.reconstruct() == dec.value);
    CHECK(dec.valid());
    if (K.is_rational() && alpha.is_integral()) CHECK((dec.u == FieldElement(1) || dec.u == FieldElement(-1)));
  }
  CHECK(done >= 40);
}

TEST_CASE("unit height bound") {
  const auto f = m(0, 1);
  const FieldElement half = FieldElement::rational(mpq_class(1, 2));
  const auto dec = decompose(f, half, 2, 2);
  const auto r = check_unit_height_bound(dec, f, half, 10);
  CHECK(r.lhs == doctest::Approx(std::log(16.0)));
  CHECK(r.rhs == doctest::Approx(10 * std::log(2.0)));
  CHECK(r.holds);
  const FieldElement sixth = FieldElement::rational(mpq_class(1, 6));
  const auto r6 = check_unit_height_bound(decompose(f, sixth, 2, 2), f, sixth, 10);
  CHECK(r6.lhs == doctest::Approx(h(FieldElement::rational(mpq_class(1, 1296)))));
  CHECK(r6.holds);
  CHECK(check_unit_height_bound(decompose(m(0, 3), 0, 3, 2), m(0, 3), 0, 1).lhs == 0.0);
}

TEST_CASE("witness curves") {
  const auto w = heightunif_witness(m(0, 1), 0, 4);
  CHECK(w.x == FieldElement(1));
  CHECK(w.y == FieldElement(26));
  CHECK(w.on_curve());
  CHECK(w.disc_nonzero);

  const auto v = heightunif_witness(m(0, 3), 0, 3);
  CHECK(v.x == FieldElement(0));
  CHECK(v.y == FieldElement(21));
  CHECK(v.on_curve());

  try {
    heightunif_witness(m(0, 1), 0, 2);
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK_THROWS_AS(heightunif_witness(m(0, 1, 3), 0, 4), Error);
}

TEST_CASE("Y1 mass") {
  const auto a = check_Y1_mass(m(0, 1), 0, 4, 0.5);
  CHECK(a.lhs == doctest::Approx(std::log(26.0)));
  CHECK(a.holds);
  const auto b = check_Y1_mass(m(0, 3), 0, 3, 0.3);
  CHECK(b.lhs == doctest::Approx(std::log(3.0)));
  CHECK(b.rhs == doctest::Approx(0.3 * std::log(147.0)));
  CHECK_FALSE(b.holds);
  CHECK(check_Y1_mass(m(0, 3), 0, 3, 0.0).holds);
}
